#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "pcdp/convolution.hpp"
#include "pcdp/dpengine.hpp"
#include "pcdp/pcf.hpp"

// Simultaneous source location on trees. Row v is DP(v, x): the fewest
// sources inside T_v when v may draw at most x from its parent (x < 0 means
// T_v must push -x upwards).
namespace pcdp::ssl {

struct vertex {
    double demand = 0;
    bool source_ok = true;
};

struct row {
    pcf f = pcf::constant(-1, 1, inf); // rounded, on [-cap-1, cap+1]
    double source_value = inf;          // 1 + sum of DP(c, cap(c)) if v may be a source
    // chain[i] = children 0..i+1 convolved (chain is empty for <= 1 child)
    std::vector<conv_result> chain;
};
std::size_t row_pieces(const row& r);

// infinite below -cap, constant from cap on, domain [-cap-1, cap+1]
pcf clamp_row(const pcf& g, double cap);

// Row of a vertex with any number of children. Case B convolves all children
// (a lone child is paired with the neutral filler), Case A makes v a source.
row vertex_row(const std::vector<const row*>& kids, const std::vector<double>& kid_caps, const vertex& v, double cap,
               double delta);
inline row leaf_row(const vertex& v, double cap) { return vertex_row({}, {}, v, cap, 0.0); }

// Exact route: f(v, i), the least inflow T_v needs with at most i sources
// (-inf once v itself can be a source), computed by splitting i over the
// children; the row is its inverse min{i : f(v, i) <= x} on the capped domain.
std::vector<std::vector<double>> inflow_tables(const dp::rooted_forest& f, const std::vector<vertex>& vs);
pcf invert(const std::vector<double>& fv, double cap);

enum class mode { exact, approx };

struct options {
    double eps = 0.1;
    mode m = mode::approx;
    std::optional<double> delta; // override of ln(1+eps)/(h+1)
};

struct result {
    double raw = inf;                 // sum over roots of DP(r, 0)
    int value = 0;                    // size of the extracted source set
    std::vector<std::size_t> sources; // ascending
    double delta = 0;
    std::size_t height = 0;
    std::size_t max_pieces = 0;
};

std::vector<row> approx_rows(const dp::rooted_forest& f, const std::vector<vertex>& vs, double delta);
// walk the rows down from every root at x = 0; the set is feasible and has at most raw sources
std::vector<std::size_t> extract(const dp::rooted_forest& f, const std::vector<vertex>& vs,
                                 const std::vector<const row*>& rows);

double default_delta(double eps, std::size_t h);
// values lie in {0} ∪ [1, n] ∪ {inf}
std::size_t piece_bound(double delta, std::size_t n);

// Infeasible if some root needs flow from outside.
result solve(const dp::rooted_forest& f, const std::vector<vertex>& vs, const options& opt);

class dynamic {
public:
    dynamic(dp::rooted_forest f, std::vector<vertex> vs, const options& opt, std::size_t h);
    dynamic(const dynamic&) = delete;
    dynamic& operator=(const dynamic&) = delete;

    void set_demand(std::size_t v, double d);
    void set_capacity(std::size_t u, std::size_t v, double c);
    void remove(std::size_t u, std::size_t v);
    // v becomes a child of u
    void insert(std::size_t u, std::size_t v, double c);
    result query() const;

    const dp::rooted_forest& forest() const { return f_; }
    const std::vector<vertex>& vertices() const { return vs_; }
    const row& row_of(std::size_t v) const { return table_.get(v); }
    std::size_t last_recompute() const { return last_recompute_; }
    double delta() const { return delta_; }

private:
    void refresh(const std::vector<std::size_t>& order);

    dp::rooted_forest f_;
    std::vector<vertex> vs_;
    std::size_t h_;
    double delta_;
    dp::table<row> table_;
    std::size_t last_recompute_ = 0;
};

} // namespace pcdp::ssl
