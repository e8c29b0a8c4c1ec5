#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "pcdp/dpengine.hpp"
#include "pcdp/pcf.hpp"

namespace pcdp::partition {

inline constexpr std::size_t max_t = 32;
using sig = std::array<std::uint8_t, max_t>;

// Signature space for one instance: t classes, counts up to M-1, and the
// class thresholds xi_j = (1+eps)^j * eps * ceil(w(V)/k).
class space {
public:
    space(double eps, int k, int total_w);

    double eps() const { return eps_; }
    int k() const { return k_; }
    int t() const { return t_; }
    int M() const { return M_; }
    int total_w() const { return total_w_; }
    int ceil_wk() const { return ceil_wk_; }
    double xi(int j) const { return xi_[static_cast<std::size_t>(j)]; }
    // number of signatures, M^t (saturates at SIZE_MAX)
    std::size_t size() const;

    // -1 for a small component, j for e_j, nullopt if x > xi_{t-1}
    std::optional<int> class_of(double x) const;
    // largest integer x >= 0 with class_of(x) == j, or -1 if there is none
    int rep(int j) const { return rep_[static_cast<std::size_t>(j + 1)]; }
    sig unit(int j) const;
    // component-wise sum, nullopt if a coordinate exceeds M-1
    std::optional<sig> add(const sig& a, const sig& b) const;
    bool valid(const sig& g) const;
    // job sizes of the scheduling instance I(g), largest first
    std::vector<double> jobs(const sig& g) const;
    // makespan bound (1+eps_bar)(1+eps)ceil(w(V)/k)
    double makespan_bound(double eps_bar) const { return (1 + eps_bar) * (1 + eps_) * ceil_wk_; }

private:
    double eps_;
    int k_, t_, M_, total_w_, ceil_wk_;
    std::vector<double> xi_;
    std::vector<int> rep_;
};

sig zero_sig();
// e(x); WeightTooLarge if x needs a class >= t
sig sig_of_component(int x, const space& sp);
std::vector<int> sig_vector(const sig& g, const space& sp);
sig sig_from(const std::vector<int>& v);

// One DP cell DP(v, ., ., .). cut=true rows are constant in x and kept as
// numbers; cut=false rows are decreasing PCFs on [0, w(V)]. Missing keys are +inf.
struct row {
    std::map<sig, double> cut;
    std::map<sig, pcf> keep;
};
std::size_t row_pieces(const row& r);

row leaf_row(int w, double cap, const space& sp);
// the filler child of a one-child vertex: weight 0, capacity 0
inline row neutral_row(const space& sp) { return leaf_row(0, 0.0, sp); }

// Cases A-D for a vertex with two children, no rounding. threads == 1 runs
// the work list inline; otherwise the pairs are spread over OpenMP threads.
row combine(const row& l, const row& r, int w, double cap, const space& sp, int threads = 1);
// straightforward nested loops; kept as the reference for combine
row combine_reference(const row& l, const row& r, int w, double cap, const space& sp);

// inner min of Case B with a cut parent: min over x_l + x_r = s of fl(x_l) + fr(x_r),
// scanning only the pairs where a piece of fl or fr starts
double pair_min(const pcf& fl, const pcf& fr, double s);

// Full row of a vertex with any number of children: 0 -> leaf, 1 -> neutral
// second child, >= 3 -> folded through weight-0 virtual nodes with infinite
// parent capacity. Rounded once at the end if delta > 0.
row vertex_row(const std::vector<const row*>& kids, int w, double cap, const space& sp, double delta, int threads = 1);

row round_row(const row& r, double delta);

// Exact DP on integer grids x = 0..w(V), no PCFs involved.
struct exact_row {
    std::map<sig, double> cut;
    std::map<sig, std::vector<double>> keep;
};
exact_row exact_leaf_row(int w, double cap, const space& sp);
exact_row exact_combine(const exact_row& l, const exact_row& r, int w, double cap, const space& sp);
exact_row exact_vertex_row(const std::vector<const exact_row*>& kids, int w, double cap, const space& sp);

// Scheduling feasibility of I(g) on k machines with an exact branch and bound.
class scheduler {
public:
    scheduler(const space& sp, double eps_bar);
    bool feasible(const sig& g);
    // machine of each job of sp.jobs(g), or nullopt if infeasible
    std::optional<std::vector<int>> assign(const sig& g) const;
    double bound() const { return bound_; }

private:
    const space* sp_;
    double bound_;
    std::map<sig, bool> memo_;
};

// all feasible signatures; the space must be small enough to enumerate
std::vector<sig> feasible_signatures(const space& sp, double eps_bar);

enum class mode { exact, approx };

struct options {
    int k = 2;
    double eps = 0.5;
    double eps_bar = 0.1;
    mode m = mode::approx;
    // override of ln(1+eps)/(h+1); 0 disables rounding
    std::optional<double> delta;
    int threads = 1;
};

struct result {
    double value = inf;
    sig g{};                  // signature attaining the value
    std::vector<double> jobs; // I(g)
    std::vector<int> machine; // schedule witness, one entry per job
    double makespan = 0;
    double bound = 0;
    double delta = 0;
    std::size_t height = 0;
    std::size_t max_pieces = 0;
};

// min over feasible g of the forest's root rows combined by signature sums.
// Roots carry capacity 0 to their (virtual) parent. Infeasible if no g works.
result finish(const std::vector<const std::map<sig, double>*>& root_cuts, const space& sp, double eps_bar);

// Static solve on a rooted forest with 0/1 weights.
result solve(const dp::rooted_forest& f, const std::vector<int>& weight, const options& opt);
// all rows bottom-up, indexed by vertex
std::vector<row> approx_rows(const dp::rooted_forest& f, const std::vector<int>& weight, const space& sp,
                             double delta, int threads = 1);
std::vector<exact_row> exact_rows(const dp::rooted_forest& f, const std::vector<int>& weight, const space& sp);

double default_delta(double eps, std::size_t h);
// pieces a row may have: the integer grid, and after rounding the count of
// distinct rounded values in {0} ∪ [lo, W] ∪ {inf}
std::size_t piece_bound(const space& sp, double delta, double W, double lo);

// Approximate DP kept up to date under link and cut.
class dynamic {
public:
    // h bounds the forest height at all times; delta defaults to ln(1+eps)/(h+1)
    dynamic(dp::rooted_forest f, std::vector<int> weight, const options& opt, std::size_t h);
    dynamic(const dynamic&) = delete;
    dynamic& operator=(const dynamic&) = delete;

    void link(std::size_t u, std::size_t v, double cap);
    void cut(std::size_t u, std::size_t v);
    result query();

    const dp::rooted_forest& forest() const { return f_; }
    const row& row_of(std::size_t v) const { return table_.get(v); }
    std::size_t last_recompute() const { return last_recompute_; }
    double delta() const { return delta_; }
    const space& signature_space() const { return sp_; }

private:
    void wire(std::size_t v);
    void note_cap(double c);
    void refresh(const std::vector<std::size_t>& order);

    dp::rooted_forest f_;
    std::vector<int> w_;
    options opt_;
    std::size_t h_;
    space sp_;
    double delta_;
    dp::table<row> table_;
    std::unique_ptr<scheduler> sched_;
    std::size_t last_recompute_ = 0;
    double W_ = 0, lo_ = 1;
};

} // namespace pcdp::partition
