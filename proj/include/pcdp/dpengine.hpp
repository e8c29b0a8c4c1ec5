#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pcdp/error.hpp"
#include "pcdp/pcf.hpp"

namespace pcdp {

inline std::size_t row_pieces(const pcf& f) { return f.size(); }

namespace dp {

using row_id = std::size_t;
inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

// Rows with cached values, a dependency DAG and per-row procedures.
// Row needs an ADL-visible row_pieces(const Row&).
template <class Row>
class table {
public:
    using procedure = std::function<Row(const std::vector<const Row*>&)>;

    row_id add_row(procedure proc, std::vector<row_id> inputs = {}) {
        row_id id = rows_.size();
        rows_.push_back({std::move(proc), {}, {}, std::nullopt});
        set_inputs(id, std::move(inputs));
        return id;
    }

    void set_inputs(row_id i, std::vector<row_id> inputs) {
        check(i);
        for (row_id j : inputs) check(j);
        auto& r = rows_[i];
        for (row_id j : r.inputs) std::erase(rows_[j].outputs, i);
        r.inputs = std::move(inputs);
        for (row_id j : r.inputs) rows_[j].outputs.push_back(i);
    }

    void set_procedure(row_id i, procedure proc) {
        check(i);
        rows_[i].proc = std::move(proc);
    }

    const std::vector<row_id>& inputs(row_id i) const { return check(i), rows_[i].inputs; }

    void set_piece_bound(std::size_t p) { piece_bound_ = p; }
    std::size_t piece_bound() const { return piece_bound_; }

    std::size_t size() const { return rows_.size(); }
    bool has(row_id i) const { return i < rows_.size() && rows_[i].cache.has_value(); }

    const Row& get(row_id i) const {
        check(i);
        if (!rows_[i].cache) fail(errc::precondition_violated, "row " + std::to_string(i) + " not computed");
        return *rows_[i].cache;
    }

    void compute_all() {
        for (row_id i : topo_order()) compute(i);
    }

    // recompute i and everything that depends on it, in topological order
    std::vector<row_id> update_row(row_id i) {
        check(i);
        auto order = reach_order(i);
        for (row_id j : order) compute(j);
        return order;
    }

    // rows that depend on i, transitively (i excluded)
    std::vector<row_id> reach(row_id i) const {
        auto order = reach_order(i);
        order.erase(order.begin());
        return order;
    }

    // caller-supplied order, e.g. a root path after a link or cut
    void recompute(const std::vector<row_id>& order) {
        for (row_id j : order) compute(j);
    }

    std::size_t recompute_count() const { return counter_; }
    void reset_count() { counter_ = 0; }

    std::vector<row_id> topo_order() const {
        std::vector<std::size_t> indeg(rows_.size());
        for (row_id i = 0; i < rows_.size(); ++i) indeg[i] = rows_[i].inputs.size();
        std::vector<row_id> ready, order;
        for (row_id i = 0; i < rows_.size(); ++i)
            if (indeg[i] == 0) ready.push_back(i);
        while (!ready.empty()) {
            row_id i = ready.back();
            ready.pop_back();
            order.push_back(i);
            for (row_id o : rows_[i].outputs)
                if (--indeg[o] == 0) ready.push_back(o);
        }
        if (order.size() != rows_.size()) fail(errc::cycle_detected, "dependency graph has a cycle");
        return order;
    }

private:
    struct entry {
        procedure proc;
        std::vector<row_id> inputs;
        std::vector<row_id> outputs;
        std::optional<Row> cache;
    };

    void check(row_id i) const {
        if (i >= rows_.size()) fail(errc::unknown_row, "no row " + std::to_string(i));
    }

    void compute(row_id i) {
        auto& r = rows_[i];
        std::vector<const Row*> in;
        in.reserve(r.inputs.size());
        for (row_id j : r.inputs) {
            if (!rows_[j].cache) fail(errc::precondition_violated, "input row " + std::to_string(j) + " not computed");
            in.push_back(&*rows_[j].cache);
        }
        Row out = r.proc(in);
        if (row_pieces(out) > piece_bound_)
            fail(errc::piece_bound_exceeded, "row " + std::to_string(i) + " has " + std::to_string(row_pieces(out)) +
                                                 " pieces, bound " + std::to_string(piece_bound_));
        r.cache = std::move(out);
        ++counter_;
    }

    // i first, then its reach in an order where inputs precede outputs
    std::vector<row_id> reach_order(row_id i) const {
        check(i);
        std::vector<char> mark(rows_.size(), 0);
        std::vector<row_id> post;
        // iterative DFS along outputs; reverse postorder is topological
        std::vector<std::pair<row_id, std::size_t>> stack{{i, 0}};
        mark[i] = 1;
        while (!stack.empty()) {
            auto& [u, k] = stack.back();
            if (k < rows_[u].outputs.size()) {
                row_id o = rows_[u].outputs[k++];
                if (mark[o] == 1) fail(errc::cycle_detected, "dependency graph has a cycle");
                if (!mark[o]) {
                    mark[o] = 1;
                    stack.push_back({o, 0});
                }
            } else {
                mark[u] = 2;
                post.push_back(u);
                stack.pop_back();
            }
        }
        return {post.rbegin(), post.rend()};
    }

    std::vector<entry> rows_;
    std::size_t piece_bound_ = std::numeric_limits<std::size_t>::max();
    std::size_t counter_ = 0;
};

// Forest of rooted trees; each non-root knows the capacity of its parent edge.
// link and cut return the vertices whose rows must be recomputed, children
// before parents.
class rooted_forest {
public:
    explicit rooted_forest(std::size_t n = 0);

    std::size_t size() const { return parent_.size(); }
    std::size_t add_vertex();
    std::size_t parent(std::size_t v) const { return parent_[v]; }
    bool is_root(std::size_t v) const { return parent_[v] == npos; }
    const std::vector<std::size_t>& children(std::size_t v) const { return kids_[v]; }
    double parent_cap(std::size_t v) const { return cap_[v]; }
    void set_parent_cap(std::size_t v, double c);

    std::size_t root_of(std::size_t v) const;
    std::size_t depth(std::size_t v) const;
    std::size_t height() const; // max depth over all vertices
    std::vector<std::size_t> roots() const;
    std::vector<std::size_t> path_to_root(std::size_t v) const; // v, parent(v), ..., root
    std::vector<std::size_t> postorder() const;                 // children before parents
    bool has_edge(std::size_t u, std::size_t v) const;

    std::vector<std::size_t> cut(std::size_t u, std::size_t v);
    // makes u the parent of v, re-rooting v's tree at v first if needed
    std::vector<std::size_t> link(std::size_t u, std::size_t v, double cap);

    bool operator==(const rooted_forest&) const = default;

private:
    void check(std::size_t v) const;
    void attach(std::size_t u, std::size_t v, double cap);
    void detach(std::size_t v);

    std::vector<std::size_t> parent_;
    std::vector<std::vector<std::size_t>> kids_;
    std::vector<double> cap_;
};

// Binary version of a rooted forest. A vertex u with d >= 3 children becomes
// a heap-shaped tree tau_u of 2d-1 nodes: internal edges get capacity inf and
// leaf k hangs the k-th original child with its original capacity.
struct binarized {
    rooted_forest tree;
    std::vector<std::size_t> image;  // original vertex -> its r_u
    std::vector<std::size_t> origin; // new vertex -> original vertex, or npos for tau nodes
};

binarized binarize_tree(const rooted_forest& t);

struct weighted_edge {
    std::size_t u;
    std::size_t v;
    double cap;
};

struct sparsifier_tree {
    binarized tree;
    double quality = 1.0;
};

class cut_sparsifier {
public:
    virtual ~cut_sparsifier() = default;
    virtual sparsifier_tree build(std::size_t n, const std::vector<weighted_edge>& edges) const = 0;
};

// Only accepts trees; roots at vertex 0 and binarizes. Quality 1.
class tree_identity_sparsifier : public cut_sparsifier {
public:
    sparsifier_tree build(std::size_t n, const std::vector<weighted_edge>& edges) const override;
};

// roots every component of an edge list at its smallest vertex; NotATree on a cycle
rooted_forest forest_from_edges(std::size_t n, const std::vector<weighted_edge>& edges);

} // namespace dp
} // namespace pcdp
