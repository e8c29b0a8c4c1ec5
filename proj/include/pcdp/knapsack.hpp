#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "pcdp/convolution.hpp"
#include "pcdp/dpengine.hpp"
#include "pcdp/pcf.hpp"

namespace pcdp {

struct kn_item {
    double p;
    double w;
};

struct knapsack_options {
    double eps = 0.1;
    double budget = 0;
    // upper bound on the total price; 0 picks the initial total (or 1e9 for an empty start)
    double W = 0;
};

// One node of the item tree: the rounded row, plus the unrounded convolution
// and its witness for solution extraction.
struct kn_row {
    pcf f = pcf::constant(0, 1, 0, mono::increasing);
    std::optional<pcf> conv;
    conv_witness w;
};
inline std::size_t row_pieces(const kn_row& r) { return r.f.size(); }

// Fully dynamic knapsack over a balanced item tree (heap layout, n a power of two).
class knapsack {
public:
    explicit knapsack(const knapsack_options& opt, const std::vector<kn_item>& items = {});

    std::size_t insert(double p, double w);
    void erase(std::size_t id);

    double value() const { return value_at(opt_.budget); }
    double value_at(double x) const;
    std::vector<std::size_t> solution() const { return solution_at(opt_.budget); }
    std::vector<std::size_t> solution_at(double x) const;

    const pcf& root() const;
    bool live(std::size_t id) const { return slot_of_.count(id) != 0; }
    const kn_item& item(std::size_t id) const;
    std::size_t size() const { return slot_of_.size(); }
    std::vector<std::size_t> ids() const;

    double budget() const { return opt_.budget; }
    double eps() const { return opt_.eps; }
    double W() const { return W_; }
    double delta() const { return delta_; }
    std::size_t slots() const { return n_; }
    std::size_t piece_bound() const;
    std::size_t max_pieces() const { return max_pieces_; }
    // rows recomputed by the last insert/erase (0 after a rebuild)
    std::size_t last_recompute() const { return last_recompute_; }
    std::size_t rebuilds() const { return rebuilds_; }
    double total_price() const { return total_p_; }

private:
    void rebuild(std::size_t n);
    kn_row leaf_row(std::size_t slot) const;
    kn_row inner_row(const kn_row& l, const kn_row& r) const;
    void touch(std::size_t slot);
    void collect(std::size_t node, double x, std::vector<std::size_t>& out) const;
    void note_pieces();

    knapsack_options opt_;
    double T_ = 1;
    double W_ = 1;
    double delta_ = 0;
    std::size_t n_ = 1;
    std::vector<std::optional<kn_item>> slot_item_;
    std::vector<std::size_t> slot_id_;
    std::map<std::size_t, std::size_t> slot_of_; // id -> slot
    std::map<std::size_t, kn_item> items_;       // live items by id
    std::set<std::size_t> free_;
    std::size_t next_id_ = 0;
    double total_p_ = 0;
    std::unique_ptr<dp::table<kn_row>> table_; // row k-1 is heap node k
    std::size_t max_pieces_ = 0;
    std::size_t last_recompute_ = 0;
    std::size_t rebuilds_ = 0;
};

// Items ordered by density (descending, ties by id) with subtree weight and
// price sums. Used for fractional knapsack over one U_l.
class density_treap {
public:
    struct key {
        double p;
        double w;
        std::size_t id;
        bool operator<(const key& o) const; // higher density first
        bool operator==(const key& o) const { return id == o.id; }
    };

    void insert(const key& k);
    bool erase(const key& k);
    std::size_t size() const { return size_of(root_); }
    double total_w() const { return sw(root_); }
    double total_p() const { return sp(root_); }

    struct prefix {
        double p = 0;
        double w = 0;
        std::size_t count = 0;
        std::optional<key> cut; // first item that did not fit
    };
    // longest density-ordered prefix of total weight <= b
    prefix fill(double b) const;
    std::vector<key> first(std::size_t count) const;
    std::vector<key> keys() const { return first(size()); }
    // recomputes every aggregate from scratch and compares
    bool aggregates_ok() const;

private:
    struct node {
        key k;
        std::uint64_t prio;
        std::int32_t l = -1, r = -1;
        std::size_t cnt = 1;
        double sw = 0, sp = 0;
    };
    std::size_t size_of(std::int32_t t) const { return t < 0 ? 0 : nodes_[t].cnt; }
    double sw(std::int32_t t) const { return t < 0 ? 0 : nodes_[t].sw; }
    double sp(std::int32_t t) const { return t < 0 ? 0 : nodes_[t].sp; }
    void pull(std::int32_t t);
    void split(std::int32_t t, const key& k, std::int32_t& a, std::int32_t& b); // a < k <= b
    std::int32_t merge(std::int32_t a, std::int32_t b);

    std::vector<node> nodes_;
    std::vector<std::int32_t> free_;
    std::int32_t root_ = -1;
};

// Layered variant: a small item tree over X (the 1/eps lightest items of each
// price class) plus fractional knapsack over the rest.
class fast_knapsack {
public:
    explicit fast_knapsack(const knapsack_options& opt, const std::vector<kn_item>& items = {});

    std::size_t insert(double p, double w);
    void erase(std::size_t id);

    double query_value();
    std::vector<std::size_t> query_solution() const;
    bool query_membership(std::size_t id) const;

    double eps() const { return eps_; } // snapped to 1/ceil(1/eps)
    std::size_t per_class() const { return k_; }
    int price_class(double p) const;
    std::vector<std::size_t> x_set() const;   // ids in X, ascending
    std::vector<std::size_t> y_set() const;   // ids in Y, ascending
    std::size_t classes() const { return by_class_.size(); }
    bool live(std::size_t id) const { return items_.count(id) != 0; }
    const kn_item& item(std::size_t id) const { return items_.at(id).it; }
    // every U_l treap holds exactly the Y-items of class <= l with correct sums
    bool u_consistent() const;
    const knapsack& inner() const { return *inner_; }

    // parts of the last answer
    double last_x_value() const { return ans_y_; }
    double last_y_value() const { return ans_yp_; }
    double last_x_budget() const { return ans_x_; }

private:
    struct entry {
        kn_item it;
        int cls;
        bool in_x = false;
        std::size_t inner_id = 0;
    };
    using vset = std::set<std::pair<double, std::size_t>>; // (w, id)

    void enter_x(std::size_t id);
    void leave_x(std::size_t id);
    void enter_y(std::size_t id);
    void leave_y(std::size_t id);
    void add_to_class(std::size_t id);
    void remove_from_class(std::size_t id);
    density_treap::key key_of(std::size_t id) const;
    const density_treap* u_for(int l) const;

    knapsack_options opt_;
    double eps_;
    std::size_t k_;
    std::map<std::size_t, entry> items_;
    std::map<int, vset> by_class_;
    std::map<int, density_treap> u_; // u_[c] = Y-items of class <= c
    std::unique_ptr<knapsack> inner_;
    std::map<std::size_t, std::size_t> outer_of_inner_;
    std::size_t next_id_ = 0;

    bool fresh_ = false;
    double ans_ = 0, ans_y_ = 0, ans_yp_ = 0, ans_x_ = 0;
    std::optional<int> ans_class_;
    std::optional<density_treap::key> ans_cut_;
    std::size_t ans_count_ = 0;
    std::set<std::size_t> ans_ix_;
};

} // namespace pcdp
