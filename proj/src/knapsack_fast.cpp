#include <algorithm>
#include <cmath>

#include "pcdp/knapsack.hpp"

namespace pcdp {

// ---- density treap ----

bool density_treap::key::operator<(const key& o) const {
    // p/w > o.p/o.w, compared without division
    double a = p * o.w, b = o.p * w;
    if (a != b) return a > b;
    return id < o.id;
}

namespace {

std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

} // namespace

void density_treap::pull(std::int32_t t) {
    auto& n = nodes_[t];
    n.cnt = 1 + size_of(n.l) + size_of(n.r);
    n.sw = sw(n.l) + n.k.w + sw(n.r);
    n.sp = sp(n.l) + n.k.p + sp(n.r);
}

void density_treap::split(std::int32_t t, const key& k, std::int32_t& a, std::int32_t& b) {
    if (t < 0) {
        a = b = -1;
        return;
    }
    if (nodes_[t].k < k) {
        split(nodes_[t].r, k, nodes_[t].r, b);
        a = t;
    } else {
        split(nodes_[t].l, k, a, nodes_[t].l);
        b = t;
    }
    pull(t);
}

std::int32_t density_treap::merge(std::int32_t a, std::int32_t b) {
    if (a < 0) return b;
    if (b < 0) return a;
    if (nodes_[a].prio > nodes_[b].prio) {
        nodes_[a].r = merge(nodes_[a].r, b);
        pull(a);
        return a;
    }
    nodes_[b].l = merge(a, nodes_[b].l);
    pull(b);
    return b;
}

void density_treap::insert(const key& k) {
    std::int32_t t;
    if (!free_.empty()) {
        t = free_.back();
        free_.pop_back();
        nodes_[t] = node{k, mix(k.id), -1, -1, 1, k.w, k.p};
    } else {
        t = static_cast<std::int32_t>(nodes_.size());
        nodes_.push_back(node{k, mix(k.id), -1, -1, 1, k.w, k.p});
    }
    std::int32_t a, b;
    split(root_, k, a, b);
    root_ = merge(merge(a, t), b);
}

bool density_treap::erase(const key& k) {
    std::int32_t a, b, m, c;
    split(root_, k, a, b);
    // b starts with k if present; peel off everything < successor
    key next = k;
    next.id = k.id + 1;
    split(b, next, m, c);
    bool found = m >= 0;
    if (found) {
        free_.push_back(m);
    }
    root_ = merge(a, c);
    return found;
}

density_treap::prefix density_treap::fill(double budget) const {
    prefix out;
    std::int32_t t = root_;
    while (t >= 0) {
        const auto& n = nodes_[t];
        if (out.w + sw(n.l) > budget) {
            t = n.l;
            continue;
        }
        out.w += sw(n.l);
        out.p += sp(n.l);
        out.count += size_of(n.l);
        if (out.w + n.k.w > budget) {
            out.cut = n.k;
            break;
        }
        out.w += n.k.w;
        out.p += n.k.p;
        out.count += 1;
        t = n.r;
    }
    return out;
}

std::vector<density_treap::key> density_treap::first(std::size_t count) const {
    std::vector<key> out;
    std::vector<std::int32_t> stack;
    std::int32_t t = root_;
    while ((t >= 0 || !stack.empty()) && out.size() < count) {
        while (t >= 0) {
            stack.push_back(t);
            t = nodes_[t].l;
        }
        t = stack.back();
        stack.pop_back();
        out.push_back(nodes_[t].k);
        t = nodes_[t].r;
    }
    return out;
}

bool density_treap::aggregates_ok() const {
    bool ok = true;
    auto rec = [&](auto&& self, std::int32_t t) -> std::tuple<std::size_t, double, double> {
        if (t < 0) return {0, 0.0, 0.0};
        auto [lc, lw, lp] = self(self, nodes_[t].l);
        auto [rc, rw, rp] = self(self, nodes_[t].r);
        std::size_t c = lc + 1 + rc;
        double w = lw + nodes_[t].k.w + rw, p = lp + nodes_[t].k.p + rp;
        if (c != nodes_[t].cnt || w != nodes_[t].sw || p != nodes_[t].sp) ok = false;
        return {c, w, p};
    };
    rec(rec, root_);
    auto ks = keys();
    for (std::size_t i = 1; i < ks.size(); ++i)
        if (!(ks[i - 1] < ks[i])) ok = false;
    return ok;
}

// ---- layered knapsack ----

fast_knapsack::fast_knapsack(const knapsack_options& opt, const std::vector<kn_item>& items) : opt_(opt) {
    if (!(opt.eps > 0) || !(opt.eps < 1)) fail(errc::bad_epsilon, "eps must lie in (0,1)");
    k_ = static_cast<std::size_t>(std::ceil(1.0 / opt.eps - 1e-12));
    eps_ = 1.0 / static_cast<double>(k_);
    knapsack_options inner = opt;
    inner.eps = eps_;
    double total = 0;
    for (const auto& it : items) total += it.p;
    inner.W = opt.W > 0 ? opt.W : (items.empty() ? 1e9 : std::max(1.0, total));
    opt_.W = inner.W;
    inner_ = std::make_unique<knapsack>(inner);
    for (const auto& it : items) insert(it.p, it.w);
}

int fast_knapsack::price_class(double p) const {
    // (1+eps)^l <= p < (1+eps)^(l+1)
    const double base = 1.0 + eps_;
    int l = static_cast<int>(std::floor(std::log(p) / std::log1p(eps_)));
    while (l > 0 && pow_int(base, l) > p) --l;
    while (pow_int(base, l + 1) <= p) ++l;
    return std::max(l, 0);
}

density_treap::key fast_knapsack::key_of(std::size_t id) const {
    const auto& e = items_.at(id);
    return {e.it.p, e.it.w, id};
}

void fast_knapsack::enter_x(std::size_t id) {
    auto& e = items_.at(id);
    e.in_x = true;
    e.inner_id = inner_->insert(e.it.p, e.it.w);
    outer_of_inner_[e.inner_id] = id;
}

void fast_knapsack::leave_x(std::size_t id) {
    auto& e = items_.at(id);
    inner_->erase(e.inner_id);
    outer_of_inner_.erase(e.inner_id);
    e.in_x = false;
}

void fast_knapsack::enter_y(std::size_t id) {
    int c = items_.at(id).cls;
    auto k = key_of(id);
    for (auto it = u_.lower_bound(c); it != u_.end(); ++it) it->second.insert(k);
}

void fast_knapsack::leave_y(std::size_t id) {
    int c = items_.at(id).cls;
    auto k = key_of(id);
    for (auto it = u_.lower_bound(c); it != u_.end(); ++it) it->second.erase(k);
}

void fast_knapsack::add_to_class(std::size_t id) {
    auto& e = items_.at(id);
    const int c = e.cls;
    if (!by_class_.count(c)) {
        // U_c starts as U of the next lower class
        auto below = u_.lower_bound(c);
        density_treap t = below == u_.begin() ? density_treap{} : std::prev(below)->second;
        u_.emplace(c, std::move(t));
    }
    auto& v = by_class_[c];
    auto pos = v.insert({e.it.w, id}).first;
    const auto rank = static_cast<std::size_t>(std::distance(v.begin(), pos));
    if (rank < k_) {
        // joins X; the previous k-th lightest moves to Y
        if (v.size() > k_) {
            std::size_t out = std::next(v.begin(), static_cast<std::ptrdiff_t>(k_))->second;
            leave_x(out);
            enter_y(out);
        }
        enter_x(id);
    } else {
        enter_y(id);
    }
}

void fast_knapsack::remove_from_class(std::size_t id) {
    auto& e = items_.at(id);
    const int c = e.cls;
    auto& v = by_class_[c];
    if (e.in_x) {
        leave_x(id);
        v.erase({e.it.w, id});
        if (v.size() >= k_) {
            std::size_t in = std::next(v.begin(), static_cast<std::ptrdiff_t>(k_ - 1))->second;
            leave_y(in);
            enter_x(in);
        }
    } else {
        leave_y(id);
        v.erase({e.it.w, id});
    }
    if (v.empty()) {
        by_class_.erase(c);
        u_.erase(c);
    }
}

std::size_t fast_knapsack::insert(double p, double w) {
    if (!(p >= 1) || !(w > 0) || !std::isfinite(p) || !std::isfinite(w))
        fail(errc::bad_argument, "items need price >= 1 and weight > 0");
    std::size_t id = next_id_++;
    items_[id] = entry{{p, w}, price_class(p)};
    try {
        add_to_class(id);
    } catch (...) {
        items_.erase(id);
        throw;
    }
    fresh_ = false;
    return id;
}

void fast_knapsack::erase(std::size_t id) {
    if (!items_.count(id)) fail(errc::unknown_item, "no live item " + std::to_string(id));
    remove_from_class(id);
    items_.erase(id);
    fresh_ = false;
}

const density_treap* fast_knapsack::u_for(int l) const {
    auto it = u_.upper_bound(l);
    if (it == u_.begin()) return nullptr;
    return &std::prev(it)->second;
}

double fast_knapsack::query_value() {
    const double B = opt_.budget;
    const pcf& f = inner_->root();
    ans_ = -1;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double x = f.start(i);
        if (x > B) break;
        const double y = f.value(i);
        const density_treap* u = nullptr;
        std::optional<int> cls;
        if (y > 0) {
            int l = static_cast<int>(std::max<std::int64_t>(0, ceil_exponent(eps_ * y, eps_)));
            u = u_for(l);
            if (u) cls = std::prev(u_.upper_bound(l))->first;
        }
        density_treap::prefix fr;
        if (u) fr = u->fill(B - x);
        if (y + fr.p > ans_) {
            ans_ = y + fr.p;
            ans_y_ = y;
            ans_yp_ = fr.p;
            ans_x_ = x;
            ans_class_ = cls;
            ans_cut_ = fr.cut;
            ans_count_ = fr.count;
        }
    }
    ans_ix_.clear();
    for (std::size_t inner_id : inner_->solution_at(ans_x_)) ans_ix_.insert(outer_of_inner_.at(inner_id));
    fresh_ = true;
    return ans_;
}

std::vector<std::size_t> fast_knapsack::query_solution() const {
    if (!fresh_) fail(errc::stale_query, "no value query since the last update");
    std::vector<std::size_t> out(ans_ix_.begin(), ans_ix_.end());
    if (ans_class_)
        for (const auto& k : u_.at(*ans_class_).first(ans_count_)) out.push_back(k.id);
    std::sort(out.begin(), out.end());
    return out;
}

bool fast_knapsack::query_membership(std::size_t id) const {
    if (!fresh_) fail(errc::stale_query, "no value query since the last update");
    auto it = items_.find(id);
    if (it == items_.end()) return false;
    if (it->second.in_x) return ans_ix_.count(id) != 0;
    if (!ans_class_ || it->second.cls > *ans_class_) return false;
    // in the prefix iff strictly ahead of the cut item
    return !ans_cut_ || key_of(id) < *ans_cut_;
}

std::vector<std::size_t> fast_knapsack::x_set() const {
    std::vector<std::size_t> out;
    for (const auto& [id, e] : items_)
        if (e.in_x) out.push_back(id);
    return out;
}

std::vector<std::size_t> fast_knapsack::y_set() const {
    std::vector<std::size_t> out;
    for (const auto& [id, e] : items_)
        if (!e.in_x) out.push_back(id);
    return out;
}

bool fast_knapsack::u_consistent() const {
    for (const auto& [c, t] : u_) {
        if (!t.aggregates_ok()) return false;
        std::vector<std::size_t> want, got;
        for (const auto& [id, e] : items_)
            if (!e.in_x && e.cls <= c) want.push_back(id);
        for (const auto& k : t.keys()) got.push_back(k.id);
        std::sort(got.begin(), got.end());
        if (want != got) return false;
    }
    return true;
}

} // namespace pcdp
