#include "pcdp/knapsack.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace pcdp {

namespace {

std::size_t ceil_log2(std::size_t n) { return n <= 1 ? 0 : std::bit_width(n - 1); }

} // namespace

knapsack::knapsack(const knapsack_options& opt, const std::vector<kn_item>& items) : opt_(opt) {
    if (!(opt.eps > 0) || !std::isfinite(opt.eps)) fail(errc::bad_epsilon, "eps must be positive");
    if (!(opt.budget >= 0) || !std::isfinite(opt.budget)) fail(errc::bad_argument, "budget must be finite and >= 0");
    T_ = opt.budget + 1;
    double total = 0;
    for (const auto& it : items) total += it.p;
    W_ = opt.W > 0 ? opt.W : (items.empty() ? 1e9 : std::max(1.0, total));
    for (const auto& it : items) {
        if (!(it.p >= 1) || !(it.w > 0) || !std::isfinite(it.p) || !std::isfinite(it.w))
            fail(errc::bad_argument, "items need price >= 1 and weight > 0");
        items_[next_id_++] = it;
        total_p_ += it.p;
    }
    if (total_p_ > W_) fail(errc::bad_argument, "total price exceeds W");
    rebuild(std::bit_ceil(std::max<std::size_t>(1, items_.size())));
}

std::size_t knapsack::piece_bound() const { return round_piece_bound(delta_, W_); }

void knapsack::rebuild(std::size_t n) {
    n_ = n;
    delta_ = std::log1p(opt_.eps) / static_cast<double>(std::max<std::size_t>(1, ceil_log2(n_)));
    slot_item_.assign(n_, std::nullopt);
    slot_id_.assign(n_, dp::npos);
    slot_of_.clear();
    free_.clear();
    std::size_t s = 0;
    for (const auto& [id, it] : items_) {
        slot_item_[s] = it;
        slot_id_[s] = id;
        slot_of_[id] = s;
        ++s;
    }
    for (; s < n_; ++s) free_.insert(s);

    table_ = std::make_unique<dp::table<kn_row>>();
    table_->set_piece_bound(piece_bound());
    // heap node k lives in row k-1; leaves n..2n-1 hold slots 0..n-1
    for (std::size_t k = 1; k < 2 * n_; ++k) {
        if (k >= n_) {
            std::size_t slot = k - n_;
            table_->add_row([this, slot](const std::vector<const kn_row*>&) { return leaf_row(slot); });
        } else {
            table_->add_row([](const std::vector<const kn_row*>&) { return kn_row{}; });
        }
    }
    for (std::size_t k = 1; k < n_; ++k) {
        table_->set_inputs(k - 1, {2 * k - 1, 2 * k});
        table_->set_procedure(k - 1, [this](const std::vector<const kn_row*>& in) { return inner_row(*in[0], *in[1]); });
    }
    table_->compute_all();
    max_pieces_ = 0;
    note_pieces();
    ++rebuilds_;
    last_recompute_ = 0;
}

void knapsack::note_pieces() {
    for (std::size_t i = 0; i < table_->size(); ++i) max_pieces_ = std::max(max_pieces_, table_->get(i).f.size());
}

kn_row knapsack::leaf_row(std::size_t slot) const {
    kn_row r;
    const auto& it = slot_item_[slot];
    if (!it || it->w >= T_) r.f = pcf::constant(0, T_, 0, mono::increasing);
    else r.f = pcf::step(0, T_, it->w, 0, it->p, mono::increasing);
    return r;
}

kn_row knapsack::inner_row(const kn_row& l, const kn_row& r) const {
    kn_row out;
    auto c = maxplus_convolve(l.f, r.f);
    out.conv = reframe(c.f, 0, T_, 0);
    out.w = std::move(c.w);
    out.f = round_up_pow(*out.conv, delta_);
    return out;
}

void knapsack::touch(std::size_t slot) {
    table_->reset_count();
    table_->update_row(n_ + slot - 1);
    last_recompute_ = table_->recompute_count();
    // only the root path changed
    for (std::size_t k = n_ + slot; k >= 1; k /= 2) max_pieces_ = std::max(max_pieces_, table_->get(k - 1).f.size());
}

std::size_t knapsack::insert(double p, double w) {
    if (!(p >= 1) || !(w > 0) || !std::isfinite(p) || !std::isfinite(w))
        fail(errc::bad_argument, "items need price >= 1 and weight > 0");
    if (total_p_ + p > W_) fail(errc::bad_argument, "total price would exceed W");
    std::size_t id = next_id_++;
    items_[id] = {p, w};
    total_p_ += p;
    if (items_.size() > n_) {
        rebuild(2 * n_);
        return id;
    }
    std::size_t slot = *free_.begin();
    free_.erase(free_.begin());
    slot_item_[slot] = kn_item{p, w};
    slot_id_[slot] = id;
    slot_of_[id] = slot;
    touch(slot);
    return id;
}

void knapsack::erase(std::size_t id) {
    auto it = slot_of_.find(id);
    if (it == slot_of_.end()) fail(errc::unknown_item, "no live item " + std::to_string(id));
    std::size_t slot = it->second;
    total_p_ -= items_[id].p;
    items_.erase(id);
    slot_of_.erase(it);
    slot_item_[slot].reset();
    slot_id_[slot] = dp::npos;
    free_.insert(slot);
    if (n_ > 1 && items_.size() < n_ / 2) {
        rebuild(n_ / 2);
        return;
    }
    touch(slot);
}

const pcf& knapsack::root() const { return table_->get(0).f; }

double knapsack::value_at(double x) const {
    if (!(x >= 0 && x <= opt_.budget)) fail(errc::out_of_domain, "query budget outside [0, B]");
    return root()(x);
}

const kn_item& knapsack::item(std::size_t id) const {
    auto it = items_.find(id);
    if (it == items_.end()) fail(errc::unknown_item, "no live item " + std::to_string(id));
    return it->second;
}

std::vector<std::size_t> knapsack::ids() const {
    std::vector<std::size_t> out;
    for (const auto& [id, it] : items_) out.push_back(id);
    return out;
}

void knapsack::collect(std::size_t node, double x, std::vector<std::size_t>& out) const {
    if (node >= n_) {
        std::size_t slot = node - n_;
        if (table_->get(node - 1).f(x) > 0) out.push_back(slot_id_[slot]);
        return;
    }
    const auto& row = table_->get(node - 1);
    if (!((*row.conv)(x) > 0)) return;
    const auto& l = table_->get(2 * node - 1).f;
    const auto& r = table_->get(2 * node).f;
    double xb = maxplus_argmin(*row.conv, row.w, l, r, x);
    collect(2 * node, xb, out);
    collect(2 * node + 1, x - xb, out);
}

std::vector<std::size_t> knapsack::solution_at(double x) const {
    if (!(x >= 0 && x <= opt_.budget)) fail(errc::out_of_domain, "query budget outside [0, B]");
    std::vector<std::size_t> out;
    collect(1, x, out);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace pcdp
