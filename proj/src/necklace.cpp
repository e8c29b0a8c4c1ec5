#include "pcdp/necklace.hpp"

#include <cmath>
#include <string>

#include "pcdp/convolution.hpp"
#include "pcdp/error.hpp"

namespace pcdp::necklace {

namespace {

void check_bead(double a) {
    if (!std::isfinite(a) || a < 0 || a >= 1) fail(errc::out_of_codomain, "bead " + std::to_string(a) + " not in [0,1)");
}

void check_beads(const std::vector<double>& b) {
    for (std::size_t i = 0; i < b.size(); ++i) {
        check_bead(b[i]);
        if (i > 0 && b[i] < b[i - 1]) fail(errc::unsorted_beads, "beads not sorted at " + std::to_string(i));
    }
}

double check_eps(double eps) {
    if (!std::isfinite(eps) || eps <= 0) fail(errc::bad_epsilon, "eps must be positive");
    return eps / 2;
}

pcf from_runs(const runs& r, double delta, double tail, mono tag) {
    std::vector<double> xs{0}, ys;
    double at = 0;
    for (const auto& p : r) {
        at += static_cast<double>(p.count);
        xs.push_back(at);
        ys.push_back(static_cast<double>(p.q) * delta);
    }
    xs.push_back(2 * at);
    ys.push_back(tail);
    return pcf::build(std::move(xs), std::move(ys), tag);
}

long value_at(const runs& r, std::size_t i) {
    for (const auto& p : r) {
        if (i < p.count) return p.q;
        i -= p.count;
    }
    fail(errc::index_out_of_range, "index past the end");
}

bool fits(const runs& r, std::size_t i, long q) {
    const std::size_t n = length(r);
    return (i == 0 || value_at(r, i - 1) <= q) && (i == n || q <= value_at(r, i));
}

// assumes fits(r, i, q)
void put(runs& r, std::size_t i, long q) {
    std::size_t at = 0;
    for (std::size_t k = 0; k < r.size(); ++k) {
        const std::size_t end = at + r[k].count;
        // run k holds i-1 or i with the same value
        if (r[k].q == q && ((i > at && i - 1 < end) || (i >= at && i < end))) {
            ++r[k].count;
            return;
        }
        if (i <= at) {
            r.insert(r.begin() + static_cast<std::ptrdiff_t>(k), run{q, 1});
            return;
        }
        at = end;
    }
    r.push_back({q, 1});
}

void take(runs& r, std::size_t i) {
    for (auto it = r.begin(); it != r.end(); ++it) {
        if (i < it->count) {
            if (--it->count == 0) r.erase(it);
            return;
        }
        i -= it->count;
    }
}

} // namespace

long round_down(double a, double delta) {
    auto q = static_cast<long>(std::floor(a / delta));
    while (static_cast<double>(q + 1) * delta <= a) ++q;
    while (q > 0 && static_cast<double>(q) * delta > a) --q;
    return q;
}

runs round_beads(const std::vector<double>& beads, double delta) {
    runs r;
    for (double a : beads) {
        long q = round_down(a, delta);
        if (!r.empty() && r.back().q == q)
            ++r.back().count;
        else
            r.push_back({q, 1});
    }
    return r;
}

std::size_t length(const runs& r) {
    std::size_t n = 0;
    for (const auto& p : r) n += p.count;
    return n;
}

pcf as_pcf(const runs& r, double delta) {
    std::vector<double> xs{0}, ys;
    double at = 0;
    for (const auto& p : r) {
        at += static_cast<double>(p.count);
        xs.push_back(at);
        ys.push_back(static_cast<double>(p.q) * delta);
    }
    return pcf::build(std::move(xs), std::move(ys), mono::increasing);
}

pcf pad_plus(const runs& x, double delta) { return from_runs(x, delta, inf, mono::increasing); }

pcf pad_minus(const runs& x, double delta) { return from_runs(x, delta, -inf, mono::general); }

pcf reverse_double(const runs& y, double delta) {
    std::vector<double> xs{0}, ys;
    double at = 0;
    for (int copy = 0; copy < 2; ++copy)
        for (auto it = y.rbegin(); it != y.rend(); ++it) {
            at += static_cast<double>(it->count);
            xs.push_back(at);
            ys.push_back(static_cast<double>(it->q) * delta);
        }
    return pcf::build(std::move(xs), std::move(ys), mono::general);
}

alignment align(const runs& x, const runs& y, double delta) {
    const std::size_t n = length(x);
    if (n != length(y)) fail(errc::length_mismatch, "necklaces differ in length");
    if (n == 0) return {};

    const pcf yp = reverse_double(y, delta);
    const pcf a = minminus_indexed(pad_plus(x, delta), yp);
    const pcf b = maxminus_indexed(pad_minus(x, delta), yp);

    // index k = 2n-s-1 holds min / max of z(s); walk k over [n, 2n) piece by piece
    const auto top = static_cast<double>(2 * n);
    alignment best{inf, inf, 0, 0};
    double k = static_cast<double>(n);
    while (k < top) {
        const std::size_t ia = a.piece_at(k), ib = b.piece_at(k);
        const double next = std::min({a.end(ia), b.end(ib), top});
        const double lo = a.value(ia), hi = b.value(ib);
        const double v = 0.5 * (hi - lo);
        // within [k, next) the smallest shift sits at k = next-1; ties go to smaller s
        if (v <= best.raw) {
            double c = -0.5 * (lo + hi);
            c -= std::floor(c);
            if (c >= 1) c = 0; // -tiny wraps to 1.0
            best = {v, v, static_cast<int>(top - next), c};
        }
        k = next;
    }
    return best;
}

alignment solve(const std::vector<double>& x, const std::vector<double>& y, double eps) {
    const double delta = check_eps(eps);
    if (x.size() != y.size()) fail(errc::length_mismatch, "necklaces differ in length");
    check_beads(x);
    check_beads(y);
    auto r = align(round_beads(x, delta), round_beads(y, delta), delta);
    if (!x.empty()) r.value = r.raw + delta;
    return r;
}

dynamic::dynamic(double eps) : delta_(check_eps(eps)) {}

dynamic::dynamic(const std::vector<double>& x, const std::vector<double>& y, double eps) : delta_(check_eps(eps)) {
    if (x.size() != y.size()) fail(errc::length_mismatch, "necklaces differ in length");
    check_beads(x);
    check_beads(y);
    x_ = round_beads(x, delta_);
    y_ = round_beads(y, delta_);
}

void dynamic::insert(std::size_t i, double alpha, double beta) {
    if (i > size()) fail(errc::index_out_of_range, "insert at " + std::to_string(i) + " past " + std::to_string(size()));
    check_bead(alpha);
    check_bead(beta);
    const long qa = round_down(alpha, delta_), qb = round_down(beta, delta_);
    if (!fits(x_, i, qa) || !fits(y_, i, qb)) fail(errc::would_unsort, "insert at " + std::to_string(i) + " unsorts");
    put(x_, i, qa);
    put(y_, i, qb);
}

void dynamic::erase(std::size_t i) {
    if (i >= size()) fail(errc::index_out_of_range, "erase at " + std::to_string(i) + " past " + std::to_string(size()));
    take(x_, i);
    take(y_, i);
}

alignment dynamic::query() const {
    auto r = align(x_, y_, delta_);
    if (size() > 0) r.value = r.raw + delta_;
    return r;
}

} // namespace pcdp::necklace
