#include "pcdp/pcf.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace pcdp {

const char* mono_name(mono m) {
    switch (m) {
    case mono::decreasing: return "decreasing";
    case mono::increasing: return "increasing";
    case mono::general: return "general";
    }
    return "?";
}

bool satisfies(const std::vector<double>& ys, mono tag) {
    for (std::size_t i = 1; i < ys.size(); ++i) {
        if (tag == mono::decreasing && ys[i] > ys[i - 1]) return false;
        if (tag == mono::increasing && ys[i] < ys[i - 1]) return false;
    }
    return true;
}

pcf pcf::build(std::vector<double> xs, std::vector<double> ys, mono tag) {
    pcf f;
    f.xs_.reserve(xs.size());
    f.ys_.reserve(ys.size());
    f.xs_.push_back(xs[0]);
    for (std::size_t i = 0; i < ys.size(); ++i) {
        double y = ys[i] == 0.0 ? 0.0 : ys[i];
        if (!(xs[i + 1] > f.xs_.back())) continue; // zero-width after float collapse
        if (!f.ys_.empty() && f.ys_.back() == y) {
            f.xs_.back() = xs[i + 1];
        } else {
            f.ys_.push_back(y);
            f.xs_.push_back(xs[i + 1]);
        }
    }
    f.tag_ = satisfies(f.ys_, tag) ? tag : mono::general;
    return f;
}

pcf pcf::from_pieces(std::vector<piece> ps, double lo, double hi, mono tag) {
    if (ps.empty()) fail(errc::empty_piece_list, "no pieces");
    if (!(lo < hi)) fail(errc::unsorted_breakpoints, "domain must satisfy lo < hi");
    std::vector<double> xs{lo}, ys;
    for (const auto& p : ps) {
        if (std::isnan(p.x) || std::isnan(p.y)) fail(errc::out_of_codomain, "NaN in piece list");
        if (!(p.x > xs.back())) fail(errc::unsorted_breakpoints, "breakpoints must strictly increase");
        xs.push_back(p.x);
        ys.push_back(p.y);
    }
    if (xs.back() != hi) fail(errc::unsorted_breakpoints, "last breakpoint must equal hi");
    if (!satisfies(ys, tag)) fail(errc::non_monotone, std::string("values violate tag ") + mono_name(tag));
    return build(std::move(xs), std::move(ys), tag);
}

pcf pcf::constant(double lo, double hi, double y, mono tag) {
    if (!(lo < hi)) fail(errc::unsorted_breakpoints, "domain must satisfy lo < hi");
    return build({lo, hi}, {y}, tag);
}

pcf pcf::step(double lo, double hi, double at, double below, double above, mono tag) {
    if (!(lo < hi)) fail(errc::unsorted_breakpoints, "domain must satisfy lo < hi");
    if (at <= lo) return build({lo, hi}, {above}, tag);
    if (at >= hi) {
        // the jump would sit on the closed end; only hi itself takes `above`,
        // which a pruned list cannot express, so the caller must avoid it
        if (at > hi || below == above) return build({lo, hi}, {below}, tag);
        fail(errc::out_of_domain, "step at the closed end of the domain");
    }
    return build({lo, at, hi}, {below, above}, tag);
}

std::size_t pcf::piece_at(double x) const {
    if (!(x >= lo() && x <= hi())) {
        std::ostringstream os;
        os << "x=" << x << " outside [" << lo() << ", " << hi() << "]";
        fail(errc::out_of_domain, os.str());
    }
    auto first = xs_.begin() + 1;
    auto last = xs_.end() - 1;
    return static_cast<std::size_t>(std::upper_bound(first, last, x) - first);
}

double pcf::operator()(double x) const { return ys_[piece_at(x)]; }

double pcf::at_clamped(double x) const { return (*this)(std::clamp(x, lo(), hi())); }

std::vector<piece> pcf::pieces() const {
    std::vector<piece> out;
    out.reserve(ys_.size());
    for (std::size_t i = 0; i < ys_.size(); ++i) out.push_back({xs_[i + 1], ys_[i]});
    return out;
}

bool pcf::operator==(const pcf& o) const { return tag_ == o.tag_ && same_function(o); }

std::string pcf::str() const {
    std::ostringstream os;
    os.precision(17);
    os << "[" << lo() << "; ";
    for (std::size_t i = 0; i < ys_.size(); ++i) os << (i ? ", " : "") << "(" << xs_[i + 1] << "," << ys_[i] << ")";
    os << "] " << mono_name(tag_);
    return os.str();
}

double pow_int(double base, std::int64_t e) {
    if (e < 0) return 1.0 / pow_int(base, -e);
    double r = 1.0;
    double b = base;
    auto u = static_cast<std::uint64_t>(e);
    while (u) {
        if (u & 1u) r *= b;
        b *= b;
        u >>= 1;
    }
    return r;
}

std::int64_t ceil_exponent(double y, double delta) {
    double base = 1.0 + delta;
    auto e = static_cast<std::int64_t>(std::ceil(std::log(y) / std::log1p(delta)));
    while (pow_int(base, e - 1) >= y) --e;
    while (pow_int(base, e) < y) ++e;
    return e;
}

double round_up_value(double y, double delta) {
    if (y == 0.0 || std::isinf(y)) return y;
    if (y < 0.0) fail(errc::out_of_codomain, "round_up_pow needs non-negative values");
    return pow_int(1.0 + delta, ceil_exponent(y, delta));
}

double round_down_value(double y, double delta) {
    if (std::isinf(y)) return y;
    double m = std::floor(y / delta);
    while (m * delta > y) m -= 1.0;
    while ((m + 1.0) * delta <= y) m += 1.0;
    return m * delta;
}

std::size_t round_piece_bound(double delta, double W) {
    double l = W <= 1.0 ? 0.0 : std::ceil(std::log(W) / std::log1p(delta));
    return 2 + static_cast<std::size_t>(l);
}

namespace {

void check_same_domain(const pcf& g, const pcf& h) {
    if (!g.same_domain(h)) fail(errc::domain_mismatch, "operands live on different domains");
}

std::vector<double> merged_breakpoints(const pcf& g, const pcf& h) {
    std::vector<double> xs;
    const auto& a = g.breakpoints();
    const auto& b = h.breakpoints();
    xs.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(xs));
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

template <class Op>
pcf combine_pointwise(const pcf& g, const pcf& h, Op op, mono tag) {
    check_same_domain(g, h);
    auto xs = merged_breakpoints(g, h);
    std::vector<double> ys;
    ys.reserve(xs.size() - 1);
    std::size_t i = 0, j = 0;
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
        double x = xs[k];
        while (i + 1 < g.size() && g.end(i) <= x) ++i;
        while (j + 1 < h.size() && h.end(j) <= x) ++j;
        ys.push_back(op(g.value(i), h.value(j)));
    }
    return pcf::build(std::move(xs), std::move(ys), tag);
}

double checked_sum(double a, double b) {
    if ((a == inf && b == -inf) || (a == -inf && b == inf)) fail(errc::inf_minus_inf, "+inf + -inf");
    return a + b;
}

} // namespace

pcf min2(const pcf& g, const pcf& h) {
    if (g.tag() != h.tag()) fail(errc::tag_mismatch, "min2 operands carry different tags");
    return combine_pointwise(g, h, [](double a, double b) { return std::min(a, b); }, g.tag());
}

pcf add(const pcf& g, const pcf& h) {
    mono tag = g.tag() == h.tag() ? g.tag() : mono::general;
    if (g.is_constant()) tag = h.tag();
    else if (h.is_constant()) tag = g.tag();
    return combine_pointwise(g, h, checked_sum, tag);
}

pcf add_const(const pcf& g, double c) {
    std::vector<double> ys(g.values());
    for (double& y : ys) y = checked_sum(y, c);
    return pcf::build(g.breakpoints(), std::move(ys), g.tag());
}

pcf multimin(const std::vector<pcf>& fs) {
    if (fs.empty()) fail(errc::empty_list, "multimin of nothing");
    for (const auto& f : fs) {
        check_same_domain(fs.front(), f);
        if (f.tag() != fs.front().tag()) fail(errc::tag_mismatch, "multimin operands carry different tags");
    }
    if (fs.size() == 1) return fs.front();
    const double lo = fs.front().lo(), hi = fs.front().hi();
    const mono tag = fs.front().tag();

    if (tag == mono::general) {
        pcf acc = fs.front();
        for (std::size_t k = 1; k < fs.size(); ++k) acc = min2(acc, fs[k]);
        return acc;
    }

    // every piece becomes a one-sided step; sweep them in order of the open side
    struct ev {
        double x;
        double y;
    };
    std::vector<ev> evs;
    for (const auto& f : fs)
        for (std::size_t i = 0; i < f.size(); ++i)
            evs.push_back({tag == mono::decreasing ? f.start(i) : f.end(i), f.value(i)});

    std::vector<double> xs, ys;
    if (tag == mono::decreasing) {
        // piece [s, e) with value y bounds the min from s onwards
        std::sort(evs.begin(), evs.end(), [](const ev& a, const ev& b) { return a.x < b.x; });
        double cur = inf;
        xs.push_back(lo);
        for (std::size_t k = 0; k < evs.size();) {
            double x = evs[k].x;
            double best = cur;
            for (; k < evs.size() && evs[k].x == x; ++k) best = std::min(best, evs[k].y);
            if (best < cur || ys.empty()) {
                if (!ys.empty() && x > xs.back()) {
                    xs.push_back(x);
                    ys.push_back(best);
                } else if (ys.empty()) {
                    ys.push_back(best);
                } else {
                    ys.back() = best;
                }
                cur = best;
            }
        }
        xs.push_back(hi);
    } else {
        // piece [s, e) with value y bounds the min up to e; the last piece owns hi
        std::sort(evs.begin(), evs.end(), [](const ev& a, const ev& b) { return a.x > b.x; });
        double cur = inf;
        std::vector<double> rx{hi}, ry;
        for (std::size_t k = 0; k < evs.size();) {
            double x = evs[k].x;
            double best = cur;
            for (; k < evs.size() && evs[k].x == x; ++k) best = std::min(best, evs[k].y);
            if (best < cur || ry.empty()) {
                // region left of x now has value best; close the region right of x
                if (!ry.empty() && x < rx.back()) {
                    rx.push_back(x);
                    ry.push_back(best);
                } else if (ry.empty()) {
                    ry.push_back(best);
                } else {
                    ry.back() = best;
                }
                cur = best;
            }
        }
        rx.push_back(lo);
        // rx: hi = r0 > r1 > ... > lo; ry[k] is the value on [r_{k+1}, r_k)
        xs.assign(rx.rbegin(), rx.rend());
        ys.assign(ry.rbegin(), ry.rend());
    }
    return pcf::build(std::move(xs), std::move(ys), tag);
}

pcf shift(const pcf& g, double c) { return shift(g, c, g.first_value()); }

pcf shift(const pcf& g, double c, double fill) {
    if (c < 0) fail(errc::negative_shift, "shift amount must be non-negative");
    const double lo = g.lo(), hi = g.hi();
    std::vector<double> xs{lo}, ys;
    if (c > 0) {
        xs.push_back(std::min(lo + c, hi));
        ys.push_back(fill);
    }
    for (std::size_t i = 0; i < g.size() && lo + c < hi; ++i) {
        double e = g.end(i) + c;
        if (i + 1 == g.size() || e >= hi) {
            ys.push_back(g.value(i));
            xs.push_back(hi);
            break;
        }
        ys.push_back(g.value(i));
        xs.push_back(e);
    }
    mono tag = g.tag();
    if (tag == mono::decreasing && fill < g.first_value()) tag = mono::general;
    if (tag == mono::increasing && fill > g.first_value()) tag = mono::general;
    return pcf::build(std::move(xs), std::move(ys), tag);
}

pcf round_up_pow(const pcf& g, double delta) {
    if (!(delta > 0)) fail(errc::bad_argument, "delta must be positive");
    if (g.tag() == mono::general) fail(errc::non_monotone, "round_up_pow needs a monotone function");
    std::vector<double> ys(g.values());
    for (double& y : ys) y = round_up_value(y, delta);
    return pcf::build(g.breakpoints(), std::move(ys), g.tag());
}

pcf round_down_mult(const pcf& g, double delta) {
    if (!(delta > 0)) fail(errc::bad_argument, "delta must be positive");
    std::vector<double> ys(g.values());
    for (double& y : ys) y = round_down_value(y, delta);
    return pcf::build(g.breakpoints(), std::move(ys), g.tag());
}

pcf negate(const pcf& g) {
    std::vector<double> ys(g.values());
    for (double& y : ys) y = -y;
    mono tag = g.tag() == mono::decreasing ? mono::increasing
             : g.tag() == mono::increasing ? mono::decreasing
                                           : mono::general;
    return pcf::build(g.breakpoints(), std::move(ys), tag);
}

pcf reframe(const pcf& g, double lo, double hi, double below) {
    if (!(lo < hi)) fail(errc::unsorted_breakpoints, "domain must satisfy lo < hi");
    std::vector<double> xs{lo}, ys;
    if (lo < g.lo()) {
        xs.push_back(std::min(g.lo(), hi));
        ys.push_back(below);
    }
    if (g.lo() < hi) {
        std::size_t i = lo <= g.lo() ? 0 : (lo <= g.hi() ? g.piece_at(lo) : g.size() - 1);
        for (; i < g.size(); ++i) {
            double e = g.end(i);
            ys.push_back(g.value(i));
            if (i + 1 == g.size() || e >= hi) {
                xs.push_back(hi);
                break;
            }
            xs.push_back(e);
        }
    }
    mono tag = g.tag();
    if (lo < g.lo()) {
        if (tag == mono::decreasing && below < g.first_value()) tag = mono::general;
        if (tag == mono::increasing && below > g.first_value()) tag = mono::general;
    }
    return pcf::build(std::move(xs), std::move(ys), tag);
}

} // namespace pcdp
