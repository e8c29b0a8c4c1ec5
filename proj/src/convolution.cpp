#include "pcdp/convolution.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "pcdp/noi.hpp"

namespace pcdp {

namespace {

struct pair_sum {
    double y;
    std::uint32_t i;
    std::uint32_t j;
};

double sum_or_fail(double a, double b) {
    if ((a == inf && b == -inf) || (a == -inf && b == inf)) fail(errc::inf_minus_inf, "+inf + -inf in convolution");
    return a + b;
}

std::vector<pair_sum> sorted_pairs(const pcf& f1, const pcf& f2) {
    std::vector<pair_sum> ps;
    ps.reserve(f1.size() * f2.size());
    for (std::uint32_t i = 0; i < f1.size(); ++i)
        for (std::uint32_t j = 0; j < f2.size(); ++j) ps.push_back({sum_or_fail(f1.value(i), f2.value(j)), i, j});
    std::sort(ps.begin(), ps.end(), [](const pair_sum& a, const pair_sum& b) {
        if (a.y != b.y) return a.y < b.y;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    });
    return ps;
}

double split_value(const pcf& f1, const pcf& f2, double x, double xb) {
    return sum_or_fail(f1(xb), f2(x - xb));
}

} // namespace

conv_result convolve_monotone(const pcf& f1_in, const pcf& f2_in) {
    if (f1_in.tag() != mono::decreasing && f2_in.tag() != mono::decreasing)
        fail(errc::precondition_violated, "convolve_monotone needs a decreasing operand");
    // the sweep relies on the second operand decreasing
    const bool swapped = f2_in.tag() != mono::decreasing;
    const pcf& f1 = swapped ? f2_in : f1_in;
    const pcf& f2 = swapped ? f1_in : f2_in;

    const double lo = f1.lo() + f2.lo();
    const bool both = f1.tag() == mono::decreasing && f2.tag() == mono::decreasing;
    const double hi = both ? f1.hi() + f2.hi()
                           : lo + std::min(f1.hi() - f1.lo(), f2.hi() - f2.lo());

    std::vector<double> rx{hi}, ry;
    std::vector<conv_witness::segment> rseg;
    double cur = hi;
    for (const auto& p : sorted_pairs(f1, f2)) {
        double xp = f1.start(p.i) + f2.start(p.j);
        if (xp < cur) {
            ry.push_back(p.y);
            rx.push_back(xp);
            rseg.push_back({xp, p.i, p.j});
            cur = xp;
            if (cur <= lo) break;
        }
    }
    std::vector<double> xs(rx.rbegin(), rx.rend());
    std::vector<double> ys(ry.rbegin(), ry.rend());
    conv_result out{pcf::build(std::move(xs), std::move(ys), both ? mono::decreasing : mono::general), {}};
    out.w.segments.assign(rseg.rbegin(), rseg.rend());
    out.w.swapped = swapped;
    return out;
}

double witness_argmin(const pcf& f, const conv_witness& w, const pcf& f1_in, const pcf& f2_in, double x) {
    if (!(x >= f.lo() && x <= f.hi())) fail(errc::out_of_domain, "witness query outside the result domain");
    const pcf& f1 = w.swapped ? f2_in : f1_in;
    const pcf& f2 = w.swapped ? f1_in : f2_in;
    auto it = std::upper_bound(w.segments.begin(), w.segments.end(), x,
                               [](double v, const conv_witness::segment& s) { return v < s.start; });
    const auto& s = *(it - 1);
    const double target = f(x);
    const double lo = std::max(f1.lo(), x - f2.hi());
    const double hi = std::min(f1.hi(), x - f2.lo());
    auto ok = [&](double xb) { return xb >= lo && xb <= hi && split_value(f1, f2, x, xb) == target; };
    auto done = [&](double xb) { return w.swapped ? x - xb : xb; };

    const double a0 = f1.start(s.i), a1 = f1.end(s.i);
    const double b0 = f2.start(s.j), b1 = f2.end(s.j);
    double c1 = std::max(a0, x - f2.hi());
    if (ok(c1)) return done(c1);
    double delta = (x - a0) - b1;
    double c2 = a0 + delta + 0.5 * std::min(a1 - (a0 + delta), b1 - b0);
    if (ok(c2)) return done(c2);
    double c3 = std::min(x - b0, f1.hi());
    if (ok(c3)) return done(c3);
    // float slack pushed every closed form off by an ulp; scan the cells
    std::vector<double> cand{lo, hi};
    for (double a : f1.breakpoints()) cand.push_back(a);
    for (double b : f2.breakpoints()) cand.push_back(x - b);
    std::sort(cand.begin(), cand.end());
    for (std::size_t k = 0; k < cand.size(); ++k) {
        if (ok(cand[k])) return done(cand[k]);
        if (k + 1 < cand.size() && ok(0.5 * (cand[k] + cand[k + 1]))) return done(0.5 * (cand[k] + cand[k + 1]));
    }
    fail(errc::precondition_violated, "witness does not reproduce f(x)");
}

conv_result maxplus_convolve(const pcf& f1, const pcf& f2) {
    if (f1.tag() != mono::increasing || f2.tag() != mono::increasing)
        fail(errc::precondition_violated, "maxplus_convolve needs increasing operands");
    auto r = convolve_monotone(negate(f1), negate(f2));
    r.f = negate(r.f);
    r.w.negated = true;
    return r;
}

double maxplus_argmin(const pcf& f, const conv_witness& w, const pcf& f1, const pcf& f2, double x) {
    return witness_argmin(negate(f), w, negate(f1), negate(f2), x);
}

namespace {

// Lower envelope of the piece-pair boxes. A pair of pieces [a1,b1) x [a2,b2)
// covers [a1+a2, b1+b2-trim); trim = 1 gives the convolution of integer-indexed
// vectors, where the last index of a piece is b-1.
pcf envelope(const pcf& f1, const pcf& f2, double trim) {
    const double lo = f1.lo() + f2.lo();
    const double hi = f1.hi() + f2.hi() - trim;

    struct assigned {
        double end;
        double y;
    };
    std::map<double, assigned> out; // start -> piece
    noi_set done;                   // [a,b] stands for the half-open [a,b)

    for (const auto& p : sorted_pairs(f1, f2)) {
        const double z0 = f1.start(p.i) + f2.start(p.j);
        const double e = f1.end(p.i) + f2.end(p.j) - trim;
        if (!(z0 < e)) continue;
        double z = z0;
        while (z < e) {
            // first assigned range ending strictly after z
            auto hit = done.closest_larger(std::nextafter(z, inf));
            if (!hit || hit->a >= e) {
                out[z] = {e, p.y};
                break;
            }
            if (z < hit->a) out[z] = {hit->a, p.y};
            z = hit->b;
        }
        done.insert(z0, e);
        if (done.size() == 1) {
            auto only = done.intervals().front();
            if (only.a <= lo && only.b >= hi) break;
        }
    }

    std::vector<double> xs{lo}, ys;
    for (const auto& [s, piece] : out) {
        ys.push_back(piece.y);
        xs.push_back(piece.end);
    }
    xs.back() = hi;
    mono tag = f1.tag() == f2.tag() && f1.tag() == mono::decreasing ? mono::decreasing : mono::general;
    pcf r = pcf::build(std::move(xs), std::move(ys), tag);
    if (r.size() > (f1.size() + 1) * (f2.size() + 1))
        fail(errc::piece_bound_exceeded, "general convolution exceeded (p1+1)(p2+1) pieces");
    return r;
}

} // namespace

pcf convolve_general(const pcf& f1, const pcf& f2) { return envelope(f1, f2, 0.0); }

pcf minminus_convolve(const pcf& f, const pcf& g) { return convolve_general(f, negate(g)); }

pcf maxminus_convolve(const pcf& f, const pcf& g) { return negate(convolve_general(negate(f), g)); }

static void need_indexed(const pcf& f) {
    for (double b : f.breakpoints())
        if (b != std::floor(b)) fail(errc::precondition_violated, "indexed convolution needs integer breakpoints");
    if (!(f.hi() - f.lo() >= 1)) fail(errc::empty_interval, "indexed convolution needs at least one index");
}

pcf convolve_indexed(const pcf& f1, const pcf& f2) {
    need_indexed(f1);
    need_indexed(f2);
    return envelope(f1, f2, 1.0);
}

pcf minminus_indexed(const pcf& f, const pcf& g) { return convolve_indexed(f, negate(g)); }

pcf maxminus_indexed(const pcf& f, const pcf& g) { return negate(convolve_indexed(negate(f), g)); }

} // namespace pcdp
