// Exact DP on the integer grid x = 0..w(V), enumerating every choice the way
// the recurrences are stated. Independent of the PCF pipeline.

#include <algorithm>

#include "pcdp/partition.hpp"

namespace pcdp::partition {

namespace {

using grid = std::vector<double>;

void put(std::map<sig, double>& m, const sig& g, double v) {
    if (!(v < inf)) return;
    auto [it, fresh] = m.emplace(g, v);
    if (!fresh && v < it->second) it->second = v;
}

void put(std::map<sig, grid>& m, const sig& g, const grid& a) {
    bool any = false;
    for (double v : a) any = any || v < inf;
    if (!any) return;
    auto [it, fresh] = m.emplace(g, a);
    if (fresh) return;
    for (std::size_t x = 0; x < a.size(); ++x) it->second[x] = std::min(it->second[x], a[x]);
}

void put_claim(std::map<sig, double>& m, const space& sp, const sig& g, int claim, double v) {
    auto c = sp.class_of(claim);
    if (!c) return;
    if (auto g2 = sp.add(g, sp.unit(*c))) put(m, *g2, v);
}

} // namespace

exact_row exact_leaf_row(int w, double cap, const space& sp) {
    exact_row out;
    const int n = sp.total_w();
    if (cap < inf) put_claim(out.cut, sp, zero_sig(), w, cap);
    grid a(static_cast<std::size_t>(n + 1), inf);
    for (int x = w; x <= n; ++x) a[static_cast<std::size_t>(x)] = 0;
    out.keep.emplace(zero_sig(), a);
    return out;
}

exact_row exact_combine(const exact_row& l, const exact_row& r, int w, double cap, const space& sp) {
    exact_row out;
    const int n = sp.total_w();
    const auto N = static_cast<std::size_t>(n + 1);
    const bool cuttable = cap < inf;

    // A: both child edges cut
    for (const auto& [gl, tl] : l.cut)
        for (const auto& [gr, tr] : r.cut) {
            auto g = sp.add(gl, gr);
            if (!g) continue;
            const double s = tl + tr;
            if (cuttable) put_claim(out.cut, sp, *g, w, s + cap);
            grid a(N, inf);
            for (int x = w; x <= n; ++x) a[static_cast<std::size_t>(x)] = s;
            put(out.keep, *g, a);
        }

    // B: neither child edge cut
    for (const auto& [gl, fl] : l.keep)
        for (const auto& [gr, fr] : r.keep) {
            auto g = sp.add(gl, gr);
            if (!g) continue;
            if (cuttable)
                for (int xl = 0; xl <= n; ++xl)
                    for (int xr = 0; xr <= n; ++xr)
                        put_claim(out.cut, sp, *g, xl + xr + w,
                                  (fl[static_cast<std::size_t>(xl)] + fr[static_cast<std::size_t>(xr)]) + cap);
            grid a(N, inf);
            for (int x = w; x <= n; ++x)
                for (int xl = 0; xl <= x - w; ++xl) {
                    const int xr = x - w - xl;
                    a[static_cast<std::size_t>(x)] = std::min(
                        a[static_cast<std::size_t>(x)], fl[static_cast<std::size_t>(xl)] + fr[static_cast<std::size_t>(xr)]);
                }
            put(out.keep, *g, a);
        }

    // C (left cut, right kept) and D (right cut, left kept)
    auto one_side = [&](const sig& gl, const sig& gr, double t, const grid& f, bool t_left) {
        auto g = sp.add(gl, gr);
        if (!g) return;
        auto sum = [&](std::size_t x) { return t_left ? t + f[x] : f[x] + t; };
        if (cuttable)
            for (int xr = 0; xr <= n; ++xr) put_claim(out.cut, sp, *g, xr + w, sum(static_cast<std::size_t>(xr)) + cap);
        grid a(N, inf);
        for (int x = w; x <= n; ++x) a[static_cast<std::size_t>(x)] = sum(static_cast<std::size_t>(x - w));
        put(out.keep, *g, a);
    };
    for (const auto& [gl, tl] : l.cut)
        for (const auto& [gr, fr] : r.keep) one_side(gl, gr, tl, fr, true);
    for (const auto& [gl, fl] : l.keep)
        for (const auto& [gr, tr] : r.cut) one_side(gl, gr, tr, fl, false);
    return out;
}

exact_row exact_vertex_row(const std::vector<const exact_row*>& kids, int w, double cap, const space& sp) {
    if (kids.empty()) return exact_leaf_row(w, cap, sp);
    if (kids.size() == 1) return exact_combine(*kids[0], exact_leaf_row(0, 0.0, sp), w, cap, sp);
    exact_row acc;
    const exact_row* left = kids[0];
    for (std::size_t i = 1; i + 1 < kids.size(); ++i) {
        acc = exact_combine(*left, *kids[i], 0, inf, sp);
        left = &acc;
    }
    return exact_combine(*left, *kids.back(), w, cap, sp);
}

std::vector<exact_row> exact_rows(const dp::rooted_forest& f, const std::vector<int>& weight, const space& sp) {
    std::vector<exact_row> rows(f.size());
    for (std::size_t v : f.postorder()) {
        std::vector<const exact_row*> kids;
        for (std::size_t c : f.children(v)) kids.push_back(&rows[c]);
        rows[v] = exact_vertex_row(kids, weight[v], f.parent_cap(v), sp);
    }
    return rows;
}

} // namespace pcdp::partition
