#include "pcdp/ssl.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace pcdp::ssl {

namespace {

// filler child: not a source, no demand, capacity 0
pcf neutral() { return pcf::step(-1, 1, 0, inf, 0, mono::decreasing); }

void check_vertex(const vertex& v) {
    if (!(v.demand >= 0) || !std::isfinite(v.demand)) fail(errc::bad_argument, "demands must be finite and >= 0");
}

void check_cap(double c) {
    if (!(c >= 0) || !std::isfinite(c)) fail(errc::bad_argument, "capacities must be finite and >= 0");
}

void check_instance(const dp::rooted_forest& f, const std::vector<vertex>& vs) {
    if (vs.size() != f.size()) fail(errc::bad_argument, "one vertex record per tree vertex expected");
    for (const auto& v : vs) check_vertex(v);
    for (std::size_t v = 0; v < f.size(); ++v) check_cap(f.parent_cap(v));
}

std::vector<double> caps_of(const dp::rooted_forest& f, std::size_t v) {
    std::vector<double> out;
    for (std::size_t c : f.children(v)) out.push_back(f.parent_cap(c));
    return out;
}

// Case B before the shift by d(v): all children convolved, or the filler alone
const pcf& case_b_base(const row& r, const pcf& filler) { return r.chain.empty() ? filler : r.chain.back().f; }

} // namespace

std::size_t row_pieces(const row& r) { return r.f.size(); }

pcf clamp_row(const pcf& g, double cap) {
    if (!(g.lo() <= -cap && g.hi() >= cap)) fail(errc::domain_mismatch, "row does not cover [-cap, cap]");
    std::vector<double> xs{-cap - 1, -cap}, ys{inf};
    for (std::size_t i = g.piece_at(-cap); i < g.size(); ++i) {
        ys.push_back(g.value(i));
        const double e = g.end(i);
        if (e > cap || i + 1 == g.size()) {
            xs.push_back(cap + 1);
            break;
        }
        xs.push_back(e);
    }
    return pcf::build(std::move(xs), std::move(ys), mono::decreasing);
}

row vertex_row(const std::vector<const row*>& kids, const std::vector<double>& kid_caps, const vertex& v, double cap,
               double delta) {
    if (kids.size() != kid_caps.size()) fail(errc::bad_argument, "one capacity per child expected");
    row out;
    const double d = v.demand;
    const pcf filler = neutral();

    // Case B: v is not a source; children share x - d(v)
    std::vector<const pcf*> ops;
    for (const row* k : kids) ops.push_back(&k->f);
    if (ops.size() == 1) ops.push_back(&filler);
    for (std::size_t i = 1; i < ops.size(); ++i)
        out.chain.push_back(convolve_monotone(i == 1 ? *ops[0] : out.chain.back().f, *ops[i]));
    const pcf& base = case_b_base(out, filler);
    pcf b = reframe(base, -cap - 1 - d, std::max(cap + 1, base.hi()), inf);
    b = shift(b, d, inf);
    b = clamp_row(reframe(b, -cap - 1, cap + 1, inf), cap);

    // Case A: v is a source, every child may draw its full capacity
    if (v.source_ok) {
        double a = 1;
        for (std::size_t i = 0; i < kids.size(); ++i) a += kids[i]->f(kid_caps[i]);
        out.source_value = a;
        b = min2(b, pcf::step(-cap - 1, cap + 1, -cap, inf, a, mono::decreasing));
    }
    out.f = delta > 0 ? round_up_pow(b, delta) : std::move(b);
    return out;
}

std::vector<std::vector<double>> inflow_tables(const dp::rooted_forest& f, const std::vector<vertex>& vs) {
    std::vector<std::vector<double>> tab(f.size());
    for (std::size_t v : f.postorder()) {
        std::vector<double> cur{vs[v].demand};
        std::size_t need_src = 1; // sources that let every child draw its full capacity, plus v
        bool src_possible = vs[v].source_ok;
        for (std::size_t c : f.children(v)) {
            const double cc = f.parent_cap(c);
            const auto& fc = tab[c];
            std::vector<double> next(cur.size() + fc.size() - 1, inf);
            for (std::size_t i = 0; i < cur.size(); ++i)
                for (std::size_t j = 0; j < fc.size(); ++j) {
                    const double g = fc[j] > cc ? inf : std::max(fc[j], -cc);
                    next[i + j] = std::min(next[i + j], cur[i] + g);
                }
            cur = std::move(next);
            std::size_t m = 0;
            while (m < fc.size() && fc[m] > cc) ++m;
            if (m == fc.size()) src_possible = false;
            need_src += m;
        }
        cur.push_back(cur.back()); // one more vertex, v itself
        if (src_possible)
            for (std::size_t i = need_src; i < cur.size(); ++i) cur[i] = -inf;
        for (std::size_t i = 1; i < cur.size(); ++i) cur[i] = std::min(cur[i], cur[i - 1]);
        tab[v] = std::move(cur);
    }
    return tab;
}

pcf invert(const std::vector<double>& fv, double cap) {
    auto value_at = [&](double x) {
        for (std::size_t i = 0; i < fv.size(); ++i)
            if (fv[i] <= x) return static_cast<double>(i);
        return inf;
    };
    std::vector<double> cuts;
    for (double y : fv)
        if (y <= cap && y > -cap) cuts.push_back(y);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<double> xs{-cap - 1, -cap}, ys{inf, value_at(-cap)};
    for (double c : cuts) {
        xs.push_back(c);
        ys.push_back(value_at(c));
    }
    xs.push_back(cap + 1);
    return pcf::build(std::move(xs), std::move(ys), mono::decreasing);
}

std::vector<row> approx_rows(const dp::rooted_forest& f, const std::vector<vertex>& vs, double delta) {
    std::vector<row> rows(f.size());
    for (std::size_t v : f.postorder()) {
        std::vector<const row*> kids;
        for (std::size_t c : f.children(v)) kids.push_back(&rows[c]);
        rows[v] = vertex_row(kids, caps_of(f, v), vs[v], f.parent_cap(v), delta);
    }
    return rows;
}

std::vector<std::size_t> extract(const dp::rooted_forest& f, const std::vector<vertex>& vs,
                                 const std::vector<const row*>& rows) {
    std::vector<std::size_t> out;
    const pcf filler = neutral();
    std::function<void(std::size_t, double)> walk = [&](std::size_t v, double x) {
        const row& r = *rows[v];
        x = std::min(x, f.parent_cap(v));
        const auto& kids = f.children(v);
        const pcf& base = case_b_base(r, filler);
        const double y = x - vs[v].demand;
        const double b = y < base.lo() ? inf : base.at_clamped(y);
        if (vs[v].source_ok && x >= -f.parent_cap(v) && r.source_value <= b) {
            out.push_back(v);
            for (std::size_t c : kids) walk(c, f.parent_cap(c));
            return;
        }
        if (!(b < inf)) fail(errc::infeasible, "no finite choice at vertex " + std::to_string(v));
        // peel children off the convolution chain from the last one back
        double rest = std::min(y, base.hi());
        std::vector<double> share(kids.size(), 0);
        for (std::size_t k = r.chain.size(); k-- > 0;) {
            const pcf& left = k == 0 ? rows[kids[0]]->f : r.chain[k - 1].f;
            const pcf& right = k + 1 < kids.size() ? rows[kids[k + 1]]->f : filler;
            const double xl = witness_argmin(r.chain[k].f, r.chain[k].w, left, right, rest);
            if (k + 1 < kids.size()) share[k + 1] = rest - xl;
            rest = xl;
        }
        if (!kids.empty()) share[0] = rest;
        for (std::size_t i = 0; i < kids.size(); ++i) walk(kids[i], share[i]);
    };
    for (std::size_t r : f.roots()) walk(r, 0.0);
    std::sort(out.begin(), out.end());
    return out;
}

double default_delta(double eps, std::size_t h) { return std::log1p(eps) / static_cast<double>(h + 1); }

std::size_t piece_bound(double delta, std::size_t n) {
    // distinct values: 0..n and inf
    const std::size_t grid = n + 2;
    if (!(delta > 0)) return grid;
    return std::min(grid, round_piece_bound(delta, std::max<double>(1, static_cast<double>(n))) + 1);
}

result solve(const dp::rooted_forest& f, const std::vector<vertex>& vs, const options& opt) {
    check_instance(f, vs);
    if (!(opt.eps > 0) || !std::isfinite(opt.eps)) fail(errc::bad_epsilon, "eps must be positive");
    result res;
    res.height = f.height();
    res.delta = opt.m == mode::exact ? 0.0 : (opt.delta ? *opt.delta : default_delta(opt.eps, res.height));
    auto rows = approx_rows(f, vs, res.delta);
    for (const auto& r : rows) res.max_pieces = std::max(res.max_pieces, row_pieces(r));
    const std::size_t bound = piece_bound(res.delta, f.size());
    if (res.max_pieces > bound)
        fail(errc::piece_bound_exceeded, std::to_string(res.max_pieces) + " pieces, bound " + std::to_string(bound));
    res.raw = 0;
    if (opt.m == mode::exact) {
        auto tab = inflow_tables(f, vs);
        for (std::size_t r : f.roots()) res.raw += invert(tab[r], 0)(0);
    } else {
        for (std::size_t r : f.roots()) res.raw += rows[r].f(0);
    }
    if (!(res.raw < inf)) fail(errc::infeasible, "some demand cannot be met");
    std::vector<const row*> ptrs;
    for (const auto& r : rows) ptrs.push_back(&r);
    res.sources = extract(f, vs, ptrs);
    res.value = static_cast<int>(res.sources.size());
    return res;
}

// ---- dynamic ----

dynamic::dynamic(dp::rooted_forest f, std::vector<vertex> vs, const options& opt, std::size_t h)
    : f_(std::move(f)), vs_(std::move(vs)), h_(h) {
    check_instance(f_, vs_);
    if (!(opt.eps > 0) || !std::isfinite(opt.eps)) fail(errc::bad_epsilon, "eps must be positive");
    if (f_.height() > h_) fail(errc::height_bound_exceeded, "initial forest is taller than h");
    delta_ = opt.m == mode::exact ? 0.0 : (opt.delta ? *opt.delta : default_delta(opt.eps, h_));
    for (std::size_t v = 0; v < f_.size(); ++v)
        table_.add_row([this, v](const std::vector<const row*>& in) {
            return vertex_row(in, caps_of(f_, v), vs_[v], f_.parent_cap(v), delta_);
        });
    for (std::size_t v = 0; v < f_.size(); ++v) table_.set_inputs(v, f_.children(v));
    table_.set_piece_bound(piece_bound(delta_, f_.size()));
    table_.compute_all();
}

void dynamic::refresh(const std::vector<std::size_t>& order) {
    for (std::size_t v : order) table_.set_inputs(v, f_.children(v));
    table_.reset_count();
    table_.recompute(order);
    last_recompute_ = table_.recompute_count();
}

void dynamic::set_demand(std::size_t v, double d) {
    if (v >= f_.size()) fail(errc::index_out_of_range, "no vertex " + std::to_string(v));
    check_vertex({d, true});
    vs_[v].demand = d;
    table_.reset_count();
    table_.update_row(v);
    last_recompute_ = table_.recompute_count();
}

void dynamic::set_capacity(std::size_t u, std::size_t v, double c) {
    check_cap(c);
    if (!f_.has_edge(u, v)) fail(errc::no_such_edge, "no edge " + std::to_string(u) + "-" + std::to_string(v));
    const std::size_t child = f_.parent(v) == u ? v : u;
    f_.set_parent_cap(child, c);
    table_.reset_count();
    table_.update_row(child);
    last_recompute_ = table_.recompute_count();
}

void dynamic::remove(std::size_t u, std::size_t v) { refresh(f_.cut(u, v)); }

void dynamic::insert(std::size_t u, std::size_t v, double c) {
    check_cap(c);
    dp::rooted_forest trial = f_;
    trial.link(u, v, c);
    if (trial.height() > h_) fail(errc::height_bound_exceeded, "insert would make the forest taller than h");
    refresh(f_.link(u, v, c));
}

result dynamic::query() const {
    result res;
    res.delta = delta_;
    res.height = f_.height();
    res.raw = 0;
    for (std::size_t r : f_.roots()) res.raw += table_.get(r).f(0);
    if (!(res.raw < inf)) fail(errc::infeasible, "some demand cannot be met");
    std::vector<const row*> ptrs;
    for (std::size_t v = 0; v < f_.size(); ++v) {
        ptrs.push_back(&table_.get(v));
        res.max_pieces = std::max(res.max_pieces, row_pieces(table_.get(v)));
    }
    res.sources = extract(f_, vs_, ptrs);
    res.value = static_cast<int>(res.sources.size());
    return res;
}

} // namespace pcdp::ssl
