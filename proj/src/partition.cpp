#include "pcdp/partition.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "pcdp/convolution.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pcdp::partition {

// ---- signature space ----

space::space(double eps, int k, int total_w) : eps_(eps), k_(k), total_w_(total_w) {
    if (!(eps > 0 && eps < 1)) fail(errc::bad_epsilon, "eps must lie in (0,1)");
    if (k < 1) fail(errc::bad_argument, "k must be at least 1");
    if (total_w < 1) fail(errc::bad_argument, "w(V) = 0: balance thresholds degenerate");
    t_ = static_cast<int>(ceil_exponent(1.0 / eps, eps)) + 1;
    M_ = static_cast<int>(std::ceil(k / eps - 1e-9)) + 1;
    if (t_ > static_cast<int>(max_t)) fail(errc::bad_argument, "eps too small: more than 32 signature classes");
    if (M_ - 1 > 255) fail(errc::bad_argument, "k/eps too large for 8-bit signature counts");
    ceil_wk_ = (total_w + k - 1) / k;
    const double base = eps * ceil_wk_;
    for (int j = 0; j < t_; ++j) xi_.push_back(pow_int(1 + eps, j) * base);
    rep_.assign(static_cast<std::size_t>(t_ + 1), -1);
    const int top = static_cast<int>(std::floor(xi_.back())) + 1;
    for (int x = 0; x <= top; ++x)
        if (auto c = class_of(x)) rep_[static_cast<std::size_t>(*c + 1)] = x;
}

std::size_t space::size() const {
    std::size_t s = 1;
    for (int i = 0; i < t_; ++i) {
        if (s > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(M_))
            return std::numeric_limits<std::size_t>::max();
        s *= static_cast<std::size_t>(M_);
    }
    return s;
}

std::optional<int> space::class_of(double x) const {
    if (x < xi_[0]) return -1;
    for (int j = 0; j < t_; ++j)
        if (x <= xi_[static_cast<std::size_t>(j)]) return j;
    return std::nullopt;
}

sig zero_sig() { return sig{}; }

sig space::unit(int j) const {
    sig g{};
    if (j >= 0) g[static_cast<std::size_t>(j)] = 1;
    return g;
}

std::optional<sig> space::add(const sig& a, const sig& b) const {
    sig g{};
    for (int i = 0; i < t_; ++i) {
        int s = a[static_cast<std::size_t>(i)] + b[static_cast<std::size_t>(i)];
        if (s > M_ - 1) return std::nullopt;
        g[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(s);
    }
    return g;
}

bool space::valid(const sig& g) const {
    for (std::size_t i = 0; i < max_t; ++i) {
        if (static_cast<int>(i) >= t_ ? g[i] != 0 : g[i] > M_ - 1) return false;
    }
    return true;
}

std::vector<double> space::jobs(const sig& g) const {
    std::vector<double> out;
    for (int j = t_ - 1; j >= 0; --j)
        for (int c = 0; c < g[static_cast<std::size_t>(j)]; ++c) out.push_back(xi_[static_cast<std::size_t>(j)]);
    return out;
}

sig sig_of_component(int x, const space& sp) {
    if (x < 0) fail(errc::bad_argument, "negative component weight");
    auto c = sp.class_of(x);
    if (!c) fail(errc::weight_too_large, "component of weight " + std::to_string(x) + " exceeds the largest class");
    return sp.unit(*c);
}

std::vector<int> sig_vector(const sig& g, const space& sp) {
    return std::vector<int>(g.begin(), g.begin() + sp.t());
}

sig sig_from(const std::vector<int>& v) {
    if (v.size() > max_t) fail(errc::bad_argument, "signature too long");
    sig g{};
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] < 0 || v[i] > 255) fail(errc::bad_argument, "signature entry out of range");
        g[i] = static_cast<std::uint8_t>(v[i]);
    }
    return g;
}

// ---- rows ----

std::size_t row_pieces(const row& r) {
    std::size_t p = r.cut.empty() ? 0 : 1;
    for (const auto& [g, f] : r.keep) p = std::max(p, f.size());
    return p;
}

namespace {

// keep rows live on [0, w(V)+1] so that every integer x <= w(V) is interior
double keep_hi(const space& sp) { return sp.total_w() + 1.0; }

pcf keep_const(int w, double value, const space& sp) {
    return pcf::step(0, keep_hi(sp), w, inf, value, mono::decreasing);
}

void put_cut(std::map<sig, double>& m, const sig& g, double v) {
    if (!(v < inf)) return;
    auto [it, fresh] = m.emplace(g, v);
    if (!fresh && v < it->second) it->second = v;
}

// x + w restricted to claims reachable with child budgets in [0, reach]
std::optional<double> claim_point(const space& sp, int j, int w, double reach) {
    int r = sp.rep(j);
    if (r < 0) return std::nullopt;
    double s = std::min<double>(r, w + reach);
    if (s < w) return std::nullopt;
    auto c = sp.class_of(s);
    if (!c || *c != j) return std::nullopt;
    return s - w;
}

// everything one (left, right) pair contributes
struct contrib {
    std::vector<std::pair<sig, double>> cuts;
    std::optional<std::pair<sig, pcf>> keep;
};

enum class kind { A, B, C, D };

struct job {
    kind k;
    const sig* gl;
    const sig* gr;
    const double* tl = nullptr;
    const double* tr = nullptr;
    const pcf* fl = nullptr;
    const pcf* fr = nullptr;
};

contrib run_job(const job& jb, int w, double cap, const space& sp) {
    contrib out;
    auto g = sp.add(*jb.gl, *jb.gr);
    if (!g) return out;
    const bool cuttable = cap < inf;
    const int n = sp.total_w();
    const double hi = keep_hi(sp);
    switch (jb.k) {
    case kind::A: {
        const double s = *jb.tl + *jb.tr;
        if (!(s < inf)) return out;
        out.keep.emplace(*g, keep_const(w, s, sp));
        if (cuttable)
            if (auto c = sp.class_of(w))
                if (auto g2 = sp.add(*g, sp.unit(*c))) out.cuts.push_back({*g2, s + cap});
        break;
    }
    case kind::B: {
        auto conv = convolve_monotone(*jb.fl, *jb.fr).f;
        auto f = shift(reframe(conv, 0, hi, inf), w, inf);
        if (f.last_value() < inf) out.keep.emplace(*g, std::move(f));
        if (cuttable) {
            for (int j = -1; j < sp.t(); ++j) {
                auto x = claim_point(sp, j, w, 2.0 * n);
                if (!x) continue;
                double v = pair_min(*jb.fl, *jb.fr, *x);
                if (!(v < inf)) continue;
                if (auto g2 = sp.add(*g, sp.unit(j))) out.cuts.push_back({*g2, v + cap});
            }
        }
        break;
    }
    case kind::C:
    case kind::D: {
        // one side cut (constant t), the other kept (function f)
        const double t = jb.k == kind::C ? *jb.tl : *jb.tr;
        const pcf& f = jb.k == kind::C ? *jb.fr : *jb.fl;
        if (!(t < inf)) return out;
        auto kf = add_const(shift(f, w, inf), t);
        if (kf.last_value() < inf) out.keep.emplace(*g, std::move(kf));
        if (cuttable) {
            for (int j = -1; j < sp.t(); ++j) {
                auto x = claim_point(sp, j, w, n);
                if (!x) continue;
                double v = jb.k == kind::C ? t + f(*x) : f(*x) + t;
                if (!(v < inf)) continue;
                if (auto g2 = sp.add(*g, sp.unit(j))) out.cuts.push_back({*g2, v + cap});
            }
        }
        break;
    }
    }
    return out;
}

std::vector<job> make_jobs(const row& l, const row& r) {
    std::vector<job> jobs;
    for (const auto& [gl, tl] : l.cut)
        for (const auto& [gr, tr] : r.cut) jobs.push_back({kind::A, &gl, &gr, &tl, &tr});
    for (const auto& [gl, fl] : l.keep)
        for (const auto& [gr, fr] : r.keep) jobs.push_back({kind::B, &gl, &gr, nullptr, nullptr, &fl, &fr});
    for (const auto& [gl, tl] : l.cut)
        for (const auto& [gr, fr] : r.keep) jobs.push_back({kind::C, &gl, &gr, &tl, nullptr, nullptr, &fr});
    for (const auto& [gl, fl] : l.keep)
        for (const auto& [gr, tr] : r.cut) jobs.push_back({kind::D, &gl, &gr, nullptr, &tr, &fl, nullptr});
    return jobs;
}

} // namespace

double pair_min(const pcf& fl, const pcf& fr, double s) {
    // x_l in [max(lo_l, s - hi_r), min(hi_l, s - lo_r)]
    const double a = std::max(fl.lo(), s - fr.hi());
    const double b = std::min(fl.hi(), s - fr.lo());
    if (a > b) return inf;
    // both sides decrease, so within a stretch where fr(s - x_l) is fixed the
    // largest x_l wins: x_l = s - (start of an fr piece), or the upper end b.
    // The starts of fl pieces are the mirror case.
    double best = inf;
    auto probe = [&](double xl) {
        if (xl < a || xl > b) return;
        best = std::min(best, fl(xl) + fr(s - xl));
    };
    probe(a);
    probe(b);
    for (std::size_t i = 0; i < fl.size(); ++i) probe(fl.start(i));
    for (std::size_t j = 0; j < fr.size(); ++j) probe(s - fr.start(j));
    return best;
}

row leaf_row(int w, double cap, const space& sp) {
    row out;
    if (cap < inf)
        if (auto c = sp.class_of(w)) out.cut.emplace(sp.unit(*c), cap);
    out.keep.emplace(zero_sig(), keep_const(w, 0.0, sp));
    return out;
}

row combine_reference(const row& l, const row& r, int w, double cap, const space& sp) {
    row out;
    auto take = [&](contrib c) {
        for (const auto& [g, v] : c.cuts) put_cut(out.cut, g, v);
        if (c.keep) {
            auto [it, fresh] = out.keep.emplace(c.keep->first, c.keep->second);
            if (!fresh) it->second = min2(it->second, c.keep->second);
        }
    };
    for (const auto& [gl, tl] : l.cut)
        for (const auto& [gr, tr] : r.cut) take(run_job({kind::A, &gl, &gr, &tl, &tr}, w, cap, sp));
    for (const auto& [gl, fl] : l.keep)
        for (const auto& [gr, fr] : r.keep)
            take(run_job({kind::B, &gl, &gr, nullptr, nullptr, &fl, &fr}, w, cap, sp));
    for (const auto& [gl, tl] : l.cut)
        for (const auto& [gr, fr] : r.keep)
            take(run_job({kind::C, &gl, &gr, &tl, nullptr, nullptr, &fr}, w, cap, sp));
    for (const auto& [gl, fl] : l.keep)
        for (const auto& [gr, tr] : r.cut)
            take(run_job({kind::D, &gl, &gr, nullptr, &tr, &fl, nullptr}, w, cap, sp));
    return out;
}

row combine(const row& l, const row& r, int w, double cap, const space& sp, int threads) {
    const auto jobs = make_jobs(l, r);
    std::vector<contrib> res(jobs.size());
    const auto nj = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads) if (threads != 1)
    for (std::ptrdiff_t i = 0; i < nj; ++i) res[static_cast<std::size_t>(i)] = run_job(jobs[static_cast<std::size_t>(i)], w, cap, sp);

    // join in job order; every reduction is an exact min, so the result does
    // not depend on the thread count
    row out;
    std::map<sig, std::vector<pcf>> cand;
    for (auto& c : res) {
        for (const auto& [g, v] : c.cuts) put_cut(out.cut, g, v);
        if (c.keep) cand[c.keep->first].push_back(std::move(c.keep->second));
    }
    std::vector<std::pair<sig, std::vector<pcf>>> groups(std::make_move_iterator(cand.begin()),
                                                          std::make_move_iterator(cand.end()));
    std::vector<std::optional<pcf>> mins(groups.size());
    const auto ng = static_cast<std::ptrdiff_t>(groups.size());
#pragma omp parallel for schedule(dynamic) num_threads(threads) if (threads != 1)
    for (std::ptrdiff_t i = 0; i < ng; ++i)
        mins[static_cast<std::size_t>(i)] = multimin(groups[static_cast<std::size_t>(i)].second);
    for (std::size_t i = 0; i < groups.size(); ++i) out.keep.emplace(groups[i].first, std::move(*mins[i]));
    return out;
}

row round_row(const row& r, double delta) {
    if (!(delta > 0)) return r;
    row out;
    for (const auto& [g, v] : r.cut) out.cut.emplace(g, round_up_value(v, delta));
    for (const auto& [g, f] : r.keep) out.keep.emplace(g, round_up_pow(f, delta));
    return out;
}

row vertex_row(const std::vector<const row*>& kids, int w, double cap, const space& sp, double delta, int threads) {
    row out;
    if (kids.empty()) {
        out = leaf_row(w, cap, sp);
    } else if (kids.size() == 1) {
        out = combine(*kids[0], neutral_row(sp), w, cap, sp, threads);
    } else {
        row acc;
        const row* left = kids[0];
        for (std::size_t i = 1; i + 1 < kids.size(); ++i) {
            acc = combine(*left, *kids[i], 0, inf, sp, threads);
            left = &acc;
        }
        out = combine(*left, *kids.back(), w, cap, sp, threads);
    }
    return round_row(out, delta);
}

// ---- scheduling ----

namespace {

bool place(const std::vector<double>& jobs, std::size_t i, std::vector<double>& load, std::vector<int>& machine,
           double bound) {
    if (i == jobs.size()) return true;
    for (std::size_t m = 0; m < load.size(); ++m) {
        // machines with equal load are interchangeable
        bool seen = false;
        for (std::size_t q = 0; q < m && !seen; ++q) seen = load[q] == load[m];
        if (seen) continue;
        if (!(load[m] + jobs[i] <= bound)) continue;
        load[m] += jobs[i];
        machine[i] = static_cast<int>(m);
        if (place(jobs, i + 1, load, machine, bound)) return true;
        load[m] -= jobs[i];
    }
    return false;
}

std::optional<std::vector<int>> schedule(const std::vector<double>& jobs, int k, double bound) {
    double total = 0;
    for (double s : jobs) {
        if (!(s <= bound)) return std::nullopt;
        total += s;
    }
    if (total > k * bound * (1 + 1e-12)) return std::nullopt;
    std::vector<double> load(static_cast<std::size_t>(k), 0.0);
    std::vector<int> machine(jobs.size(), -1);
    if (!place(jobs, 0, load, machine, bound)) return std::nullopt;
    return machine;
}

} // namespace

scheduler::scheduler(const space& sp, double eps_bar) : sp_(&sp), bound_(sp.makespan_bound(eps_bar)) {
    if (!(eps_bar > 0)) fail(errc::bad_epsilon, "eps_bar must be positive");
}

bool scheduler::feasible(const sig& g) {
    auto it = memo_.find(g);
    if (it != memo_.end()) return it->second;
    bool ok = schedule(sp_->jobs(g), sp_->k(), bound_).has_value();
    memo_.emplace(g, ok);
    return ok;
}

std::optional<std::vector<int>> scheduler::assign(const sig& g) const {
    return schedule(sp_->jobs(g), sp_->k(), bound_);
}

std::vector<sig> feasible_signatures(const space& sp, double eps_bar) {
    if (sp.size() > 5'000'000) fail(errc::budget_exceeded, "signature space too large to enumerate");
    scheduler s(sp, eps_bar);
    std::vector<sig> out;
    sig g{};
    std::function<void(int)> rec = [&](int i) {
        if (i == sp.t()) {
            if (s.feasible(g)) out.push_back(g);
            return;
        }
        for (int c = 0; c < sp.M(); ++c) {
            g[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(c);
            rec(i + 1);
        }
        g[static_cast<std::size_t>(i)] = 0;
    };
    rec(0);
    return out;
}

// ---- solving ----

double default_delta(double eps, std::size_t h) { return std::log1p(eps) / static_cast<double>(h + 1); }

std::size_t piece_bound(const space& sp, double delta, double W, double lo) {
    // breakpoints are integers in [0, w(V)+1]
    const auto grid = static_cast<std::size_t>(sp.total_w()) + 2;
    if (!(delta > 0)) return grid;
    // finite values lie in {0} ∪ [lo, W]; +inf adds one more piece
    return std::min(grid, round_piece_bound(delta, std::max(1.0, W / lo)) + 1);
}

namespace {

result finish_with(const std::vector<const std::map<sig, double>*>& root_cuts, const space& sp, scheduler& sched) {
    // roots hang off a weight-0 super root through capacity-0 edges
    std::map<sig, double> acc{{zero_sig(), 0.0}};
    for (const auto* m : root_cuts) {
        std::map<sig, double> next;
        for (const auto& [ga, va] : acc)
            for (const auto& [gr, vr] : *m)
                if (auto g = sp.add(ga, gr)) put_cut(next, *g, va + vr);
        acc = std::move(next);
    }
    std::vector<std::pair<double, sig>> order;
    for (const auto& [g, v] : acc) order.push_back({v, g});
    std::sort(order.begin(), order.end());
    for (const auto& [v, g] : order) {
        if (!sched.feasible(g)) continue;
        result res;
        res.value = v;
        res.g = g;
        res.jobs = sp.jobs(g);
        res.machine = *sched.assign(g);
        res.bound = sched.bound();
        std::vector<double> load(static_cast<std::size_t>(sp.k()), 0.0);
        for (std::size_t i = 0; i < res.jobs.size(); ++i) load[static_cast<std::size_t>(res.machine[i])] += res.jobs[i];
        res.makespan = load.empty() ? 0 : *std::max_element(load.begin(), load.end());
        return res;
    }
    fail(errc::infeasible, "no feasible signature has a finite value");
}

void check_weights(const dp::rooted_forest& f, const std::vector<int>& weight) {
    if (weight.size() != f.size()) fail(errc::bad_argument, "one weight per vertex expected");
    for (int w : weight)
        if (w != 0 && w != 1) fail(errc::bad_argument, "vertex weights must be 0 or 1");
}

int total_weight(const std::vector<int>& weight) {
    int s = 0;
    for (int w : weight) s += w;
    return s;
}

} // namespace

result finish(const std::vector<const std::map<sig, double>*>& root_cuts, const space& sp, double eps_bar) {
    scheduler s(sp, eps_bar);
    return finish_with(root_cuts, sp, s);
}

std::vector<row> approx_rows(const dp::rooted_forest& f, const std::vector<int>& weight, const space& sp,
                             double delta, int threads) {
    std::vector<row> rows(f.size());
    for (std::size_t v : f.postorder()) {
        std::vector<const row*> kids;
        for (std::size_t c : f.children(v)) kids.push_back(&rows[c]);
        rows[v] = vertex_row(kids, weight[v], f.parent_cap(v), sp, delta, threads);
    }
    return rows;
}

result solve(const dp::rooted_forest& f, const std::vector<int>& weight, const options& opt) {
    check_weights(f, weight);
    space sp(opt.eps, opt.k, total_weight(weight));
    const std::size_t h = f.height();
    std::vector<const std::map<sig, double>*> cuts;
    result res;
    if (opt.m == mode::exact) {
        auto rows = exact_rows(f, weight, sp);
        std::size_t mp = 0;
        for (const auto& r : rows)
            for (const auto& [g, a] : r.keep) {
                std::size_t p = 1;
                for (std::size_t i = 1; i < a.size(); ++i) p += a[i] != a[i - 1];
                mp = std::max(mp, p);
            }
        for (std::size_t r : f.roots()) cuts.push_back(&rows[r].cut);
        res = finish(cuts, sp, opt.eps_bar);
        res.max_pieces = mp;
        res.delta = 0;
    } else {
        const double delta = opt.delta ? *opt.delta : default_delta(opt.eps, h);
        auto rows = approx_rows(f, weight, sp, delta, opt.threads);
        double W = 0, lo = 1;
        for (std::size_t v = 0; v < f.size(); ++v) {
            double c = f.parent_cap(v);
            if (c < inf) W += c;
            if (c > 0 && c < lo) lo = c;
        }
        const std::size_t bound = piece_bound(sp, delta, W, lo);
        std::size_t mp = 0;
        for (const auto& r : rows) mp = std::max(mp, row_pieces(r));
        if (mp > bound)
            fail(errc::piece_bound_exceeded, std::to_string(mp) + " pieces, bound " + std::to_string(bound));
        for (std::size_t r : f.roots()) cuts.push_back(&rows[r].cut);
        res = finish(cuts, sp, opt.eps_bar);
        res.max_pieces = mp;
        res.delta = delta;
    }
    res.height = h;
    return res;
}

// ---- dynamic ----

dynamic::dynamic(dp::rooted_forest f, std::vector<int> weight, const options& opt, std::size_t h)
    : f_(std::move(f)), w_(std::move(weight)), opt_(opt), h_(h),
      sp_((check_weights(f_, w_), opt.eps), opt.k, total_weight(w_)) {
    if (f_.height() > h_) fail(errc::height_bound_exceeded, "initial forest is taller than h");
    delta_ = opt.m == mode::exact ? 0.0 : (opt.delta ? *opt.delta : default_delta(opt.eps, h_));
    sched_ = std::make_unique<scheduler>(sp_, opt.eps_bar);
    for (std::size_t v = 0; v < f_.size(); ++v) note_cap(f_.parent_cap(v));
    for (std::size_t v = 0; v < f_.size(); ++v) {
        table_.add_row([this, v](const std::vector<const row*>& in) {
            return vertex_row(in, w_[v], f_.parent_cap(v), sp_, delta_, opt_.threads);
        });
    }
    for (std::size_t v = 0; v < f_.size(); ++v) wire(v);
    table_.set_piece_bound(piece_bound(sp_, delta_, W_, lo_));
    table_.compute_all();
}

void dynamic::note_cap(double c) {
    if (c < inf) W_ += c;
    if (c > 0 && c < lo_) lo_ = c;
}

void dynamic::wire(std::size_t v) { table_.set_inputs(v, f_.children(v)); }

void dynamic::refresh(const std::vector<std::size_t>& order) {
    for (std::size_t v : order) wire(v);
    table_.reset_count();
    table_.recompute(order);
    last_recompute_ = table_.recompute_count();
}

void dynamic::link(std::size_t u, std::size_t v, double cap) {
    if (!(cap >= 0)) fail(errc::bad_argument, "capacity must be non-negative");
    dp::rooted_forest trial = f_;
    trial.link(u, v, cap);
    if (trial.height() > h_) fail(errc::height_bound_exceeded, "link would make the forest taller than h");
    // finite costs are sums of capacities, so W only grows
    note_cap(cap);
    table_.set_piece_bound(piece_bound(sp_, delta_, W_, lo_));
    refresh(f_.link(u, v, cap));
}

void dynamic::cut(std::size_t u, std::size_t v) { refresh(f_.cut(u, v)); }

result dynamic::query() {
    std::vector<const std::map<sig, double>*> cuts;
    for (std::size_t r : f_.roots()) cuts.push_back(&table_.get(r).cut);
    auto res = finish_with(cuts, sp_, *sched_);
    res.delta = delta_;
    res.height = f_.height();
    for (std::size_t v = 0; v < f_.size(); ++v) res.max_pieces = std::max(res.max_pieces, row_pieces(table_.get(v)));
    return res;
}

} // namespace pcdp::partition
