// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria (capped at 1). `acceptance N` runs criterion N only.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "helpers.hpp"
#include "pcdp/convolution.hpp"
#include "pcdp/knapsack.hpp"
#include "pcdp/necklace.hpp"
#include "pcdp/noi.hpp"
#include "pcdp/oracles.hpp"
#include "pcdp/partition.hpp"
#include "pcdp/pcf.hpp"
#include "pcdp/ssl.hpp"

using namespace pcdp;
using testing_util::random_monotone;
using testing_util::to_step;

namespace {

constexpr double slack = 1 + 1e-12;

// counts checks and keeps the first failure
struct tally {
    std::size_t checks = 0, failed = 0;
    std::string first;
    std::string note;
    bool soft_missed = false;

    void operator()(bool ok, const std::string& what) {
        ++checks;
        if (!ok && failed++ == 0) first = what;
    }
};

using clock_type = std::chrono::steady_clock;

double since(clock_type::time_point t0) { return std::chrono::duration<double>(clock_type::now() - t0).count(); }

// ---- 1: convolution against the oracle ----

void convolution_oracle(tally& t) {
    std::mt19937 rng(1001);
    for (int it = 0; it < 500; ++it) {
        auto f1 = random_monotone(rng, 0, 100, 20, mono::decreasing);
        auto f2 = random_monotone(rng, 0, 100, 20, mono::decreasing);
        auto mono_c = convolve_monotone(f1, f2).f;
        auto gen = convolve_general(f1, f2);
        auto s1 = to_step(f1), s2 = to_step(f2);
        for (int x = 0; x <= 200; ++x) {
            const double want = oracles::convolution_at(s1, s2, x);
            t(mono_c(x) == want, fmt::format("pair {}: monotone at {} is {}, oracle {}", it, x, mono_c(x), want));
            t(gen(x) == mono_c(x), fmt::format("pair {}: general at {} is {}, monotone {}", it, x, gen(x), mono_c(x)));
            if (x < 200) t(gen(x + 0.5) == mono_c(x + 0.5), fmt::format("pair {}: general differs at {}.5", it, x));
        }
    }
    t.note = "500 pairs, 201 integer points each";
}

// ---- 2: piece bounds of the basic operations ----

void lemma_bounds(tally& t) {
    std::mt19937 rng(2002);
    std::uniform_real_distribution<double> probe(0, 100);
    std::uniform_int_distribution<int> sh(0, 60);
    const double deltas[] = {0.01, 0.1, 0.5};
    const double W = 1e6;
    for (int it = 0; it < 1000; ++it) {
        const mono tag = it % 2 ? mono::increasing : mono::decreasing;
        auto g = random_monotone(rng, 0, 100, 20, tag);
        auto h = random_monotone(rng, 0, 100, 20, tag);
        const std::size_t pg = g.size(), ph = h.size();
        t(min2(g, h).size() <= pg + ph, fmt::format("min2 pieces {} > {}+{}", min2(g, h).size(), pg, ph));
        t(add(g, h).size() <= pg + ph, fmt::format("add pieces {} > {}+{}", add(g, h).size(), pg, ph));
        t(shift(g, sh(rng)).size() <= pg, "shift added pieces");
        const double d = deltas[it % 3];
        auto r = round_up_pow(g, d);
        t(r.size() <= round_piece_bound(d, W), fmt::format("round pieces {} > {}", r.size(), round_piece_bound(d, W)));
        for (int k = 0; k < 1000; ++k) {
            const double x = probe(rng);
            const double gx = g(x), rx = r(x);
            const bool ok = gx == inf ? rx == inf : (gx <= rx && rx <= (1 + d) * gx * slack);
            t(ok, fmt::format("round sandwich at {}: g={} rounded={}", x, gx, rx));
        }
    }
    t.note = "1000 functions, 1000 probes each";
}

// ---- 3: knapsack ----

std::vector<oracles::item> live(const knapsack& k) {
    std::vector<oracles::item> out;
    for (auto id : k.ids()) out.push_back({k.item(id).p, k.item(id).w});
    return out;
}

void check_fast(tally& t, fast_knapsack& f, double opt, double B, const std::string& where) {
    const double eps = f.eps();
    const double v = f.query_value();
    t(v <= (1 + eps) * opt * slack, where + fmt::format(": fast {} above (1+eps)OPT {}", v, opt));
    t(v * std::pow(1 + eps, 4) * slack >= opt, where + fmt::format(": fast {} below OPT/(1+eps)^4, OPT {}", v, opt));
    double w = 0;
    for (auto id : f.query_solution()) w += f.item(id).w;
    t(w <= B, where + ": fast solution over budget");
}

void check_slow(tally& t, const knapsack& k, double opt, const std::string& where) {
    const double eps = k.eps();
    const double v = k.value();
    t(v >= opt && v <= (1 + eps) * opt * slack, where + fmt::format(": value {} outside [OPT, (1+eps)OPT], OPT {}", v, opt));
    double p = 0, w = 0;
    for (auto id : k.solution()) {
        p += k.item(id).p;
        w += k.item(id).w;
    }
    t(w <= k.budget(), where + ": solution over budget");
    t(p * (1 + eps) * slack >= opt, where + fmt::format(": solution worth {} < OPT/(1+eps), OPT {}", p, opt));
}

void knapsack_crit(tally& t) {
    std::mt19937 rng(3003);
    std::uniform_int_distribution<int> w(1, 30), nn(0, 16), bb(0, 150);
    std::uniform_real_distribution<double> p(1, 100);
    for (int it = 0; it < 200; ++it) {
        const double eps = it % 2 ? 0.1 : 0.25;
        std::vector<kn_item> items;
        std::vector<oracles::item> oi;
        for (int i = nn(rng); i > 0; --i) {
            items.push_back({p(rng), double(w(rng))});
            oi.push_back({items.back().p, items.back().w});
        }
        const double B = bb(rng);
        const double opt = oracles::knapsack(oi, B);
        knapsack k({eps, B}, items);
        check_slow(t, k, opt, fmt::format("instance {}", it));
        fast_knapsack f({eps, B}, items);
        check_fast(t, f, opt, B, fmt::format("instance {}", it));
    }
    for (int trace = 0; trace < 4; ++trace) {
        const double eps = trace % 2 ? 0.1 : 0.25;
        const double B = 80;
        knapsack_options opt{eps, B, 100.0 * 20};
        knapsack k(opt);
        fast_knapsack f(opt);
        std::map<std::size_t, std::size_t> fast_id;
        std::uniform_int_distribution<int> coin(0, 2);
        for (int op = 0; op < 200; ++op) {
            auto ids = k.ids();
            if (!ids.empty() && (ids.size() >= 16 || coin(rng) == 0)) {
                auto id = ids[std::uniform_int_distribution<std::size_t>(0, ids.size() - 1)(rng)];
                k.erase(id);
                f.erase(fast_id.at(id));
                fast_id.erase(id);
            } else {
                const double pp = p(rng), ww = w(rng);
                auto id = k.insert(pp, ww);
                fast_id[id] = f.insert(pp, ww);
            }
            const std::string where = fmt::format("trace {} op {}", trace, op);
            if (k.last_recompute() > 0) {
                std::size_t lg = 0;
                while ((std::size_t(1) << lg) < k.slots()) ++lg;
                t(k.last_recompute() <= lg + 1, where + fmt::format(": recomputed {} rows", k.last_recompute()));
            }
            const double o = oracles::knapsack(live(k), B);
            check_slow(t, k, o, where);
            check_fast(t, f, o, B, where);
        }
    }
    t.note = "200 instances, 4 traces of 200 ops";
}

// ---- 4: partitioning ----

struct ptree {
    dp::rooted_forest f;
    std::vector<int> w;
    std::vector<oracles::edge> edges;
};

ptree random_ptree(std::mt19937& rng, int n) {
    ptree in{dp::rooted_forest(static_cast<std::size_t>(n)), {}, {}};
    std::uniform_int_distribution<int> cap(1, 5), coin(0, 5);
    for (int v = 0; v < n; ++v) in.w.push_back(coin(rng) == 0 ? 0 : 1);
    if (std::accumulate(in.w.begin(), in.w.end(), 0) == 0) in.w[0] = 1;
    for (int v = 1; v < n; ++v) {
        int par = std::uniform_int_distribution<int>(0, v - 1)(rng);
        double c = cap(rng);
        in.f.link(std::size_t(par), std::size_t(v), c);
        in.edges.push_back({par, v, c});
    }
    return in;
}

partition::options popts(int k, double eps, partition::mode m) {
    partition::options o;
    o.k = k;
    o.eps = eps;
    o.eps_bar = 0.1;
    o.m = m;
    return o;
}

void partition_crit(tally& t) {
    using namespace partition;
    std::mt19937 rng(4004);
    for (int it = 0; it < 120; ++it) {
        const int n = std::uniform_int_distribution<int>(2, 10)(rng);
        const int k = 2 + it % 2;
        const double eps = it % 4 < 2 ? 0.5 : 1.0 / 3;
        auto in = random_ptree(rng, n);
        const int W = std::accumulate(in.w.begin(), in.w.end(), 0);
        const std::string where = fmt::format("tree {} (n={}, k={})", it, n, k);

        auto ex = solve(in.f, in.w, popts(k, eps, mode::exact));
        const double strict = oracles::partition(n, in.edges, in.w, k);
        t(ex.value <= strict, where + fmt::format(": exact {} above strict OPT {}", ex.value, strict));
        space sp(eps, k, W);
        const int relaxed = static_cast<int>(std::floor(ex.bound + sp.xi(0)));
        const double lower = oracles::partition(n, in.edges, in.w, k, relaxed);
        t(ex.value >= lower, where + fmt::format(": exact {} below relaxed OPT {}", ex.value, lower));
        t(ex.makespan <= (1 + 0.1) * (1 + eps) * ((W + k - 1) / k) * slack, where + ": balance witness too large");

        auto ap = solve(in.f, in.w, popts(k, eps, mode::approx));
        t(ap.value >= ex.value && ap.value <= (1 + eps) * ex.value * slack,
          where + fmt::format(": approx {} not within (1+eps) of exact {}", ap.value, ex.value));

        auto er = exact_rows(in.f, in.w, sp);
        auto zr = approx_rows(in.f, in.w, sp, 0.0);
        bool same = true;
        for (int v = 0; v < n && same; ++v) {
            const auto& e = er[std::size_t(v)];
            const auto& a = zr[std::size_t(v)];
            same = e.cut == a.cut && e.keep.size() == a.keep.size();
            for (const auto& [g, arr] : e.keep) {
                if (!same) break;
                auto hit = a.keep.find(g);
                same = hit != a.keep.end();
                for (int x = 0; same && x <= W; ++x) same = hit->second(x) == arr[std::size_t(x)];
            }
        }
        t(same, where + ": delta = 0 rows differ from the exact route");
        auto z = popts(k, eps, mode::approx);
        z.delta = 0.0;
        t(solve(in.f, in.w, z).value == ex.value, where + ": delta = 0 value differs from exact");
    }

    for (int trace = 0; trace < 6; ++trace) {
        const int n = 10;
        const std::size_t h = 4;
        const int k = 2 + trace % 2;
        const double eps = trace % 3 == 2 ? 1.0 / 3 : 0.5;
        std::vector<int> w(n, 1);
        w[3] = 0;
        auto o = popts(k, eps, mode::approx);
        dynamic dyn(dp::rooted_forest(n), w, o, h);
        std::uniform_int_distribution<int> pick(0, n - 1), cap(1, 9);
        int ops = 0;
        while (ops < 30) {
            const auto& f = dyn.forest();
            auto u = std::size_t(pick(rng)), v = std::size_t(pick(rng));
            if (u == v) continue;
            if (f.has_edge(u, v)) {
                dyn.cut(u, v);
            } else if (f.root_of(u) != f.root_of(v)) {
                try {
                    dyn.link(u, v, cap(rng));
                } catch (const error& e) {
                    if (e.code() == errc::height_bound_exceeded) continue;
                    throw;
                }
            } else {
                continue;
            }
            ++ops;
            auto same = o;
            same.delta = dyn.delta();
            const double got = dyn.query().value, fresh = solve(dyn.forest(), w, same).value;
            t(got == fresh, fmt::format("trace {} op {}: dynamic {} vs from scratch {}", trace, ops, got, fresh));
        }
    }
    t.note = "120 trees n <= 10, 6 traces of 30 ops";
}

// ---- 5: simultaneous source location ----

struct stree {
    dp::rooted_forest f;
    std::vector<ssl::vertex> vs;
};

stree random_stree(std::mt19937& rng, int n) {
    stree in{dp::rooted_forest(static_cast<std::size_t>(n)), {}};
    std::uniform_int_distribution<int> cap(1, 4), dem(0, 3), coin(0, 9);
    for (int v = 0; v < n; ++v) in.vs.push_back({double(dem(rng)), coin(rng) < 6});
    for (int v = 1; v < n; ++v) {
        std::vector<std::size_t> open;
        for (int u = 0; u < v; ++u)
            if (in.f.children(std::size_t(u)).size() < 2) open.push_back(std::size_t(u));
        auto par = open[std::uniform_int_distribution<std::size_t>(0, open.size() - 1)(rng)];
        in.f.link(par, std::size_t(v), cap(rng));
    }
    return in;
}

oracles::ssl_instance to_oracle(const dp::rooted_forest& f, const std::vector<ssl::vertex>& vs) {
    oracles::ssl_instance o;
    o.n = int(f.size());
    for (std::size_t v = 0; v < f.size(); ++v) {
        o.demand.push_back(vs[v].demand);
        o.source_ok.push_back(vs[v].source_ok);
        if (!f.is_root(v)) o.edges.push_back({int(v), int(f.parent(v)), f.parent_cap(v)});
    }
    return o;
}

std::vector<bool> mask(const std::vector<std::size_t>& s, std::size_t n) {
    std::vector<bool> m(n, false);
    for (auto v : s) m[v] = true;
    return m;
}

void ssl_crit(tally& t) {
    std::mt19937 rng(5005);
    auto opts = [](ssl::mode m) {
        ssl::options o;
        o.m = m;
        o.eps = 0.1;
        return o;
    };
    int feasible = 0;
    for (int it = 0; it < 100; ++it) {
        const int n = std::uniform_int_distribution<int>(1, 12)(rng);
        auto in = random_stree(rng, n);
        auto inst = to_oracle(in.f, in.vs);
        auto opt = oracles::ssl(inst);
        const std::string where = fmt::format("tree {} (n={})", it, n);
        if (!opt) {
            bool threw = false;
            try {
                ssl::solve(in.f, in.vs, opts(ssl::mode::exact));
            } catch (const error& e) {
                threw = e.code() == errc::infeasible;
            }
            t(threw, where + ": infeasible instance not reported");
            continue;
        }
        ++feasible;
        auto ex = ssl::solve(in.f, in.vs, opts(ssl::mode::exact));
        t(ex.value == *opt, where + fmt::format(": exact {} vs oracle {}", ex.value, *opt));
        auto ap = ssl::solve(in.f, in.vs, opts(ssl::mode::approx));
        t(ap.value >= *opt && ap.value <= std::ceil(1.1 * *opt),
          where + fmt::format(": approx {} outside [OPT, ceil((1+eps)OPT)], OPT {}", ap.value, *opt));
        t(oracles::ssl_feasible(inst, mask(ap.sources, std::size_t(n))), where + ": approx sources overload an edge");
    }
    t(feasible >= 30, fmt::format("only {} feasible trees", feasible));

    for (int it = 0; it < 40; ++it) {
        const int n = std::uniform_int_distribution<int>(1, 8)(rng);
        auto in = random_stree(rng, n);
        auto inst = to_oracle(in.f, in.vs);
        auto rows = ssl::approx_rows(in.f, in.vs, 0.0);
        for (int v = 0; v < n; ++v) {
            std::vector<double> fv;
            for (int i = 0; i <= n; ++i) fv.push_back(oracles::ssl_f(inst, 0, v, i));
            const double cap = in.f.parent_cap(std::size_t(v));
            for (double x = -cap; x <= cap; x += 0.5) {
                double want = inf;
                for (int i = 0; i <= n && want == inf; ++i)
                    if (fv[std::size_t(i)] <= x) want = i;
                const double got = rows[std::size_t(v)].f(x);
                t(got == want, fmt::format("inverse identity, tree {} vertex {} x={}: {} vs {}", it, v, x, got, want));
            }
        }
    }

    for (int trace = 0; trace < 4; ++trace) {
        const int n = 10;
        const std::size_t h = 5;
        auto in = random_stree(rng, n);
        while (in.f.height() > h) in = random_stree(rng, n);
        auto o = opts(ssl::mode::approx);
        ssl::dynamic dyn(in.f, in.vs, o, h);
        std::uniform_int_distribution<int> pick(0, n - 1), cap(1, 4), dem(0, 3), kind(0, 3);
        int ops = 0;
        while (ops < 50) {
            const auto& f = dyn.forest();
            auto u = std::size_t(pick(rng)), v = std::size_t(pick(rng));
            switch (kind(rng)) {
            case 0: dyn.set_demand(u, dem(rng)); break;
            case 1:
                if (!f.has_edge(u, v)) continue;
                dyn.set_capacity(u, v, cap(rng));
                break;
            case 2:
                if (!f.has_edge(u, v)) continue;
                dyn.remove(u, v);
                break;
            default:
                if (u == v || f.root_of(u) == f.root_of(v)) continue;
                try {
                    dyn.insert(u, v, cap(rng));
                } catch (const error& e) {
                    if (e.code() == errc::height_bound_exceeded) continue;
                    throw;
                }
            }
            ++ops;
            auto same = o;
            same.delta = dyn.delta();
            const std::string where = fmt::format("trace {} op {}", trace, ops);
            if (!oracles::ssl(to_oracle(dyn.forest(), dyn.vertices()))) continue;
            auto got = dyn.query();
            auto ref = ssl::solve(dyn.forest(), dyn.vertices(), same);
            t(got.raw == ref.raw && got.sources == ref.sources, where + ": dynamic differs from scratch");
        }
    }
    t.note = fmt::format("100 trees ({} feasible), 40 inverse checks, 4 traces of 50 ops", feasible);
}

// ---- 6: necklace ----

std::vector<double> beads(std::mt19937& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<double> b(n);
    for (double& v : b) v = u(rng);
    std::sort(b.begin(), b.end());
    return b;
}

void necklace_crit(tally& t) {
    std::mt19937 rng(6006);
    std::uniform_real_distribution<double> u(0, 1);
    for (int it = 0; it < 200; ++it) {
        const double eps = it % 2 ? 0.01 : 0.05;
        const std::size_t n = 1 + std::size_t(it) % 10;
        auto x = beads(rng, n), y = beads(rng, n);
        const double o = oracles::necklace(x, y).value;
        const double v = necklace::solve(x, y, eps).value;
        t(std::fabs(v - o) <= eps, fmt::format("instance {}: {} vs oracle {}", it, v, o));
    }
    for (int trace = 0; trace < 10; ++trace) {
        const double eps = trace % 2 ? 0.01 : 0.05;
        const auto budget = static_cast<std::size_t>(std::ceil(2 / eps)) + 2;
        std::vector<double> x, y;
        necklace::dynamic dy(eps);
        for (int op = 0; op < 100; ++op) {
            if (x.empty() || (x.size() < 10 && u(rng) < 0.6)) {
                auto i = std::uniform_int_distribution<std::size_t>(0, x.size())(rng);
                auto between = [&](const std::vector<double>& v) {
                    const double lo = i == 0 ? 0 : v[i - 1], hi = i == v.size() ? 1 : v[i];
                    return std::min(lo + (hi - lo) * u(rng), std::nextafter(1.0, 0.0));
                };
                const double a = between(x), b = between(y);
                dy.insert(i, a, b);
                x.insert(x.begin() + std::ptrdiff_t(i), a);
                y.insert(y.begin() + std::ptrdiff_t(i), b);
            } else {
                auto i = std::uniform_int_distribution<std::size_t>(0, x.size() - 1)(rng);
                dy.erase(i);
                x.erase(x.begin() + std::ptrdiff_t(i));
                y.erase(y.begin() + std::ptrdiff_t(i));
            }
            const double o = oracles::necklace(x, y).value, v = dy.query().value;
            t(std::fabs(v - o) <= eps, fmt::format("trace {} op {}: {} vs oracle {}", trace, op, v, o));
            t(dy.max_pieces() <= budget, fmt::format("trace {} op {}: {} pieces", trace, op, dy.max_pieces()));
        }
    }
    for (double eps : {0.05, 0.01}) {
        const auto budget = static_cast<std::size_t>(std::ceil(2 / eps)) + 2;
        necklace::dynamic dense(beads(rng, 20000), beads(rng, 20000), eps);
        t(dense.max_pieces() <= budget, fmt::format("20000 beads, eps {}: {} pieces", eps, dense.max_pieces()));
    }
    t.note = "200 instances, 10 traces of 100 ops";
}

// ---- 7: NOI structure ----

void noi_crit(tally& t) {
    std::mt19937 rng(7007);
    std::uniform_real_distribution<double> pos(0, 1e6), len(0.01, 30);
    noi_set s;
    std::vector<interval> raw;
    for (int k = 0; k < 10000; ++k) {
        const double a = pos(rng), b = a + len(rng);
        s.insert(a, b);
        raw.push_back({a, b});
    }
    std::sort(raw.begin(), raw.end(), [](const interval& p, const interval& q) { return p.a < q.a; });
    std::vector<interval> merged;
    for (const auto& iv : raw) {
        if (!merged.empty() && iv.a <= merged.back().b)
            merged.back().b = std::max(merged.back().b, iv.b);
        else
            merged.push_back(iv);
    }
    for (int k = 0; k < 1000; ++k) {
        const double x = pos(rng);
        bool in = false;
        for (const auto& iv : merged) in = in || (iv.a <= x && x <= iv.b);
        t(s.contains(x) == in, fmt::format("membership of {}", x));
    }
    for (int k = 0; k < 10000; ++k) {
        const double z = pos(rng) * 1.01;
        const interval* best = nullptr;
        for (const auto& iv : merged)
            if (iv.b >= z && (!best || iv.b < best->b)) best = &iv;
        auto got = s.closest_larger(z);
        t(got.has_value() == (best != nullptr) && (!best || *got == *best), fmt::format("closest larger than {}", z));
    }
    t.note = fmt::format("{} merged intervals", merged.size());
}

// ---- 8: knapsack scaling ----

struct scale_run {
    double median_ms;
    std::size_t pieces;
    std::size_t bound;
};

scale_run knapsack_scale(int lg, double eps, std::mt19937& rng) {
    std::uniform_int_distribution<int> w(1, 1000), p(1, 100);
    std::vector<kn_item> items;
    const std::size_t n = std::size_t(1) << lg;
    for (std::size_t i = 0; i + 1 < n; ++i) items.push_back({double(p(rng)), double(w(rng))});
    knapsack k({eps, 250.0 * double(n), 200.0 * double(n)}, items);
    std::vector<double> ms;
    for (int i = 0; i < 40; ++i) {
        auto t0 = clock_type::now();
        auto id = k.insert(p(rng), w(rng));
        ms.push_back(since(t0) * 1e3);
        t0 = clock_type::now();
        k.erase(id);
        ms.push_back(since(t0) * 1e3);
    }
    std::sort(ms.begin(), ms.end());
    return {ms[ms.size() / 2], k.max_pieces(), round_piece_bound(k.delta(), k.W())};
}

void scaling_crit(tally& t) {
    std::mt19937 rng(8008);
    const double eps = 0.5;
    auto small = knapsack_scale(10, eps, rng);
    auto large = knapsack_scale(16, eps, rng);
    t(small.pieces <= small.bound, fmt::format("n=2^10: {} pieces > bound {}", small.pieces, small.bound));
    t(large.pieces <= large.bound, fmt::format("n=2^16: {} pieces > bound {}", large.pieces, large.bound));
    const double ratio = large.median_ms / small.median_ms;
    t.soft_missed = !(ratio < 10);
    t.note = fmt::format("pieces {}/{} and {}/{}; median update {:.2f} ms vs {:.2f} ms, ratio {:.1f}x (soft target < 10x: {})",
                         small.pieces, small.bound, large.pieces, large.bound, small.median_ms, large.median_ms, ratio,
                         t.soft_missed ? "missed" : "met");
}

struct criterion {
    int id;
    const char* name;
    void (*run)(tally&);
};

} // namespace

int main(int argc, char** argv) {
    const criterion all[] = {
        {1, "convolution oracle equivalence", convolution_oracle},
        {2, "basic operation piece bounds and rounding sandwich", lemma_bounds},
        {3, "knapsack within (1+eps), fast variant within (1+eps)^4", knapsack_crit},
        {4, "partitioning exact/approx/delta=0/dynamic", partition_crit},
        {5, "source location exact/approx/inverse/dynamic", ssl_crit},
        {6, "necklace within eps, piece budget", necklace_crit},
        {7, "NOI structure vs naive union", noi_crit},
        {8, "knapsack scaling (latency soft, pieces hard)", scaling_crit},
    };
    const int only = argc > 1 ? std::atoi(argv[1]) : 0;
    int failed = 0;
    for (const auto& c : all) {
        if (only && c.id != only) continue;
        tally t;
        const auto t0 = clock_type::now();
        try {
            c.run(t);
        } catch (const std::exception& e) {
            t(false, std::string("exception: ") + e.what());
        }
        const double secs = since(t0);
        const bool pass = t.failed == 0;
        failed += !pass;
        std::printf("%s %d %s: %zu checks, %zu failed (%.1f s)", pass ? "PASS" : "FAIL", c.id, c.name, t.checks, t.failed,
                    secs);
        if (!t.note.empty()) std::printf("; %s", t.note.c_str());
        if (!pass) std::printf("; first failure: %s", t.first.c_str());
        std::printf("\n");
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
