#include <cmath>
#include <random>

#include "doctest.h"
#include "pcdp/oracles.hpp"
#include "pcdp/ssl.hpp"

using namespace pcdp;
using namespace pcdp::ssl;

namespace {

struct instance {
    dp::rooted_forest f;
    std::vector<vertex> vs;
};

// binary when max_kids == 2
instance random_tree(std::mt19937& rng, int n, std::size_t max_kids = 2, int max_cap = 4, int max_d = 3) {
    instance in{dp::rooted_forest(static_cast<std::size_t>(n)), {}};
    std::uniform_int_distribution<int> cap(1, max_cap), dem(0, max_d), coin(0, 9);
    for (int v = 0; v < n; ++v) in.vs.push_back({double(dem(rng)), coin(rng) < 6});
    for (int v = 1; v < n; ++v) {
        std::vector<std::size_t> open;
        for (int u = 0; u < v; ++u)
            if (in.f.children(static_cast<std::size_t>(u)).size() < max_kids) open.push_back(static_cast<std::size_t>(u));
        auto p = open[std::uniform_int_distribution<std::size_t>(0, open.size() - 1)(rng)];
        in.f.link(p, static_cast<std::size_t>(v), cap(rng));
    }
    return in;
}

oracles::ssl_instance to_oracle(const dp::rooted_forest& f, const std::vector<vertex>& vs) {
    oracles::ssl_instance o;
    o.n = static_cast<int>(f.size());
    for (std::size_t v = 0; v < f.size(); ++v) {
        o.demand.push_back(vs[v].demand);
        o.source_ok.push_back(vs[v].source_ok);
        if (!f.is_root(v)) o.edges.push_back({int(v), int(f.parent(v)), f.parent_cap(v)});
    }
    return o;
}

std::vector<bool> as_mask(const std::vector<std::size_t>& s, std::size_t n) {
    std::vector<bool> m(n, false);
    for (auto v : s) m[v] = true;
    return m;
}

std::size_t subtree_height(const dp::rooted_forest& f, std::size_t v) {
    std::size_t h = 0;
    for (std::size_t c : f.children(v)) h = std::max(h, subtree_height(f, c) + 1);
    return h;
}

options opts(mode m, double eps = 0.1) {
    options o;
    o.m = m;
    o.eps = eps;
    return o;
}

void check_capacity_property(const pcf& f, double cap, std::size_t n, double top) {
    CHECK(f.lo() == -cap - 1);
    CHECK(f.hi() == cap + 1);
    CHECK(f.tag() == mono::decreasing);
    CHECK(f(-cap - 0.5) == inf);
    CHECK(f(cap + 0.5) == f(cap));
    CHECK(f(cap + 1) == f(cap));
    for (double y : f.values())
        if (y < inf) CHECK(y <= top * double(n));
}

} // namespace

TEST_CASE("leaf rows") {
    auto src = leaf_row({0, true}, 3).f;
    CHECK(src(0) == 0);
    CHECK(src(-0.5) == 1);
    CHECK(src(-3) == 1);
    CHECK(src(-3.5) == inf);
    CHECK(src.size() == 3);

    CHECK(leaf_row({4, false}, 3).f.is_constant());
    CHECK(leaf_row({4, false}, 3).f(3) == inf);

    auto plain = leaf_row({2, false}, 5).f;
    CHECK(plain(1.5) == inf);
    CHECK(plain(2) == 0);
    CHECK(plain(6) == 0);
    CHECK(plain(-5) == inf);
}

TEST_CASE("small examples") {
    dp::rooted_forest path(2);
    path.link(0, 1, 1);
    CHECK(solve(path, {{1, true}, {1, true}}, opts(mode::exact)).value == 1);

    // d(a)=1, d(b)=2, cap 1, root a
    std::vector<vertex> ab{{1, true}, {2, true}};
    auto o = oracles::ssl(to_oracle(path, ab));
    REQUIRE(o.has_value());
    CHECK(solve(path, ab, opts(mode::exact)).value == *o);
    CHECK(*o == 1);

    dp::rooted_forest star(4);
    for (std::size_t v = 1; v < 4; ++v) star.link(0, v, 1);
    std::vector<vertex> sv{{3, false}, {0, true}, {0, true}, {0, true}};
    for (mode m : {mode::exact, mode::approx}) CHECK(solve(star, sv, opts(m)).value == 3);

    std::vector<vertex> zero(4, vertex{0, false});
    CHECK(solve(star, zero, opts(mode::exact)).value == 0);
    std::vector<vertex> all(4, vertex{0, true});
    CHECK(solve(star, all, opts(mode::approx)).value == 0);

    std::vector<vertex> bad{{1, false}, {0, false}};
    CHECK_THROWS_AS(solve(path, bad, opts(mode::exact)), error);
    CHECK_THROWS_AS(solve(path, {{-1, true}, {0, true}}, opts(mode::exact)), error);
    dp::rooted_forest wide(2);
    wide.link(0, 1, inf);
    CHECK_THROWS_AS(solve(wide, {{0, true}, {0, true}}, opts(mode::exact)), error);
}

TEST_CASE("exact and approximate solves against source-set enumeration") {
    std::mt19937 rng(7);
    int feasible = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const int n = std::uniform_int_distribution<int>(1, 12)(rng);
        auto in = random_tree(rng, n);
        auto inst = to_oracle(in.f, in.vs);
        auto opt = oracles::ssl(inst);
        if (!opt) {
            CHECK_THROWS_AS(solve(in.f, in.vs, opts(mode::exact)), error);
            CHECK_THROWS_AS(solve(in.f, in.vs, opts(mode::approx)), error);
            continue;
        }
        ++feasible;
        auto ex = solve(in.f, in.vs, opts(mode::exact));
        CHECK(ex.raw == *opt);
        CHECK(ex.value == *opt);
        CHECK(oracles::ssl_feasible(inst, as_mask(ex.sources, std::size_t(n))));

        const double eps = 0.1;
        auto ap = solve(in.f, in.vs, opts(mode::approx, eps));
        CHECK(ap.value >= *opt);
        CHECK(double(ap.value) <= ap.raw);
        CHECK(ap.raw <= (1 + eps) * *opt * (1 + 1e-12));
        CHECK(ap.value <= std::ceil((1 + eps) * *opt));
        CHECK(oracles::ssl_feasible(inst, as_mask(ap.sources, std::size_t(n))));
        for (auto v : ap.sources) CHECK(in.vs[v].source_ok);
    }
    CHECK(feasible > 40);
}

TEST_CASE("rows are the inverse of the least-inflow function") {
    std::mt19937 rng(19);
    for (int rep = 0; rep < 40; ++rep) {
        const int n = std::uniform_int_distribution<int>(1, 8)(rng);
        auto in = random_tree(rng, n);
        auto inst = to_oracle(in.f, in.vs);
        auto rows = approx_rows(in.f, in.vs, 0.0);
        for (int v = 0; v < n; ++v) {
            std::vector<double> fv;
            for (int i = 0; i <= n; ++i) fv.push_back(oracles::ssl_f(inst, 0, v, i));
            const double cap = in.f.parent_cap(std::size_t(v));
            const pcf& row = rows[std::size_t(v)].f;
            for (double x = -cap - 1; x <= cap + 1; x += 0.5) {
                double want = inf;
                if (x >= -cap)
                    for (int i = 0; i <= n && want == inf; ++i)
                        if (fv[std::size_t(i)] <= std::min(x, cap)) want = i;
                CHECK(row(x) == want);
            }
        }
    }
}

TEST_CASE("unrounded pipeline equals the inverted exact tables") {
    std::mt19937 rng(23);
    for (int rep = 0; rep < 60; ++rep) {
        const int n = std::uniform_int_distribution<int>(1, 20)(rng);
        auto in = random_tree(rng, n, 1 + rep % 4, 6, 4);
        auto rows = approx_rows(in.f, in.vs, 0.0);
        auto tab = inflow_tables(in.f, in.vs);
        for (std::size_t v = 0; v < in.f.size(); ++v) {
            const double cap = in.f.parent_cap(v);
            CHECK(rows[v].f == invert(tab[v], cap));
            check_capacity_property(rows[v].f, cap, in.f.size(), 1.0);
        }
    }
}

TEST_CASE("rounded rows stay within the per-level factor") {
    std::mt19937 rng(31);
    for (int rep = 0; rep < 40; ++rep) {
        const int n = std::uniform_int_distribution<int>(2, 30)(rng);
        auto in = random_tree(rng, n, 2, 6, 3);
        const double eps = rep % 2 ? 0.1 : 0.5;
        const double delta = default_delta(eps, in.f.height());
        auto ex = approx_rows(in.f, in.vs, 0.0);
        auto ap = approx_rows(in.f, in.vs, delta);
        for (std::size_t v = 0; v < in.f.size(); ++v) {
            const double fac = std::pow(1 + delta, double(subtree_height(in.f, v) + 1)) * (1 + 1e-12);
            const double cap = in.f.parent_cap(v);
            check_capacity_property(ap[v].f, cap, in.f.size(), 1 + eps);
            CHECK(ap[v].f.size() <= piece_bound(delta, in.f.size()));
            for (double x = -cap - 1; x <= cap + 1; x += 0.25) {
                const double e = ex[v].f(x), a = ap[v].f(x);
                CHECK(a >= e);
                if (e < inf) CHECK(a <= fac * e);
            }
        }
    }
}

TEST_CASE("folding many children matches the binarized tree") {
    std::mt19937 rng(37);
    for (int rep = 0; rep < 40; ++rep) {
        const int n = std::uniform_int_distribution<int>(3, 12)(rng);
        auto in = random_tree(rng, n, 6);
        auto b = dp::binarize_tree(in.f);
        double big = 1;
        for (const auto& v : in.vs) big += v.demand;
        std::vector<vertex> bv(b.tree.size(), vertex{0, false});
        for (std::size_t v = 0; v < in.f.size(); ++v) bv[b.image[v]] = in.vs[v];
        // infinite capacities inside a gadget: no edge ever carries more than the total demand
        for (std::size_t v = 0; v < b.tree.size(); ++v)
            if (b.tree.parent_cap(v) == inf) b.tree.set_parent_cap(v, big);
        auto o = oracles::ssl(to_oracle(in.f, in.vs));
        if (!o) {
            CHECK_THROWS_AS(solve(b.tree, bv, opts(mode::exact)), error);
            continue;
        }
        CHECK(solve(in.f, in.vs, opts(mode::exact)).raw == *o);
        CHECK(solve(b.tree, bv, opts(mode::exact)).raw == *o);
    }
}

TEST_CASE("dynamic traces match from-scratch solves") {
    std::mt19937 rng(43);
    for (int trace = 0; trace < 4; ++trace) {
        const int n = 10;
        const std::size_t h = 5;
        auto in = random_tree(rng, n);
        while (in.f.height() > h) in = random_tree(rng, n);
        const double eps = 0.1;
        auto o = opts(mode::approx, eps);
        dynamic dyn(in.f, in.vs, o, h);
        std::uniform_int_distribution<int> pick(0, n - 1), cap(1, 4), dem(0, 3), kind(0, 3);
        int ops = 0;
        while (ops < 50) {
            const auto& f = dyn.forest();
            const auto u = static_cast<std::size_t>(pick(rng)), v = static_cast<std::size_t>(pick(rng));
            std::size_t bound = h + 1;
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
            default: {
                if (u == v || f.root_of(u) == f.root_of(v)) continue;
                auto before = f;
                try {
                    dyn.insert(u, v, cap(rng));
                } catch (const error& e) {
                    CHECK(e.code() == errc::height_bound_exceeded);
                    CHECK(dyn.forest() == before);
                    continue;
                }
                bound = 2 * h + 2;
            }
            }
            ++ops;
            CHECK(dyn.last_recompute() <= bound);
            auto inst = to_oracle(dyn.forest(), dyn.vertices());
            auto best = oracles::ssl(inst);
            auto same = o;
            same.delta = dyn.delta();
            if (!best) {
                CHECK_THROWS_AS(dyn.query(), error);
                continue;
            }
            auto got = dyn.query();
            auto ref = solve(dyn.forest(), dyn.vertices(), same);
            CHECK(got.raw == ref.raw);
            CHECK(got.sources == ref.sources);
            CHECK(got.value >= *best);
            CHECK(got.raw <= (1 + eps) * *best * (1 + 1e-12));
            CHECK(oracles::ssl_feasible(inst, as_mask(got.sources, std::size_t(n))));
        }
    }
}

TEST_CASE("inverse updates restore the state") {
    std::mt19937 rng(47);
    auto in = random_tree(rng, 9, 2, 4, 1);
    for (auto& v : in.vs) v.source_ok = true;
    dynamic dyn(in.f, in.vs, opts(mode::approx), 9);
    const auto first = dyn.query();
    dyn.set_demand(4, dyn.vertices()[4].demand);
    CHECK(dyn.query().raw == first.raw);
    for (std::size_t v = 1; v < 9; ++v) {
        const auto p = in.f.parent(v);
        const double c = in.f.parent_cap(v);
        dyn.remove(p, v);
        dyn.insert(p, v, c);
    }
    CHECK(dyn.forest() == in.f);
    CHECK(dyn.query().raw == first.raw);
    CHECK(dyn.query().sources == first.sources);
    CHECK_THROWS_AS(dyn.insert(0, 1, 1), error);
    CHECK_THROWS_AS(dyn.set_capacity(0, 0, 1), error);
}
