#include <cmath>
#include <map>
#include <random>

#include "doctest.h"
#include "pcdp/knapsack.hpp"
#include "pcdp/oracles.hpp"

using namespace pcdp;

namespace {

std::vector<oracles::item> live_items(const knapsack& k, std::vector<std::size_t>* ids = nullptr) {
    std::vector<oracles::item> out;
    for (auto id : k.ids()) {
        out.push_back({k.item(id).p, k.item(id).w});
        if (ids) ids->push_back(id);
    }
    return out;
}

void check_against_oracle(const knapsack& k, double eps) {
    auto items = live_items(k);
    double opt = oracles::knapsack(items, k.budget());
    double v = k.value();
    CHECK(v >= opt);
    CHECK(v <= (1 + eps) * opt * (1 + 1e-12));
    double p = 0, w = 0;
    for (auto id : k.solution()) {
        REQUIRE(k.live(id));
        p += k.item(id).p;
        w += k.item(id).w;
    }
    CHECK(w <= k.budget());
    CHECK(p * (1 + eps) * (1 + 1e-12) >= opt);
}

std::vector<kn_item> random_items(std::mt19937& rng, int n) {
    std::uniform_int_distribution<int> w(1, 30), p(1, 100);
    std::vector<kn_item> out;
    for (int i = 0; i < n; ++i) out.push_back({double(p(rng)), double(w(rng))});
    return out;
}

// X built from scratch: the k lightest of each price class, ties by id
std::vector<std::size_t> scratch_x(const fast_knapsack& f, const std::vector<std::size_t>& live) {
    std::map<int, std::vector<std::pair<double, std::size_t>>> cls;
    for (auto id : live) cls[f.price_class(f.item(id).p)].push_back({f.item(id).w, id});
    std::vector<std::size_t> out;
    for (auto& [c, v] : cls) {
        std::sort(v.begin(), v.end());
        for (std::size_t i = 0; i < v.size() && i < f.per_class(); ++i) out.push_back(v[i].second);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST_CASE("empty instance") {
    knapsack k({0.1, 10});
    CHECK(k.value() == 0);
    CHECK(k.solution().empty());
}

TEST_CASE("three items") {
    knapsack k({0.01, 3}, {{2, 1}, {3, 2}, {4, 3}});
    CHECK(oracles::knapsack({{2, 1}, {3, 2}, {4, 3}}, 3) == 5);
    CHECK(k.value() >= 5);
    CHECK(k.value() <= 5.05);
    CHECK(k.solution() == std::vector<std::size_t>{0, 1});
    double prev = 0;
    for (double x = 0; x <= 3; x += 0.25) {
        CHECK(k.value_at(x) >= prev);
        prev = k.value_at(x);
    }
}

TEST_CASE("bad epsilon and unknown items") {
    CHECK_THROWS_AS(knapsack({0, 3}), error);
    knapsack k({0.1, 3}, {{2, 1}});
    CHECK_THROWS_AS(k.erase(7), error);
}

TEST_CASE("root sandwich at many budgets") {
    std::mt19937 rng(12);
    for (int it = 0; it < 10; ++it) {
        auto items = random_items(rng, 12);
        std::vector<oracles::item> oi;
        for (auto& x : items) oi.push_back({x.p, x.w});
        knapsack k({0.1, 200}, items);
        std::uniform_real_distribution<double> b(0, 200);
        for (int q = 0; q < 50; ++q) {
            double x = std::floor(b(rng));
            double opt = oracles::knapsack(oi, x);
            CHECK(k.value_at(x) >= opt);
            CHECK(k.value_at(x) <= 1.1 * opt * (1 + 1e-12));
        }
        CHECK(k.max_pieces() <= k.piece_bound());
    }
}

TEST_CASE("extracted solutions on random instances") {
    std::mt19937 rng(100);
    for (int it = 0; it < 100; ++it) {
        std::uniform_int_distribution<int> nn(0, 14), bb(0, 150);
        auto items = random_items(rng, nn(rng));
        knapsack k({it % 2 ? 0.1 : 0.25, double(bb(rng))}, items);
        check_against_oracle(k, k.eps());
    }
}

TEST_CASE("insert then delete restores the root bit for bit") {
    std::mt19937 rng(3);
    auto items = random_items(rng, 7);
    knapsack k({0.1, 60, 1000}, items);
    auto before = k.root();
    auto id = k.insert(17, 5);
    k.erase(id);
    CHECK(k.root() == before);
}

TEST_CASE("dynamic trace stays within the bound") {
    std::mt19937 rng(200);
    knapsack_options opt{0.1, 80, 100.0 * 20};
    knapsack k(opt);
    std::uniform_int_distribution<int> w(1, 30), p(1, 100), coin(0, 2);
    for (int op = 0; op < 200; ++op) {
        auto ids = k.ids();
        if (!ids.empty() && (ids.size() >= 16 || coin(rng) == 0)) {
            std::uniform_int_distribution<std::size_t> pick(0, ids.size() - 1);
            k.erase(ids[pick(rng)]);
        } else {
            k.insert(p(rng), w(rng));
        }
        if (k.last_recompute() > 0) {
            std::size_t lg = 0;
            while ((std::size_t(1) << lg) < k.slots()) ++lg;
            CHECK(k.last_recompute() <= lg + 1);
        }
        check_against_oracle(k, 0.1);
    }
    CHECK(k.rebuilds() > 1);
}

TEST_CASE("density treap") {
    density_treap t;
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> w(1, 30), p(1, 100);
    std::vector<density_treap::key> keys;
    for (std::size_t i = 0; i < 200; ++i) {
        keys.push_back({double(p(rng)), double(w(rng)), i});
        t.insert(keys.back());
    }
    CHECK(t.aggregates_ok());
    for (std::size_t i = 0; i < 200; i += 3) CHECK(t.erase(keys[i]));
    CHECK_FALSE(t.erase(keys[0]));
    CHECK(t.aggregates_ok());
    std::vector<density_treap::key> live;
    for (std::size_t i = 0; i < 200; ++i)
        if (i % 3) live.push_back(keys[i]);
    std::sort(live.begin(), live.end());
    for (double b : {0.0, 10.0, 100.0, 500.0, 5000.0}) {
        auto f = t.fill(b);
        double pw = 0, pp = 0;
        std::size_t c = 0;
        while (c < live.size() && pw + live[c].w <= b) {
            pw += live[c].w;
            pp += live[c].p;
            ++c;
        }
        CHECK(f.count == c);
        CHECK(f.p == doctest::Approx(pp));
        if (c < live.size()) CHECK(f.cut->id == live[c].id);
    }
}

TEST_CASE("fast variant: X against a from-scratch construction") {
    std::mt19937 rng(300);
    fast_knapsack f({1.0 / 3, 60, 1e6});
    std::vector<std::size_t> live;
    std::uniform_int_distribution<int> w(1, 30), p(1, 100), coin(0, 2);
    for (int op = 0; op < 300; ++op) {
        if (!live.empty() && (live.size() >= 20 || coin(rng) == 0)) {
            std::uniform_int_distribution<std::size_t> pick(0, live.size() - 1);
            std::size_t k = pick(rng);
            auto x_before = f.x_set();
            bool was_y = !std::binary_search(x_before.begin(), x_before.end(), live[k]);
            f.erase(live[k]);
            if (was_y) CHECK(f.x_set() == x_before);
            live.erase(live.begin() + static_cast<std::ptrdiff_t>(k));
        } else {
            live.push_back(f.insert(p(rng), w(rng)));
        }
        std::sort(live.begin(), live.end());
        REQUIRE(f.x_set() == scratch_x(f, live));
        CHECK(f.u_consistent());
        CHECK(f.x_set().size() <= f.per_class() * f.classes());
    }
}

TEST_CASE("fast variant: light item displaces the heaviest of its class") {
    fast_knapsack f({0.5, 100});
    auto a = f.insert(10, 5);
    auto b = f.insert(10, 6);
    CHECK(f.x_set() == std::vector<std::size_t>{a, b});
    auto c = f.insert(10, 1);
    CHECK(f.x_set() == std::vector<std::size_t>{a, c});
    CHECK(f.y_set() == std::vector<std::size_t>{b});
    CHECK(f.u_consistent());
}

TEST_CASE("fast variant: answers within the layered bound") {
    std::mt19937 rng(400);
    double worst = 1;
    for (int it = 0; it < 200; ++it) {
        std::uniform_int_distribution<int> nn(1, 18), bb(0, 150);
        double eps = it % 2 ? 1.0 / 3 : 0.25;
        std::uniform_int_distribution<int> w(1, 30), p(1, 100);
        std::vector<kn_item> items;
        std::vector<oracles::item> oi;
        for (int i = nn(rng); i > 0; --i) {
            items.push_back({double(p(rng)), double(w(rng))});
            oi.push_back({items.back().p, items.back().w});
        }
        double B = bb(rng);
        fast_knapsack f({eps, B}, items);
        double opt = oracles::knapsack(oi, B);
        double v = f.query_value();
        CHECK(v <= (1 + eps) * opt * (1 + 1e-12));
        CHECK(v * std::pow(1 + eps, 3) >= opt);
        if (opt > 0) worst = std::max(worst, opt / v);
        auto sol = f.query_solution();
        double sw = 0, sp = 0, yp = 0;
        const auto xs = f.x_set();
        for (auto id : sol) {
            sw += f.item(id).w;
            sp += f.item(id).p;
            CHECK(f.query_membership(id));
            if (!std::binary_search(xs.begin(), xs.end(), id)) yp += f.item(id).p;
        }
        CHECK(sw <= B);
        CHECK(yp == f.last_y_value());
        CHECK((sp - yp) * (1 + eps) * (1 + 1e-12) >= f.last_x_value());
        CHECK(f.query_solution() == sol);
        for (std::size_t id = 0; id < items.size(); ++id)
            CHECK(f.query_membership(id) == std::binary_search(sol.begin(), sol.end(), id));
    }
    MESSAGE("worst OPT/value ratio: " << worst);
}

TEST_CASE("fast variant: one class needing Y items") {
    // 1/eps + 2 equal-price items; OPT takes all of them
    const double eps = 0.25;
    std::vector<kn_item> items;
    std::vector<oracles::item> oi;
    for (int i = 0; i < 6; ++i) {
        items.push_back({10, double(1 + i)});
        oi.push_back({10, double(1 + i)});
    }
    for (int i = 0; i < 2; ++i) {
        items.push_back({3, 40});
        oi.push_back({3, 40});
    }
    fast_knapsack f({eps, 21}, items);
    double opt = oracles::knapsack(oi, 21);
    double v = f.query_value();
    CHECK(v * std::pow(1 + eps, 3) >= opt);
    CHECK(v <= (1 + eps) * opt);
}

TEST_CASE("fast variant: stale queries and deleted items") {
    fast_knapsack f({0.25, 10}, {{5, 2}, {7, 3}});
    f.query_value();
    f.erase(0);
    CHECK_THROWS_AS(f.query_solution(), error);
    f.query_value();
    CHECK_FALSE(f.query_membership(0));
    CHECK_THROWS_AS(f.erase(0), error);
}
