#include <random>

#include "doctest.h"
#include "pcdp/noi.hpp"
#include "pcdp/error.hpp"

using namespace pcdp;

TEST_CASE("closest larger interval") {
    noi_set s;
    CHECK_FALSE(s.closest_larger(0).has_value());
    s.insert(1, 2);
    s.insert(5, 7);
    CHECK(*s.closest_larger(3) == interval{5, 7});
    CHECK(*s.closest_larger(1.5) == interval{1, 2});
    CHECK(*s.closest_larger(2) == interval{1, 2});
    CHECK_FALSE(s.closest_larger(7.5).has_value());
}

TEST_CASE("insert merges overlaps") {
    noi_set s;
    s.insert(1, 2);
    s.insert(3, 4);
    CHECK(s.size() == 2);
    noi_set t;
    t.insert(1, 3);
    t.insert(2, 5);
    CHECK(t.intervals() == std::vector<interval>{{1, 5}});
    t.insert(0, 10);
    CHECK(t.intervals() == std::vector<interval>{{0, 10}});
    CHECK_THROWS_AS(t.insert(3, 3), error);
    CHECK_THROWS_AS(t.insert(4, 3), error);
}

TEST_CASE("random inserts against a naive union") {
    std::mt19937 rng(10000);
    std::uniform_real_distribution<double> pos(0, 1000), len(0.01, 3);
    noi_set s;
    std::vector<interval> naive;
    for (int k = 0; k < 10000; ++k) {
        double a = pos(rng), b = a + len(rng);
        s.insert(a, b);
        naive.push_back({a, b});
    }
    for (int k = 0; k < 1000; ++k) {
        double x = pos(rng);
        bool in = false;
        for (const auto& iv : naive) in = in || (iv.a <= x && x <= iv.b);
        CHECK(s.contains(x) == in);
    }
    auto stored = s.intervals();
    for (std::size_t i = 1; i < stored.size(); ++i) CHECK(stored[i - 1].b < stored[i].a);
    for (int k = 0; k < 10000; ++k) {
        double z = pos(rng);
        const interval* best = nullptr;
        for (const auto& iv : stored)
            if (iv.b >= z && (!best || iv.b < best->b)) best = &iv;
        auto got = s.closest_larger(z);
        REQUIRE(got.has_value() == (best != nullptr));
        if (best) CHECK(*got == *best);
    }
}
