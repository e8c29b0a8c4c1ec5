#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "pcdp/convolution.hpp"
#include "pcdp/error.hpp"
#include "pcdp/necklace.hpp"
#include "pcdp/oracles.hpp"

using namespace pcdp;
using namespace pcdp::necklace;

namespace {

std::vector<double> beads(std::mt19937& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<double> b(n);
    for (double& v : b) v = u(rng);
    std::sort(b.begin(), b.end());
    return b;
}

// beads on a grid of 1/100 so rounding with delta = 0.01 is exact
std::vector<double> grid_beads(std::mt19937& rng, std::size_t n) {
    std::uniform_int_distribution<int> u(0, 99);
    std::vector<double> b(n);
    for (double& v : b) v = u(rng) / 100.0;
    std::sort(b.begin(), b.end());
    return b;
}

double circ(double a, double b) {
    double d = std::fabs(a - b);
    d -= std::floor(d);
    return std::min(d, 1 - d);
}

errc code_of(auto&& f) {
    try {
        f();
    } catch (const error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return errc::parse_error;
}

bool same(const runs& a, const runs& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].q != b[i].q || a[i].count != b[i].count) return false;
    return true;
}

} // namespace

TEST_CASE("indexed convolution is the discrete one") {
    std::mt19937 rng(1);
    std::uniform_int_distribution<int> len(1, 4), val(-5, 5), coin(0, 7);
    for (int it = 0; it < 300; ++it) {
        auto make = [&](std::vector<double>& raw) {
            std::vector<double> xs{0}, ys;
            int runs_n = len(rng);
            for (int r = 0; r < runs_n; ++r) {
                int c = len(rng);
                double y = coin(rng) == 0 ? inf : val(rng);
                for (int k = 0; k < c; ++k) raw.push_back(y);
                xs.push_back(xs.back() + c);
                ys.push_back(y);
            }
            return pcf::build(xs, ys, mono::general);
        };
        std::vector<double> r1, r2;
        pcf f = make(r1), g = make(r2);
        pcf c = convolve_indexed(f, g);
        REQUIRE(c.lo() == 0);
        REQUIRE(c.hi() == double(r1.size() + r2.size() - 1));
        for (std::size_t k = 0; k + 1 < r1.size() + r2.size(); ++k) {
            double best = inf;
            for (std::size_t i = 0; i < r1.size(); ++i)
                if (k >= i && k - i < r2.size()) best = std::min(best, r1[i] + r2[k - i]);
            CHECK(c(double(k)) == best);
        }
    }
    CHECK(code_of([] { convolve_indexed(pcf::constant(0, 1.5, 1), pcf::constant(0, 1, 1)); }) ==
          errc::precondition_violated);
}

TEST_CASE("index window holds min and max of z(s)") {
    std::mt19937 rng(2);
    const double d = 0.01;
    for (int it = 0; it < 200; ++it) {
        const std::size_t n = 1 + it % 6;
        auto x = grid_beads(rng, n), y = grid_beads(rng, n);
        auto rx = round_beads(x, d), ry = round_beads(y, d);
        pcf yp = reverse_double(ry, d);
        pcf a = minminus_indexed(pad_plus(rx, d), yp);
        pcf b = maxminus_indexed(pad_minus(rx, d), yp);
        for (std::size_t s = 0; s < n; ++s) {
            double lo = inf, hi = -inf;
            for (std::size_t i = 0; i < n; ++i) {
                double z = round_down(x[i], d) * d - round_down(y[(i + s) % n], d) * d;
                lo = std::min(lo, z);
                hi = std::max(hi, z);
            }
            const double k = double(2 * n - s - 1);
            CHECK(a(k) == doctest::Approx(lo).epsilon(1e-12));
            CHECK(b(k) == doctest::Approx(hi).epsilon(1e-12));
        }
    }
}

TEST_CASE("small examples") {
    CHECK(solve({}, {}, 0.1).value == 0);
    CHECK(dynamic(0.1).query().value == 0);

    std::vector<double> x{0.1, 0.3, 0.35, 0.8};
    auto r = solve(x, x, 0.01);
    CHECK(r.raw == 0);
    CHECK(r.value <= 0.01);
    CHECK(r.s == 0);

    // one bead can always be moved onto the other
    auto one = solve({0.2}, {0.7}, 0.01);
    CHECK(oracles::necklace({0.2}, {0.7}).value == 0);
    CHECK(one.value <= 0.01);
    CHECK(circ(0.2 + one.c, 0.7) <= one.value);
}

TEST_CASE("static solve against the oracle") {
    std::mt19937 rng(3);
    for (double eps : {0.05, 0.01}) {
        for (int it = 0; it < 200; ++it) {
            const std::size_t n = 1 + it % 10;
            auto x = beads(rng, n), y = beads(rng, n);
            auto o = oracles::necklace(x, y);
            auto r = solve(x, y, eps);
            CHECK(r.value >= o.value - 1e-12);
            CHECK(r.value <= o.value + eps + 1e-12);
            CHECK(std::fabs(r.raw - o.value) <= eps / 2 + 1e-12);
            // the reported shift is good on the true beads as well
            CHECK(oracles::necklace_shift(x, y, r.s) <= r.value + 1e-12);
            // and c attains raw on the rounded beads
            REQUIRE(r.c >= 0);
            REQUIRE(r.c < 1);
            const double d = eps / 2;
            for (std::size_t i = 0; i < n; ++i) {
                double xi = round_down(x[i], d) * d, yi = round_down(y[(i + r.s) % n], d) * d;
                CHECK(circ(xi + r.c, yi) <= r.raw + 1e-9);
            }
        }
    }
}

TEST_CASE("stored pieces stay within the budget") {
    std::mt19937 rng(4);
    for (double eps : {0.2, 0.05, 0.01}) {
        const auto budget = static_cast<std::size_t>(std::ceil(2 / eps)) + 2;
        auto x = beads(rng, 5000), y = beads(rng, 5000);
        dynamic dy(x, y, eps);
        CHECK(dy.max_pieces() <= budget);
        CHECK(as_pcf(dy.xs(), dy.delta()).size() <= budget);
        std::uniform_int_distribution<std::size_t> pos(0, 4999);
        for (int op = 0; op < 200; ++op) {
            dy.erase(pos(rng) % dy.size());
            CHECK(dy.max_pieces() <= budget);
        }
        auto q = dy.query();
        CHECK(q.value >= 0);
    }
}

TEST_CASE("dynamic traces follow the oracle") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0, 1);
    for (double eps : {0.05, 0.01}) {
        for (int trace = 0; trace < 10; ++trace) {
            std::vector<double> x, y;
            dynamic dy(eps);
            for (int op = 0; op < 100; ++op) {
                const bool grow = x.empty() || (x.size() < 10 && u(rng) < 0.6);
                if (grow) {
                    std::size_t i = std::uniform_int_distribution<std::size_t>(0, x.size())(rng);
                    auto between = [&](const std::vector<double>& v) {
                        double lo = i == 0 ? 0 : v[i - 1], hi = i == v.size() ? 1 : v[i];
                        double a = lo + (hi - lo) * u(rng);
                        return std::min(a, std::nextafter(1.0, 0.0));
                    };
                    double a = between(x), b = between(y);
                    dy.insert(i, a, b);
                    x.insert(x.begin() + static_cast<std::ptrdiff_t>(i), a);
                    y.insert(y.begin() + static_cast<std::ptrdiff_t>(i), b);
                } else {
                    std::size_t i = std::uniform_int_distribution<std::size_t>(0, x.size() - 1)(rng);
                    dy.erase(i);
                    x.erase(x.begin() + static_cast<std::ptrdiff_t>(i));
                    y.erase(y.begin() + static_cast<std::ptrdiff_t>(i));
                }
                REQUIRE(same(dy.xs(), round_beads(x, dy.delta())));
                REQUIRE(same(dy.ys(), round_beads(y, dy.delta())));
                auto q = dy.query();
                auto o = oracles::necklace(x, y);
                CHECK(q.value >= o.value - 1e-12);
                CHECK(q.value <= o.value + eps + 1e-12);
                auto st = solve(x, y, eps);
                CHECK(q.raw == st.raw);
                CHECK(q.s == st.s);
                auto again = dy.query();
                CHECK((again.value == q.value && again.s == q.s && again.c == q.c));
            }
        }
    }
}

TEST_CASE("insert then erase restores the state") {
    std::mt19937 rng(6);
    for (int it = 0; it < 100; ++it) {
        auto x = beads(rng, 8), y = beads(rng, 8);
        dynamic dy(x, y, 0.05);
        runs rx = dy.xs(), ry = dy.ys();
        auto before = dy.query();
        std::size_t i = std::uniform_int_distribution<std::size_t>(0, 8)(rng);
        double a = i == 0 ? x[0] * 0.5 : x[i - 1];
        double b = i == 0 ? y[0] * 0.5 : y[i - 1];
        dy.insert(i, a, b);
        dy.erase(i);
        CHECK(same(dy.xs(), rx));
        CHECK(same(dy.ys(), ry));
        auto after = dy.query();
        CHECK(after.value == before.value);
        CHECK(after.s == before.s);
    }
}

TEST_CASE("errors") {
    CHECK(code_of([] { solve({0.5, 0.2}, {0.1, 0.2}, 0.1); }) == errc::unsorted_beads);
    CHECK(code_of([] { solve({0.1}, {0.1, 0.2}, 0.1); }) == errc::length_mismatch);
    CHECK(code_of([] { solve({1.0}, {0.1}, 0.1); }) == errc::out_of_codomain);
    CHECK(code_of([] { solve({0.1}, {0.1}, 0); }) == errc::bad_epsilon);
    dynamic dy({0.1, 0.5}, {0.2, 0.6}, 0.02);
    CHECK(code_of([&] { dy.insert(1, 0.7, 0.3); }) == errc::would_unsort);
    CHECK(code_of([&] { dy.insert(0, 0.05, 0.9); }) == errc::would_unsort);
    CHECK(code_of([&] { dy.insert(3, 0.9, 0.9); }) == errc::index_out_of_range);
    CHECK(code_of([&] { dy.erase(2); }) == errc::index_out_of_range);
    CHECK(dy.size() == 2);
    dy.insert(2, 0.9, 0.9);
    dy.insert(1, 0.1, 0.2); // equal to the left neighbour
    CHECK(dy.size() == 4);
}
