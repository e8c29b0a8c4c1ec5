#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "pcdp/pcf.hpp"

// l-infinity necklace alignment. Beads are sorted reals in [0,1); the
// objective of a shift s is half the spread of z_i = x_i - y_{(i+s) mod n},
// minimised over s.
namespace pcdp::necklace {

struct alignment {
    double value = 0; // raw + delta, so it never undershoots the exact objective
    double raw = 0;   // objective of the rounded vectors
    int s = 0;
    double c = 0; // offset in [0,1) that attains raw for shift s
};

// Beads rounded down to multiples of delta, stored as runs of equal values.
// This is the list representation: run k covers the indices from the sum of
// earlier counts on.
struct run {
    long q; // value q * delta
    std::size_t count;
};
using runs = std::vector<run>;

long round_down(double a, double delta);
runs round_beads(const std::vector<double>& beads, double delta);
std::size_t length(const runs& r);
// the runs as a step function on [0, n) with integer breakpoints
pcf as_pcf(const runs& r, double delta);

// x' (x then +inf), x'' (x then -inf) and y' (y reversed, twice), all on [0, 2n)
pcf pad_plus(const runs& x, double delta);
pcf pad_minus(const runs& x, double delta);
pcf reverse_double(const runs& y, double delta);

// min over s of the objective of the rounded vectors
alignment align(const runs& x, const runs& y, double delta);

alignment solve(const std::vector<double>& x, const std::vector<double>& y, double eps);

class dynamic {
public:
    explicit dynamic(double eps);
    dynamic(const std::vector<double>& x, const std::vector<double>& y, double eps);

    // alpha becomes x_i and beta becomes y_i; later beads move up one place
    void insert(std::size_t i, double alpha, double beta);
    void erase(std::size_t i);
    alignment query() const;

    std::size_t size() const { return length(x_); }
    double delta() const { return delta_; }
    const runs& xs() const { return x_; }
    const runs& ys() const { return y_; }
    std::size_t max_pieces() const { return std::max(x_.size(), y_.size()); }

private:
    double delta_;
    runs x_;
    runs y_;
};

} // namespace pcdp::necklace
