#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "pcdp/error.hpp"

namespace pcdp {

inline constexpr double inf = std::numeric_limits<double>::infinity();

enum class mono { decreasing, increasing, general };

const char* mono_name(mono m);

// (x, y): the piece ending at x carries value y
struct piece {
    double x;
    double y;
    bool operator==(const piece&) const = default;
};

// Piecewise constant function on [lo, hi]. Piece i covers [x_{i-1}, x_i),
// the last piece also owns hi. Always pruned: adjacent values differ.
class pcf {
public:
    static pcf from_pieces(std::vector<piece> ps, double lo, double hi, mono tag);
    static pcf constant(double lo, double hi, double y, mono tag = mono::decreasing);
    // `below` on [lo, at), `above` on [at, hi]
    static pcf step(double lo, double hi, double at, double below, double above, mono tag);

    double lo() const { return xs_.front(); }
    double hi() const { return xs_.back(); }
    mono tag() const { return tag_; }
    std::size_t size() const { return ys_.size(); }

    double start(std::size_t i) const { return xs_[i]; }
    double end(std::size_t i) const { return xs_[i + 1]; }
    double value(std::size_t i) const { return ys_[i]; }
    double first_value() const { return ys_.front(); }
    double last_value() const { return ys_.back(); }

    std::size_t piece_at(double x) const;
    double operator()(double x) const;
    // eval with x clamped into the domain
    double at_clamped(double x) const;

    std::vector<piece> pieces() const;
    const std::vector<double>& breakpoints() const { return xs_; }
    const std::vector<double>& values() const { return ys_; }

    bool is_constant() const { return ys_.size() == 1; }
    bool same_domain(const pcf& o) const { return lo() == o.lo() && hi() == o.hi(); }

    // bitwise equality of representation, tag included
    bool operator==(const pcf& o) const;
    bool same_function(const pcf& o) const { return xs_ == o.xs_ && ys_ == o.ys_; }

    std::string str() const;

    // trusted constructor for internal use: xs strictly increasing, |xs| = |ys|+1;
    // prunes, normalises -0, and degrades the tag to general if it does not hold
    static pcf build(std::vector<double> xs, std::vector<double> ys, mono tag);

private:
    pcf() = default;
    std::vector<double> xs_;
    std::vector<double> ys_;
    mono tag_ = mono::general;
};

bool satisfies(const std::vector<double>& ys, mono tag);

// canonical (1+delta)^e, exponentiation by squaring
double pow_int(double base, std::int64_t e);
// smallest e with (1+delta)^e >= y, for y > 0
std::int64_t ceil_exponent(double y, double delta);
double round_up_value(double y, double delta);
double round_down_value(double y, double delta);
// piece bound for round_up_pow of a monotone function with values in {0} ∪ [1,W] ∪ {inf}
std::size_t round_piece_bound(double delta, double W);

pcf min2(const pcf& g, const pcf& h);
pcf multimin(const std::vector<pcf>& fs);
pcf shift(const pcf& g, double c);
pcf shift(const pcf& g, double c, double fill);
pcf add(const pcf& g, const pcf& h);
pcf add_const(const pcf& g, double c);
pcf round_up_pow(const pcf& g, double delta);
pcf round_down_mult(const pcf& g, double delta);
pcf negate(const pcf& g);

// f on [lo, hi]: g(x) inside g's domain, `below` left of it, g(g.hi) right of it
pcf reframe(const pcf& g, double lo, double hi, double below);

} // namespace pcdp
