#pragma once

#include <cstdint>
#include <vector>

#include "pcdp/pcf.hpp"

namespace pcdp {

// Which operand pieces produced each (pre-pruning) segment of a convolution.
struct conv_witness {
    struct segment {
        double start;
        std::uint32_t i; // piece of f1
        std::uint32_t j; // piece of f2
    };
    std::vector<segment> segments; // ascending start
    bool swapped = false;          // operands were exchanged internally
    bool negated = false;          // produced by maxplus
};

struct conv_result {
    pcf f;
    conv_witness w;
};

// (min,+)-convolution, at least one operand decreasing. With both decreasing
// the result lives on [lo1+lo2, hi1+hi2]; otherwise on
// [lo1+lo2, lo1+lo2+min(hi1-lo1, hi2-lo2)].
conv_result convolve_monotone(const pcf& f1, const pcf& f2);

// some xbar with f(x) = f1(xbar) + f2(x - xbar), checked by re-evaluation
double witness_argmin(const pcf& f, const conv_witness& w, const pcf& f1, const pcf& f2, double x);

// (max,+)-convolution of two increasing functions
conv_result maxplus_convolve(const pcf& f1, const pcf& f2);
double maxplus_argmin(const pcf& f, const conv_witness& w, const pcf& f1, const pcf& f2, double x);

// (min,+)-convolution without monotonicity, result on [lo1+lo2, hi1+hi2]
pcf convolve_general(const pcf& f1, const pcf& f2);

// min / max over xbar of f(xbar) - g(x - xbar)
pcf minminus_convolve(const pcf& f, const pcf& g);
pcf maxminus_convolve(const pcf& f, const pcf& g);

// The same on vectors: piece [a,b) with integer ends holds entries a..b-1.
// The result lives on [lo1+lo2, hi1+hi2-1) and at integer k equals the
// discrete convolution over i+j = k. (The real-valued versions above mix
// sums k-1 and k on unit pieces.)
pcf convolve_indexed(const pcf& f1, const pcf& f2);
pcf minminus_indexed(const pcf& f, const pcf& g);
pcf maxminus_indexed(const pcf& f, const pcf& g);

} // namespace pcdp
