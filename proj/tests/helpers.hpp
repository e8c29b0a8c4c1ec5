#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "pcdp/oracles.hpp"
#include "pcdp/pcf.hpp"

namespace testing_util {

using pcdp::mono;
using pcdp::pcf;

// random monotone pcf with integer breakpoints on [lo, hi]
template <class Rng>
pcf random_monotone(Rng& rng, int lo, int hi, int max_pieces, mono tag, bool allow_inf = true, double vmax = 1e6) {
    std::uniform_int_distribution<int> np(1, max_pieces);
    int p = std::min(np(rng), hi - lo);
    std::vector<int> cuts;
    for (int x = lo + 1; x < hi; ++x) cuts.push_back(x);
    std::shuffle(cuts.begin(), cuts.end(), rng);
    cuts.resize(p - 1);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    std::uniform_real_distribution<double> val(1.0, vmax);
    std::uniform_int_distribution<int> kind(0, 9);
    std::vector<double> ys;
    for (int i = 0; i < p; ++i) {
        int k = kind(rng);
        if (k == 0) ys.push_back(0.0);
        else if (k == 1 && allow_inf) ys.push_back(pcdp::inf);
        else ys.push_back(std::floor(val(rng)));
    }
    if (tag == mono::decreasing) std::sort(ys.rbegin(), ys.rend());
    if (tag == mono::increasing) std::sort(ys.begin(), ys.end());
    std::vector<pcdp::piece> ps;
    for (int i = 0; i < p; ++i) ps.push_back({double(cuts[i]), ys[i]});
    return pcf::from_pieces(ps, lo, hi, tag);
}

inline pcdp::oracles::step_fn to_step(const pcf& f) {
    pcdp::oracles::step_fn s{f.lo(), f.hi(), {}, {}};
    for (std::size_t i = 0; i < f.size(); ++i) {
        s.starts.push_back(f.start(i));
        s.ys.push_back(f.value(i));
    }
    return s;
}

} // namespace testing_util
