#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "helpers.hpp"
#include "pcdp/convolution.hpp"
#include "pcdp/knapsack.hpp"
#include "pcdp/partition.hpp"

using namespace pcdp;

namespace {

// two subtrees of `half` vertices hanging below a root; returns the child rows
struct combine_input {
    partition::space sp;
    partition::row l, r;
};

combine_input make_combine(int half) {
    std::mt19937 rng(9);
    const int n = 2 * half + 1;
    dp::rooted_forest f(static_cast<std::size_t>(n));
    std::uniform_int_distribution<int> cap(1, 9);
    for (int side = 0; side < 2; ++side) {
        const int base = 1 + side * half;
        f.link(0, std::size_t(base), cap(rng));
        for (int v = 1; v < half; ++v) {
            int par = base + std::uniform_int_distribution<int>(0, v - 1)(rng);
            f.link(std::size_t(par), std::size_t(base + v), cap(rng));
        }
    }
    std::vector<int> w(static_cast<std::size_t>(n), 1);
    partition::space sp(1.0 / 3, 3, n);
    auto rows = partition::approx_rows(f, w, sp, 0.05);
    return {sp, rows[1], rows[std::size_t(1 + half)]};
}

void BM_partition_combine(benchmark::State& st) {
    static const auto in = make_combine(8);
    const int threads = static_cast<int>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(partition::combine(in.l, in.r, 1, 3.0, in.sp, threads));
}
BENCHMARK(BM_partition_combine)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_partition_combine_reference(benchmark::State& st) {
    static const auto in = make_combine(8);
    for (auto _ : st) benchmark::DoNotOptimize(partition::combine_reference(in.l, in.r, 1, 3.0, in.sp));
}
BENCHMARK(BM_partition_combine_reference)->Unit(benchmark::kMillisecond);

void BM_convolve_monotone(benchmark::State& st) {
    std::mt19937 rng(3);
    const int p = static_cast<int>(st.range(0));
    auto f1 = testing_util::random_monotone(rng, 0, 10 * p, p, mono::decreasing, false);
    auto f2 = testing_util::random_monotone(rng, 0, 10 * p, p, mono::decreasing, false);
    for (auto _ : st) benchmark::DoNotOptimize(convolve_monotone(f1, f2));
    st.SetComplexityN(p);
}
BENCHMARK(BM_convolve_monotone)->RangeMultiplier(2)->Range(16, 512)->Complexity();

void BM_knapsack_update(benchmark::State& st) {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> w(1, 1000), p(1, 100);
    const std::size_t n = std::size_t(1) << st.range(0);
    std::vector<kn_item> items;
    for (std::size_t i = 0; i + 1 < n; ++i) items.push_back({double(p(rng)), double(w(rng))});
    knapsack k({0.5, 250.0 * double(n), 200.0 * double(n)}, items);
    for (auto _ : st) {
        auto id = k.insert(p(rng), w(rng));
        k.erase(id);
    }
}
BENCHMARK(BM_knapsack_update)->DenseRange(8, 14, 2)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
