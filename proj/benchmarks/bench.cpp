#include <benchmark/benchmark.h>

#include "tgx/block.hpp"
#include "tgx/extrapolation.hpp"
#include "tgx/problems.hpp"

using namespace tgx;

static void bm_einstein_product(benchmark::State& state) {
    const Index n = state.range(0);
    Tensor a = random_tensor(Shape{n, n, n, n}, 1);
    Tensor b = random_tensor(Shape{n, n, n, n}, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(einstein_product(a, b, 2));
    }
}
BENCHMARK(bm_einstein_product)->Arg(4)->Arg(8)->Arg(16);

static void bm_global_qr(benchmark::State& state) {
    const int width = static_cast<int>(state.range(0));
    std::vector<Tensor> slices;
    for (int j = 0; j < width; ++j) {
        slices.push_back(random_tensor(Shape{12, 12, 12}, static_cast<std::uint64_t>(j) + 3));
    }
    BlockTensor block(std::move(slices));
    for (auto _ : state) {
        benchmark::DoNotOptimize(global_qr(block));
    }
}
BENCHMARK(bm_global_qr)->Arg(2)->Arg(4)->Arg(8);

static void bm_tg_rre(benchmark::State& state) {
    const int width = static_cast<int>(state.range(0));
    const Shape modes{8, 8};
    LinearProcess p{make_contractive_op(modes, 0.9, 5), random_tensor(modes, 6)};
    std::vector<Tensor> terms{random_tensor(modes, 7)};
    for (int i = 0; i < width + 1; ++i) terms.push_back(linear_step(p, terms.back()));
    Window w(0, width, terms);
    for (auto _ : state) {
        benchmark::DoNotOptimize(tg_rre(w));
    }
}
BENCHMARK(bm_tg_rre)->Arg(2)->Arg(4)->Arg(8);

BENCHMARK_MAIN();
