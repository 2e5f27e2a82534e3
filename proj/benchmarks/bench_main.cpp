#include <benchmark/benchmark.h>

#include <vector>

#include "qccp/classical.hpp"
#include "qccp/game.hpp"
#include "qccp/linalg.hpp"
#include "qccp/optimize.hpp"
#include "qccp/rng.hpp"
#include "qccp/strategies.hpp"

using namespace qccp;

namespace {

Matrix random_hermitian(int dim, Rng& rng) {
    Matrix h(dim, dim);
    for (auto& e : h.a) e = rng.cnormal();
    return hermitize(h);
}

void BM_HermitianEig(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    Rng rng(1);
    const Matrix h = random_hermitian(dim, rng);
    for (auto _ : state) benchmark::DoNotOptimize(hermitian_eig(h));
}
BENCHMARK(BM_HermitianEig)->Arg(8)->Arg(32)->Arg(100);

void BM_MatrixProduct(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    Rng rng(2);
    const Matrix a = random_hermitian(dim, rng);
    const Matrix b = random_hermitian(dim, rng);
    for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_MatrixProduct)->Arg(8)->Arg(32)->Arg(100);

void BM_PovmUpdate(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    Rng rng(3);
    std::vector<Matrix> b;
    for (int g = 0; g < dim; ++g) b.push_back(random_hermitian(dim, rng));
    for (auto _ : state) benchmark::DoNotOptimize(povm_update(b));
}
BENCHMARK(BM_PovmUpdate)->Arg(4)->Arg(8);

void BM_SeesawRestart(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const GameSpec game = build_game(d);
    SeesawConfig config;
    config.restarts = 1;
    config.max_iters = 30;
    config.patience = 0;
    config.classical_warm_start = false;
    for (auto _ : state) benchmark::DoNotOptimize(seesaw_qs(game, config));
}
BENCHMARK(BM_SeesawRestart)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_ExactClassical(benchmark::State& state) {
    const GameSpec game = build_game(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(exact_classical_bound(game, 1));
}
BENCHMARK(BM_ExactClassical)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_EvaluateBellBehavior(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const GameSpec game = build_game(d);
    Rng rng(4);
    Behavior beh;
    beh.d = d;
    beh.p.assign(static_cast<std::size_t>(d) * d * 4, 0.0);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            double norm = 0.0;
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) {
                    beh.at(a, b, x, y) = rng.uniform() + 1e-6;
                    norm += beh.at(a, b, x, y);
                }
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) beh.at(a, b, x, y) /= norm;
        }
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_bell(game, beh));
}
BENCHMARK(BM_EvaluateBellBehavior)->Arg(4)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
