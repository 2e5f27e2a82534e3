#include <array>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "qccp/errors.hpp"
#include "qccp/game.hpp"
#include "qccp/linalg.hpp"
#include "qccp/optimize.hpp"
#include "qccp/rng.hpp"
#include "qccp/strategies.hpp"

using namespace qccp;

namespace {

std::vector<Matrix> random_projective(int d, Rng& rng) {
    const Matrix u = random_unitary_from(d, rng);
    std::vector<Matrix> povm;
    for (int g = 0; g < d; ++g) {
        Ket col(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) col[static_cast<std::size_t>(i)] = u(i, g);
        povm.push_back(projector(col));
    }
    return povm;
}

BellStrategy random_bell(int d, std::uint64_t seed) {
    Rng rng(seed);
    BellStrategy s;
    s.d = d;
    Ket psi(static_cast<std::size_t>(d) * d);
    for (auto& amp : psi) amp = rng.cnormal();
    s.psi = normalized(std::move(psi));
    for (int x = 0; x < 2; ++x) s.alice[x] = random_projective(d, rng);
    for (int y = 0; y < 2; ++y) s.bob[y] = random_projective(d, rng);
    return s;
}

}  // namespace

TEST_CASE("entangled weights average the guess scores over Alice values") {
    for (int d = 2; d <= 6; ++d) {
        const GameSpec game = build_game(d);
        const std::vector<double> w = bell_weights(game);
        REQUIRE(w.size() == static_cast<std::size_t>(d) * d * 4);
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b)
                for (int x = 0; x < 2; ++x)
                    for (int y = 0; y < 2; ++y) {
                        double direct = 0.0;
                        for (int x0 = 0; x0 < d; ++x0) {
                            const int g = ((x0 + a - b) % d + d) % d;
                            direct += game.s(x0, x, y, g);
                        }
                        direct /= 4.0 * d;
                        const std::size_t idx =
                            ((static_cast<std::size_t>(a) * d + b) * 2 + x) * 2 + y;
                        CHECK(w[idx] == doctest::Approx(direct).epsilon(1e-14));
                    }
    }
}

TEST_CASE("weights reproduce the behavior payoff as a linear functional") {
    Rng rng(31);
    for (int d : {2, 3, 5}) {
        const GameSpec game = build_game(d);
        const std::vector<double> w = bell_weights(game);
        for (int trial = 0; trial < 20; ++trial) {
            Behavior beh;
            beh.d = d;
            beh.p.assign(static_cast<std::size_t>(d) * d * 4, 0.0);
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y) {
                    double norm = 0.0;
                    for (int a = 0; a < d; ++a)
                        for (int b = 0; b < d; ++b) {
                            const double e = -std::log(rng.uniform() + 1e-12);
                            beh.at(a, b, x, y) = e;
                            norm += e;
                        }
                    for (int a = 0; a < d; ++a)
                        for (int b = 0; b < d; ++b) beh.at(a, b, x, y) /= norm;
                }
            double lin = 0.0;
            for (std::size_t i = 0; i < w.size(); ++i) lin += w[i] * beh.p[i];
            CHECK(lin == doctest::Approx(evaluate_bell(game, beh)).epsilon(1e-12));
        }
    }
}

TEST_CASE("reduced operators reproduce the strategy payoff for both parties") {
    for (int d : {2, 3, 4}) {
        const GameSpec game = build_game(d);
        for (std::uint64_t seed : {11u, 12u, 13u}) {
            const BellStrategy strat = random_bell(d, seed);
            const double payoff =
                evaluate_bell(game, behavior_from_bell(strat));
            for (int party = 0; party < 2; ++party) {
                const std::array<std::vector<Matrix>, 2> red =
                    bell_reduced_operators(game, strat, party);
                double acc = 0.0;
                for (int setting = 0; setting < 2; ++setting) {
                    const auto& povm =
                        party == 0 ? strat.alice[setting] : strat.bob[setting];
                    for (int o = 0; o < d; ++o)
                        acc += trace(red[static_cast<std::size_t>(setting)]
                                        [static_cast<std::size_t>(o)] *
                                     povm[static_cast<std::size_t>(o)])
                                   .real();
                }
                CHECK(acc == doctest::Approx(payoff).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("reduced operators are Hermitian") {
    const GameSpec game = build_game(3);
    const BellStrategy strat = random_bell(3, 77);
    for (int party = 0; party < 2; ++party) {
        const auto red = bell_reduced_operators(game, strat, party);
        for (const auto& setting : red)
            for (const Matrix& r : setting) CHECK(is_hermitian(r, 1e-12));
    }
    CHECK_THROWS_AS(bell_reduced_operators(game, strat, 2), DomainError);
}

TEST_CASE("entangled see-saw recovers the d = 2 optimum") {
    const GameSpec game = build_game(2);
    SeesawConfig config;
    config.restarts = 6;
    config.max_iters = 200;
    config.seed = 1;
    const OptimizationReport report = seesaw_bell(game, config);
    CHECK(report.best_value == doctest::Approx(std::sqrt(0.5)).epsilon(2e-4));
    // The reported strategy must reproduce the reported value.
    const auto& strat = std::get<BellStrategy>(report.best_strategy);
    const double replay = evaluate_bell(game, behavior_from_bell(strat));
    CHECK(replay == doctest::Approx(report.best_value).epsilon(1e-9));
    CHECK(report.best_restart >= 0);
    CHECK(report.traces.size() == 6);
}

TEST_CASE("entangled see-saw refuses joint spaces above dimension 100") {
    const GameSpec game = build_game(11);
    SeesawConfig config;
    config.restarts = 1;
    CHECK_THROWS_AS(seesaw_bell(game, config), DomainError);
}

TEST_CASE("see-saw configuration is validated") {
    const GameSpec game = build_game(2);
    SeesawConfig config;
    config.restarts = 0;
    CHECK_THROWS_AS(seesaw_bell(game, config), DomainError);
    config.restarts = 1;
    config.max_iters = 0;
    CHECK_THROWS_AS(seesaw_bell(game, config), DomainError);
    config.max_iters = 10;
    config.convergence_eps = 0.0;
    CHECK_THROWS_AS(seesaw_bell(game, config), DomainError);
    config.convergence_eps = 1e-9;
    config.certificate_eps = -1.0;
    CHECK_THROWS_AS(seesaw_bell(game, config), DomainError);
}
