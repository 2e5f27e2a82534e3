#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include "qccp/errors.hpp"
#include "qccp/optimize.hpp"
#include "qccp/rng.hpp"
#include "qccp/tolerances.hpp"
#include "seesaw_internal.hpp"

namespace qccp {

namespace seesaw_detail {

void validate_config(const SeesawConfig& config) {
    if (config.restarts < 1) throw DomainError("restarts must be >= 1");
    if (config.max_iters < 1) throw DomainError("max_iters must be >= 1");
    if (config.convergence_eps <= 0.0)
        throw DomainError("convergence_eps must be positive");
    if (config.certificate_eps <= 0.0)
        throw DomainError("certificate_eps must be positive");
}

std::vector<Matrix> basis_povm(int d, Rng& rng) {
    const Matrix u = random_unitary_from(d, rng);
    std::vector<Matrix> povm;
    povm.reserve(static_cast<std::size_t>(d));
    for (int g = 0; g < d; ++g) {
        Ket v(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) v[i] = u(i, g);
        povm.push_back(projector(v));
    }
    return povm;
}

std::vector<Matrix> wishart_povm(int d, Rng& rng) {
    std::vector<Matrix> w;
    w.reserve(static_cast<std::size_t>(d));
    Matrix t = Matrix::zeros(d, d);
    for (int g = 0; g < d; ++g) {
        const Matrix gmat = ginibre(d, rng);
        Matrix wg = gmat * adjoint(gmat);
        t += wg;
        w.push_back(std::move(wg));
    }
    const Matrix tm = invsqrt_psd(hermitize(t), 1e-14);
    for (Matrix& wg : w) wg = hermitize(tm * wg * tm);
    return w;
}

void blend_full_rank(std::vector<Matrix>& povm, int d) {
    for (Matrix& m : povm) {
        m *= cx(0.98, 0.0);
        for (int i = 0; i < d; ++i)
            m(i, i) += 0.02 / static_cast<double>(povm.size());
    }
}

bool Patience::stalled(double value) {
    const double best = best_history_.empty()
                            ? value
                            : std::max(best_history_.back(), value);
    best_history_.push_back(best);
    const int n = static_cast<int>(best_history_.size());
    return window_ > 0 && n > window_ &&
           best_history_[static_cast<std::size_t>(n - 1)] -
                   best_history_[static_cast<std::size_t>(n - 1 - window_)] <
               tol::kPatienceGain;
}

}  // namespace seesaw_detail

namespace {

using seesaw_detail::basis_povm;
using seesaw_detail::kImproveSteps;
using seesaw_detail::povm_improve;
using seesaw_detail::validate_config;
using seesaw_detail::wishart_povm;

double payoff_pm(const GameSpec& game, const std::vector<Matrix>& states,
                 const std::array<std::vector<Matrix>, 2>& povms) {
    const int d = game.d;
    double total = 0.0;
    for (int x0 = 0; x0 < d; ++x0)
        for (int x = 0; x < 2; ++x) {
            const Matrix& rho = states[static_cast<std::size_t>(x0) * 2 + x];
            for (int y = 0; y < 2; ++y)
                for (int g = 0; g < d; ++g) {
                    const double w = game.s(x0, x, y, g);
                    if (w == 0.0) continue;
                    const Matrix& m = povms[y][g];
                    cx t = 0.0;
                    for (int i = 0; i < d; ++i)
                        for (int j = 0; j < d; ++j) t += rho(i, j) * m(j, i);
                    total += w * t.real();
                }
        }
    return total / (4.0 * d);
}

std::vector<Matrix> classical_states(const GameSpec& game,
                                     const ClassicalStrategy& witness) {
    const int d = game.d;
    std::vector<Matrix> states(static_cast<std::size_t>(2 * d));
    for (int i = 0; i < 2 * d; ++i) {
        Matrix rho = Matrix::zeros(d, d);
        rho(witness.encoding[i], witness.encoding[i]) = 1.0;
        states[i] = std::move(rho);
    }
    return states;
}

std::array<std::vector<Matrix>, 2> classical_povms(
    const GameSpec& game, const ClassicalStrategy& witness) {
    const int d = game.d;
    std::array<std::vector<Matrix>, 2> povms;
    for (int y = 0; y < 2; ++y) {
        povms[y].assign(static_cast<std::size_t>(d), Matrix::zeros(d, d));
        for (int m = 0; m < d; ++m) povms[y][witness.decoding[m * 2 + y]](m, m) = 1.0;
    }
    return povms;
}

std::array<std::vector<Matrix>, 2> draw_init(int d, Rng& rng, bool wishart) {
    std::array<std::vector<Matrix>, 2> povms;
    for (int y = 0; y < 2; ++y)
        povms[y] = wishart ? wishart_povm(d, rng) : basis_povm(d, rng);
    return povms;
}

struct RestartOutcome {
    RestartTrace trace;
    PmStrategy best;
    double best_value = -std::numeric_limits<double>::infinity();
    bool has_best = false;
};

// One see-saw restart. Constrained runs are two-phase: an unconstrained
// see-saw first (it finds the high basins), then the constrained measurement
// subsolver polishes from the projected measurements.
RestartOutcome run_restart_qs(const GameSpec& game, const SeesawConfig& config,
                              int r, const ClassicalBound* warm) {
    const int d = game.d;
    RestartOutcome out;
    RestartTrace& tr = out.trace;
    tr.index = r;

    std::array<std::vector<Matrix>, 2> povms;
    std::vector<Matrix> states;
    double prev = -std::numeric_limits<double>::infinity();

    auto snapshot = [&](double value) {
        if (value <= out.best_value) return;
        out.best_value = value;
        out.best.d = d;
        out.best.states = states;
        out.best.povms = povms;
        out.has_best = true;
    };

    // Effect operators of the measurement subproblem for setting y, given the
    // current states: B_g = hermitized sum of score-weighted states.
    auto reduced_ops = [&](int y) {
        std::vector<Matrix> b(static_cast<std::size_t>(d), Matrix::zeros(d, d));
        for (int g = 0; g < d; ++g) {
            for (int x0 = 0; x0 < d; ++x0)
                for (int x = 0; x < 2; ++x) {
                    const double w = game.s(x0, x, y, g);
                    if (w != 0.0)
                        b[g] += cx(w, 0.0) *
                                states[static_cast<std::size_t>(x0) * 2 + x];
                }
            b[g] = hermitize(b[g]);
        }
        return b;
    };

    if (r == 0 && warm != nullptr) {
        tr.init_kind = "classical";
        povms = classical_povms(game, warm->witness);
        if (config.constraint == Constraint::UNCONSTRAINED) {
            // Record the embedded classical strategy itself so the best
            // value never falls below the classical bound.
            states = classical_states(game, warm->witness);
            const double v0 = payoff_pm(game, states, povms);
            tr.payoffs.push_back(v0);
            snapshot(v0);
            prev = v0;
        }
    } else {
        Rng rng = Rng::substream(config.seed, static_cast<std::uint64_t>(r));
        const bool wishart = (r % 2 == 0);
        tr.init_kind = wishart ? "wishart" : "basis";
        povms = draw_init(d, rng, wishart);
    }
    for (auto& povm : povms) seesaw_detail::blend_full_rank(povm, d);

    const bool constrained = config.constraint != Constraint::UNCONSTRAINED;
    const int phase1_budget = constrained ? config.max_iters / 2 : config.max_iters;
    int cycles = 0;

    try {
        seesaw_detail::Patience patience(config.patience);
        for (int it = 0; it < phase1_budget; ++it) {
            states = state_update(game, povms);
            for (int y = 0; y < 2; ++y)
                povms[y] = povm_improve(reduced_ops(y), povms[y], kImproveSteps);
            const double val = payoff_pm(game, states, povms);
            tr.payoffs.push_back(val);
            ++cycles;
            if (!constrained) snapshot(val);
            const bool converged = std::abs(val - prev) < config.convergence_eps;
            prev = val;
            if (converged || patience.stalled(val)) break;
        }

        if (constrained) {
            prev = -std::numeric_limits<double>::infinity();
            seesaw_detail::Patience patience2(config.patience);
            const int remaining = config.max_iters - cycles;
            for (int it = 0; it < remaining; ++it) {
                states = state_update(game, povms);
                for (int y = 0; y < 2; ++y) {
                    PovmResult res = povm_update_constrained(
                        reduced_ops(y), config.constraint, &povms[y]);
                    povms[y] = std::move(res.povm);
                }
                const double val = payoff_pm(game, states, povms);
                tr.payoffs.push_back(val);
                ++cycles;
                snapshot(val);
                const bool converged =
                    std::abs(val - prev) < config.convergence_eps;
                prev = val;
                if (converged || patience2.stalled(val)) break;
            }
        } else if (out.has_best) {
            // Certified polish of the best strategy: solve both measurement
            // subproblems exactly for the best states, and record the
            // certificate gaps the final measurements achieve.
            states = out.best.states;
            povms = out.best.povms;
            for (int y = 0; y < 2; ++y) {
                const std::vector<Matrix> b = reduced_ops(y);
                try {
                    PovmResult res =
                        povm_update(b, config.certificate_eps, &povms[y]);
                    povms[y] = std::move(res.povm);
                    tr.max_certificate_gap =
                        std::max(tr.max_certificate_gap, res.gap);
                } catch (const NumericError&) {
                    // Keep the unpolished measurement; report its own gap.
                    tr.max_certificate_gap = std::max(
                        tr.max_certificate_gap, povm_certificate(b, povms[y]));
                }
            }
            const double val = payoff_pm(game, states, povms);
            tr.payoffs.push_back(val);
            snapshot(val);
        }
    } catch (const Error& e) {
        tr.failed = true;
        tr.message = e.what();
    }

    tr.iterations = cycles;
    tr.final_value = out.has_best
                         ? out.best_value
                         : (tr.payoffs.empty() ? 0.0 : tr.payoffs.back());
    return out;
}

}  // namespace

OptimizationReport seesaw_qs(const GameSpec& game, const SeesawConfig& config,
                             unsigned threads) {
    validate_config(config);
    const auto start = std::chrono::steady_clock::now();

    ClassicalBound warm;
    const ClassicalBound* warm_ptr = nullptr;
    if (config.classical_warm_start) {
        warm = heuristic_classical_bound(game, 50, config.seed);
        warm_ptr = &warm;
    }

    std::vector<RestartOutcome> results(
        static_cast<std::size_t>(config.restarts));
    auto run_range = [&](unsigned t, unsigned stride) {
        for (int r = static_cast<int>(t); r < config.restarts;
             r += static_cast<int>(stride))
            results[static_cast<std::size_t>(r)] =
                run_restart_qs(game, config, r, warm_ptr);
    };
    const unsigned nt = std::max(1u, std::min(threads, static_cast<unsigned>(
                                                           config.restarts)));
    if (nt == 1) {
        run_range(0, 1);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nt);
        for (unsigned t = 0; t < nt; ++t)
            pool.emplace_back(run_range, t, nt);
        for (auto& th : pool) th.join();
    }

    int best_r = -1;
    double best_v = -std::numeric_limits<double>::infinity();
    for (int r = 0; r < config.restarts; ++r)
        if (results[static_cast<std::size_t>(r)].has_best &&
            results[static_cast<std::size_t>(r)].best_value > best_v) {
            best_v = results[static_cast<std::size_t>(r)].best_value;
            best_r = r;
        }
    if (best_r < 0) {
        std::string why = "all see-saw restarts failed";
        for (const auto& res : results)
            if (res.trace.failed) {
                why += ": " + res.trace.message;
                break;
            }
        throw NumericError(why);
    }

    OptimizationReport report;
    report.best_strategy = results[static_cast<std::size_t>(best_r)].best;
    report.best_value =
        evaluate_qs(game, std::get<PmStrategy>(report.best_strategy));
    if (std::abs(report.best_value - best_v) > tol::kReportConsistency)
        throw NumericError(
            "report best value does not reproduce under re-evaluation");
    report.best_restart = best_r;
    report.seed = config.seed;
    report.constraint = config.constraint;
    report.restarts = config.restarts;
    report.traces.reserve(results.size());
    for (auto& res : results) report.traces.push_back(std::move(res.trace));
    report.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    return report;
}

}  // namespace qccp
