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

namespace {

using seesaw_detail::basis_povm;
using seesaw_detail::validate_config;
using seesaw_detail::wishart_povm;

std::size_t widx(int a, int b, int x, int y, int d) {
    return (static_cast<std::size_t>(a * d + b) * 2 + x) * 2 + y;
}

Matrix transpose_of(const Matrix& m) {
    Matrix t(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
    return t;
}

Matrix conj_of(const Matrix& m) {
    Matrix c(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) c(i, j) = std::conj(m(i, j));
    return c;
}

void check_bell_shapes(const GameSpec& game, const BellStrategy& strat) {
    const int d = game.d;
    if (strat.d != d) throw DomainError("strategy and game dimensions differ");
    if (strat.psi.size() != static_cast<std::size_t>(d) * d)
        throw DomainError("shared state must have d^2 amplitudes");
    for (int x = 0; x < 2; ++x)
        if (static_cast<int>(strat.alice[x].size()) != d)
            throw DomainError("Alice measurements must have d outcomes");
    for (int y = 0; y < 2; ++y)
        if (static_cast<int>(strat.bob[y].size()) != d)
            throw DomainError("Bob measurements must have d outcomes");
    for (int x = 0; x < 2; ++x)
        for (const Matrix& m : strat.alice[x])
            if (m.rows != d || m.cols != d)
                throw DomainError("Alice operator dimension mismatch");
    for (int y = 0; y < 2; ++y)
        for (const Matrix& m : strat.bob[y])
            if (m.rows != d || m.cols != d)
                throw DomainError("Bob operator dimension mismatch");
}

// psi as a d x d matrix: Psi(i, k) = psi[i*d + k].
Matrix psi_matrix(const Ket& psi, int d) {
    Matrix p(d, d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) p(i, k) = psi[static_cast<std::size_t>(i) * d + k];
    return p;
}

// W(i*d+k, j*d+l) += coeff * A(i,j) * B(k,l)  (kron accumulation in place)
void axpy_kron(Matrix& w, double coeff, const Matrix& a, const Matrix& b) {
    const int da = a.rows;
    const int db = b.rows;
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < da; ++j) {
            const cx f = coeff * a(i, j);
            if (f == cx(0.0, 0.0)) continue;
            for (int k = 0; k < db; ++k)
                for (int l = 0; l < db; ++l)
                    w(i * db + k, j * db + l) += f * b(k, l);
        }
}

// Dominant-eigenvector power iteration on the shifted operator W + sigma*I
// (sigma makes the spectrum nonnegative so the top eigenvalue dominates in
// magnitude); falls back to the dense eigensolver if it fails to settle.
Ket top_eigvec(const Matrix& w, const Ket& start) {
    const int n = w.rows;
    const double sigma = frobenius_norm(w) + 1.0;
    Ket v = normalized(start);
    Ket wv(static_cast<std::size_t>(n));
    for (int it = 0; it < 2000; ++it) {
        for (int i = 0; i < n; ++i) {
            cx acc = 0.0;
            for (int j = 0; j < n; ++j) acc += w(i, j) * v[static_cast<std::size_t>(j)];
            wv[static_cast<std::size_t>(i)] = acc;
        }
        cx ray = 0.0;
        for (int i = 0; i < n; ++i)
            ray += std::conj(v[static_cast<std::size_t>(i)]) * wv[static_cast<std::size_t>(i)];
        double resid = 0.0;
        for (int i = 0; i < n; ++i)
            resid = std::max(resid, std::abs(wv[static_cast<std::size_t>(i)] -
                                             ray * v[static_cast<std::size_t>(i)]));
        if (resid <= 1e-13 * sigma) return v;
        for (int i = 0; i < n; ++i)
            wv[static_cast<std::size_t>(i)] += sigma * v[static_cast<std::size_t>(i)];
        v = normalized(wv);
    }
    const Eig e = hermitian_eig(w);
    Ket out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = e.vectors(i, 0);
    return out;
}

struct BellRestartOutcome {
    RestartTrace trace;
    BellStrategy best;
    double best_value = -std::numeric_limits<double>::infinity();
    bool has_best = false;
};

BellRestartOutcome run_restart_bell(const GameSpec& game,
                                    const SeesawConfig& config, int r,
                                    const std::vector<double>& w) {
    const int d = game.d;
    BellRestartOutcome out;
    RestartTrace& tr = out.trace;
    tr.index = r;

    Rng rng = Rng::substream(config.seed, static_cast<std::uint64_t>(r));
    const bool wishart = (r % 2 == 1);
    tr.init_kind = wishart ? "wishart" : "basis";

    BellStrategy strat;
    strat.d = d;
    for (int x = 0; x < 2; ++x)
        strat.alice[x] = wishart ? wishart_povm(d, rng) : basis_povm(d, rng);
    for (int y = 0; y < 2; ++y)
        strat.bob[y] = wishart ? wishart_povm(d, rng) : basis_povm(d, rng);
    for (int x = 0; x < 2; ++x) seesaw_detail::blend_full_rank(strat.alice[x], d);
    for (int y = 0; y < 2; ++y) seesaw_detail::blend_full_rank(strat.bob[y], d);
    strat.psi.assign(static_cast<std::size_t>(d) * d, cx(1.0, 0.0));

    const bool constrained = config.constraint != Constraint::UNCONSTRAINED;
    const int phase1_budget = constrained ? config.max_iters / 2 : config.max_iters;
    double prev = -std::numeric_limits<double>::infinity();
    int cycles = 0;

    auto snapshot = [&](double value) {
        if (value <= out.best_value) return;
        out.best_value = value;
        out.best = strat;
        out.has_best = true;
    };

    enum class Mode { kImprove, kConstrained, kCertified };

    auto solve_setting = [&](const std::vector<Matrix>& b,
                             std::vector<Matrix>& povm, Mode mode) {
        if (mode == Mode::kImprove) {
            povm = seesaw_detail::povm_improve(b, povm,
                                               seesaw_detail::kImproveSteps);
        } else if (mode == Mode::kConstrained) {
            PovmResult res = povm_update_constrained(b, config.constraint, &povm);
            povm = std::move(res.povm);
        } else {
            try {
                PovmResult res = povm_update(b, config.certificate_eps, &povm);
                povm = std::move(res.povm);
                tr.max_certificate_gap =
                    std::max(tr.max_certificate_gap, res.gap);
            } catch (const NumericError&) {
                // Keep the uncertified measurement; report its own gap.
                tr.max_certificate_gap =
                    std::max(tr.max_certificate_gap, povm_certificate(b, povm));
            }
        }
        double obj = 0.0;
        for (std::size_t g = 0; g < b.size(); ++g) {
            cx t = 0.0;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) t += b[g](i, j) * povm[g](j, i);
            obj += t.real();
        }
        return obj;
    };

    auto one_cycle = [&](Mode mode, bool update_state) {
        if (update_state) {
            // state update: top eigenvector of the weighted Bell operator
            Matrix wop = Matrix::zeros(d * d, d * d);
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y)
                    for (int a = 0; a < d; ++a)
                        for (int b = 0; b < d; ++b) {
                            const double c = w[widx(a, b, x, y, d)];
                            if (c != 0.0)
                                axpy_kron(wop, c, strat.alice[x][a],
                                          strat.bob[y][b]);
                        }
            strat.psi = top_eigvec(hermitize(wop), strat.psi);
        }

        double val = 0.0;
        for (int party = 0; party < 2; ++party) {
            const auto reduced = bell_reduced_operators(game, strat, party);
            val = 0.0;
            for (int setting = 0; setting < 2; ++setting) {
                auto& povm = party == 0 ? strat.alice[setting] : strat.bob[setting];
                val += solve_setting(reduced[setting], povm, mode);
            }
        }
        return val;  // objective after the Bob update = current payoff
    };

    try {
        seesaw_detail::Patience patience(config.patience);
        for (int it = 0; it < phase1_budget; ++it) {
            const double val = one_cycle(Mode::kImprove, true);
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
                const double val = one_cycle(Mode::kConstrained, true);
                tr.payoffs.push_back(val);
                ++cycles;
                snapshot(val);
                const bool converged =
                    std::abs(val - prev) < config.convergence_eps;
                prev = val;
                if (converged || patience2.stalled(val)) break;
            }
        } else if (out.has_best) {
            // Certified polish of the best strategy, keeping its state.
            strat = out.best;
            const double val = one_cycle(Mode::kCertified, false);
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

std::vector<double> bell_weights(const GameSpec& game) {
    const int d = game.d;
    std::vector<double> w(static_cast<std::size_t>(d) * d * 2 * 2, 0.0);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y) {
                    double acc = 0.0;
                    for (int x0 = 0; x0 < d; ++x0)
                        acc += game.s(x0, x, y, (x0 + a - b + d) % d);
                    w[widx(a, b, x, y, d)] = acc / (4.0 * d);
                }
    return w;
}

std::array<std::vector<Matrix>, 2> bell_reduced_operators(
    const GameSpec& game, const BellStrategy& strat, int party) {
    if (party != 0 && party != 1)
        throw DomainError("party must be 0 (Alice) or 1 (Bob)");
    check_bell_shapes(game, strat);
    const int d = game.d;
    const std::vector<double> w = bell_weights(game);
    const Matrix psi = psi_matrix(strat.psi, d);

    std::array<std::vector<Matrix>, 2> reduced;
    if (party == 0) {
        // Tr_B(|psi><psi| (I x B)) factors through Psi as Psi B^T Psi^dag.
        std::vector<std::vector<Matrix>> n(2);
        const Matrix psi_dag = adjoint(psi);
        for (int y = 0; y < 2; ++y)
            for (int b = 0; b < d; ++b)
                n[y].push_back(psi * transpose_of(strat.bob[y][b]) * psi_dag);
        for (int x = 0; x < 2; ++x) {
            reduced[x].assign(static_cast<std::size_t>(d), Matrix::zeros(d, d));
            for (int a = 0; a < d; ++a) {
                for (int y = 0; y < 2; ++y)
                    for (int b = 0; b < d; ++b) {
                        const double c = w[widx(a, b, x, y, d)];
                        if (c != 0.0) reduced[x][a] += cx(c, 0.0) * n[y][b];
                    }
                reduced[x][a] = hermitize(reduced[x][a]);
            }
        }
    } else {
        // Tr_A(|psi><psi| (A x I)) factors as Psi^T A^T conj(Psi).
        std::vector<std::vector<Matrix>> n(2);
        const Matrix psi_t = transpose_of(psi);
        const Matrix psi_c = conj_of(psi);
        for (int x = 0; x < 2; ++x)
            for (int a = 0; a < d; ++a)
                n[x].push_back(psi_t * transpose_of(strat.alice[x][a]) * psi_c);
        for (int y = 0; y < 2; ++y) {
            reduced[y].assign(static_cast<std::size_t>(d), Matrix::zeros(d, d));
            for (int b = 0; b < d; ++b) {
                for (int x = 0; x < 2; ++x)
                    for (int a = 0; a < d; ++a) {
                        const double c = w[widx(a, b, x, y, d)];
                        if (c != 0.0) reduced[y][b] += cx(c, 0.0) * n[x][a];
                    }
                reduced[y][b] = hermitize(reduced[y][b]);
            }
        }
    }
    return reduced;
}

OptimizationReport seesaw_bell(const GameSpec& game, const SeesawConfig& config,
                               unsigned threads) {
    validate_config(config);
    const int d = game.d;
    if (d * d > 100)
        throw DomainError(
            "entangled see-saw needs a d^2-dimensional joint space, capped at "
            "dimension 100 (d <= 10)");
    const auto start = std::chrono::steady_clock::now();
    const std::vector<double> w = bell_weights(game);

    std::vector<BellRestartOutcome> results(
        static_cast<std::size_t>(config.restarts));
    auto run_range = [&](unsigned t, unsigned stride) {
        for (int r = static_cast<int>(t); r < config.restarts;
             r += static_cast<int>(stride))
            results[static_cast<std::size_t>(r)] =
                run_restart_bell(game, config, r, w);
    };
    const unsigned nt = std::max(1u, std::min(threads, static_cast<unsigned>(
                                                           config.restarts)));
    if (nt == 1) {
        run_range(0, 1);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nt);
        for (unsigned t = 0; t < nt; ++t) pool.emplace_back(run_range, t, nt);
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
    report.best_value = evaluate_bell(
        game,
        behavior_from_bell(std::get<BellStrategy>(report.best_strategy)));
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
