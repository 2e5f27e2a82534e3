#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "qccp/classical.hpp"
#include "qccp/game.hpp"
#include "qccp/strategies.hpp"

namespace qccp {

enum class Constraint {
    UNCONSTRAINED,        // arbitrary POVMs
    TRACE_ONE,             // every element has unit trace
    RANK_ONE_PROJECTIVE,   // elements form an orthonormal-basis measurement
};

struct SeesawConfig {
    int restarts = 200;
    int max_iters = 500;              // see-saw iterations per restart
    double convergence_eps = 1e-9;    // payoff-change stopping rule
    double certificate_eps = 1e-7;    // POVM-subproblem acceptance gap
    std::uint64_t seed = 0;
    Constraint constraint = Constraint::UNCONSTRAINED;
    bool classical_warm_start = true;
    // Stop a restart when its best payoff improved by less than 1e-7 over
    // this many consecutive iterations (0 disables the rule).
    int patience = 150;
};

struct RestartTrace {
    int index = 0;
    std::string init_kind;            // "classical", "basis", "wishart"
    std::vector<double> payoffs;      // payoff after each see-saw iteration
    double final_value = 0.0;
    double max_certificate_gap = 0.0;
    int iterations = 0;
    bool failed = false;
    std::string message;
};

struct OptimizationReport {
    double best_value = 0.0;
    int best_restart = -1;
    std::uint64_t seed = 0;
    Constraint constraint = Constraint::UNCONSTRAINED;
    int restarts = 0;
    double wall_ms = 0.0;             // excluded from determinism comparisons
    std::variant<PmStrategy, BellStrategy> best_strategy;
    std::vector<RestartTrace> traces;
};

// ---- see-saw building blocks -------------------------------------------

// For fixed measurements, the optimal state for each (x0, x) is the top
// eigenvector projector of A_{x0,x} = sum_{y,g} s(g|x0,x,y) M_y^g (the
// subproblem optimum is exactly lambda_max). Degenerate top eigenvalues
// resolve to the candidate eigenvector whose absolute-amplitude sequence is
// lexicographically largest, so reports are deterministic.
std::vector<Matrix> state_update(const GameSpec& game,
                                 const std::array<std::vector<Matrix>, 2>& povms);

struct PovmResult {
    std::vector<Matrix> povm;
    double value = 0.0;       // sum_g tr(B_g M_g)
    double gap = 0.0;         // weak-duality certificate gap
    int iterations = 0;
    bool used_fallback = false;
};

// Maximize sum_g tr(B_g M_g) over POVMs (M_g >= 0, sum M_g = I).
// Method: shift B_g to be PSD (the objective shifts by exactly shift*dim),
// run the fixed-point iteration M <- L^{-1/2} B M B L^{-1/2} with
// L = sum B M B, re-projected to completeness each step; accept only when
// the certificate gap is <= certificate_eps, otherwise fall back to a
// log-det-barrier interior-point ascent. NumericError (carrying the best
// gap) if neither certifies.
PovmResult povm_update(const std::vector<Matrix>& b,
                       double certificate_eps = 1e-7,
                       const std::vector<Matrix>* warm = nullptr);

// Weak-duality certificate: with Y = Herm(sum_g B_g M_g), both
// Y + lambda*I (lambda = max(0, max_g lambda_max(B_g - Y))) and
// Y + sum_g (B_g - Y)^+ are dual feasible, so the smaller of
// gap = tr(Y) + min(lambda*dim, sum_g tr (B_g - Y)^+) - sum_g tr(B_g M_g)
// is >= -1e-12. A gap <= certificate_eps certifies the POVM optimal to
// that accuracy.
double povm_certificate(const std::vector<Matrix>& b,
                        const std::vector<Matrix>& povm);

// Constrained variants of the measurement subproblem.
// TRACE_ONE: projected gradient ascent with Dykstra alternating projections
// onto {sum M = I} ∩ {tr M_g = 1} ∩ {M_g >= 0}; backtracking steps; stops
// when the step improvement falls below 1e-10.
// RANK_ONE_PROJECTIVE: Riemannian gradient ascent over the unitary manifold
// (polar retraction) on the basis columns, initialized from the eigenbasis
// of sum_g B_g when no warm start is given, with an optimal
// outcome-to-column assignment refinement.
PovmResult povm_update_constrained(const std::vector<Matrix>& b,
                                   Constraint constraint,
                                   const std::vector<Matrix>* warm = nullptr);

// Maximum-weight perfect assignment on a square score matrix
// (score(g, j) = value of giving column j to outcome g); O(n^3) Hungarian
// potentials method. Returns the column assigned to each outcome.
std::vector<int> max_assignment(const std::vector<double>& score, int n);

// ---- full optimizations -------------------------------------------------

// Alternates state_update and povm_update (or the constrained variant) until
// the payoff change drops below convergence_eps or max_iters is reached.
// Restart 0 is warm-started from the best classical witness when enabled
// (embedded as diagonal states and decoding projectors); the remaining
// restarts draw random measurements from the per-restart substream
// (alternating orthonormal-basis and Wishart-normalized initial POVMs for
// basin diversity). Restarts merge by (value, lowest index); `threads` only
// distributes restarts, so reports are identical for every thread count.
OptimizationReport seesaw_qs(const GameSpec& game, const SeesawConfig& config,
                             unsigned threads = 1);

// Weights of the entanglement-assisted objective
// sum w(a,b,x,y) <psi| A_x^a (x) B_y^b |psi>; same layout as Behavior
// (index ((a*d+b)*2+x)*2+y). Built by averaging the encode/decode map over
// x0 (w(a,b,x,y) = (1/4d) sum_{x0} s(x0+a-b | x0, x, y)).
std::vector<double> bell_weights(const GameSpec& game);

// Reduced operators for one party's measurement subproblem: for party 0
// (Alice), R_{x,a} = Herm(sum_{y,b} w(a,b,x,y) Tr_B(|psi><psi| (I (x) B_y^b))),
// so the objective is sum_{x,a} tr(A_x^a R_{x,a}); party 1 symmetric via Tr_A.
std::array<std::vector<Matrix>, 2> bell_reduced_operators(const GameSpec& game,
                                                          const BellStrategy& strat,
                                                          int party);

// See-saw over BellStrategy: state update by the top eigenvector of the
// d^2-dimensional weighted operator sum w A (x) B, party updates through
// bell_reduced_operators + povm_update. Restart and determinism semantics
// as in seesaw_qs.
OptimizationReport seesaw_bell(const GameSpec& game, const SeesawConfig& config,
                               unsigned threads = 1);

}  // namespace qccp
