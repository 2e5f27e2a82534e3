#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "qccp/game.hpp"
#include "qccp/linalg.hpp"

namespace qccp {

// Prepare-and-measure strategy: Alice sends one of 2d states of dimension d,
// Bob applies one of two d-outcome POVMs.
struct PmStrategy {
    int d = 0;
    std::vector<Matrix> states;                // 2d entries, index x0*2 + x
    std::array<std::vector<Matrix>, 2> povms;  // povms[y][g]

    std::size_t state_index(int x0, int x) const {
        return static_cast<std::size_t>(x0) * 2 + x;
    }
    const Matrix& state(int x0, int x) const { return states[state_index(x0, x)]; }
};

// Entanglement-assisted strategy: shared pure state on C^{d*d} with two
// d-outcome POVMs per party; outcomes dress a classical message
// m = x0 + a mod d decoded as g = m - b mod d.
struct BellStrategy {
    int d = 0;
    Ket psi;                                   // dimension d*d
    std::array<std::vector<Matrix>, 2> alice;  // alice[x][a]
    std::array<std::vector<Matrix>, 2> bob;    // bob[y][b]
};

// Joint conditional outcome distribution p(a, b | x, y).
struct Behavior {
    int d = 0;
    std::vector<double> p;  // index ((a*d + b)*2 + x)*2 + y

    std::size_t idx(int a, int b, int x, int y) const {
        return ((static_cast<std::size_t>(a) * d + b) * 2 + x) * 2 + y;
    }
    double at(int a, int b, int x, int y) const { return p[idx(a, b, x, y)]; }
    double& at(int a, int b, int x, int y) { return p[idx(a, b, x, y)]; }
};

// Validation profiles. The strict profile is the default everywhere; the
// lenient profile admits 2-decimal input data prior to canonicalization.
struct ValidationProfile {
    double psd_min;            // smallest admissible eigenvalue
    double trace_tol;          // |tr(rho) - 1|
    double completeness_tol;   // ||sum_g M_g - I||_max
};
ValidationProfile strict_profile();
ValidationProfile lenient_profile();

// Throw ValidationError naming the offending object on any violation.
void validate_pm(const PmStrategy& s, const ValidationProfile& profile = strict_profile());
void validate_bell(const BellStrategy& s, const ValidationProfile& profile = strict_profile());
void validate_behavior(const Behavior& b);

// (1/4d) sum s(g|x0,x,y) tr(rho_{x0,x} M_y^g). Validates the strategy.
double evaluate_qs(const GameSpec& game, const PmStrategy& strat);

// p(a,b|x,y) = <psi| A_x^a (x) B_y^b |psi>. Validates input and output.
Behavior behavior_from_bell(const BellStrategy& strat);

// Payoff of a behavior through the induced guess distribution
// q(g|x0,x,y) = sum_{a,b: x0+a-b = g mod d} p(a,b|x,y).
double evaluate_bell(const GameSpec& game, const Behavior& beh);

// Independent oracle: direct enumeration over (x0, x, y, a, b) applying
// m = x0 + a, g = m - b and accumulating the +-c_k scores, with no
// score-tensor or induced-q shortcut.
double simulate_protocol(const GameSpec& game, const Behavior& beh);

}  // namespace qccp
