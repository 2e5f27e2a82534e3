#pragma once

// Internal helpers shared by the see-saw drivers; not installed.

#include <vector>

#include "qccp/linalg.hpp"
#include "qccp/optimize.hpp"
#include "qccp/rng.hpp"

namespace qccp::seesaw_detail {

void validate_config(const SeesawConfig& config);

// Rank-one projective measurement from the columns of a Haar-random unitary.
std::vector<Matrix> basis_povm(int d, Rng& rng);

// Full-rank random POVM: Wishart operators renormalized by T^{-1/2}.
std::vector<Matrix> wishart_povm(int d, Rng& rng);

// A few monotone fixed-point steps of the measurement subproblem, without
// optimality certificates. Intermediate see-saw cycles only need cheap
// ascent; the certified solver is reserved for the final polish.
std::vector<Matrix> povm_improve(const std::vector<Matrix>& b,
                                 const std::vector<Matrix>& warm, int steps);

// Fixed-point steps spent on each measurement subproblem per see-saw cycle.
inline constexpr int kImproveSteps = 25;

// Mix a little of the uniform POVM into every element once at restart init,
// so rank-deficient draws (projector inits) are not locked to their rank by
// the fixed-point iteration, which preserves ranges.
void blend_full_rank(std::vector<Matrix>& povm, int d);

// Plateau detector: stalled() is true once the running best payoff has
// improved by less than tol::kPatienceGain over the last `window` calls.
class Patience {
public:
    explicit Patience(int window) : window_(window) {}
    bool stalled(double value);

private:
    int window_;
    std::vector<double> best_history_;
};

}  // namespace qccp::seesaw_detail
