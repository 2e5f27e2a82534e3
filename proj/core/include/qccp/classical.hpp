#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qccp/game.hpp"

namespace qccp {

// Deterministic classical strategy: Alice sends m = e(x0, x) in {0..d-1},
// Bob answers g = g(m, y). Shared randomness cannot beat the deterministic
// optimum because the payoff is linear in strategy mixtures.
struct ClassicalStrategy {
    int d = 0;
    std::vector<int> encoding;  // size 2d, index x0*2 + x, values in 0..d-1
    std::vector<int> decoding;  // size 2d, index m*2 + y, values in 0..d-1
};

struct ClassicalBound {
    double value = 0.0;
    ClassicalStrategy witness;
};

// Exact payoff of a deterministic strategy. DomainError on out-of-range
// table entries or size mismatch.
double evaluate_classical(const GameSpec& game, const ClassicalStrategy& strat);

// For a fixed encoding the optimal decoding decouples: for each (m, y), pick
// the g maximizing the summed scores of the inputs mapped to m. Ties break
// toward the smallest g. Returns (decoding, value).
std::pair<std::vector<int>, double> optimal_decoding(const GameSpec& game,
                                                     const std::vector<int>& encoding);

// Exhaustive maximum over all d^{2d} encodings, each with its optimal
// decoding. Supported for d <= 5 (9.8M encodings); CapabilityError above,
// directing to the heuristic. The encoding space is scanned in disjoint
// chunks merged by (value, lowest chunk) so the result is schedule
// independent; `threads` only distributes the chunks.
ClassicalBound exact_classical_bound(const GameSpec& game, unsigned threads = 1);

// Random-restart hill climbing over encodings (optimal decoding per step).
// Deterministic in (restarts, seed).
ClassicalBound heuristic_classical_bound(const GameSpec& game, int restarts,
                                         std::uint64_t seed);

}  // namespace qccp
