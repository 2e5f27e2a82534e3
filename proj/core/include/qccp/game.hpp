#pragma once

#include <cstddef>
#include <vector>

namespace qccp {

// One game instance: d-valued guesses, binary side inputs, and the
// precomputed score tensor s(g | x0, x, y).
//
// Alice holds x0 in {0..d-1} and x in {0,1}; Bob holds y in {0,1} and
// guesses g in {0..d-1}. A guess scores +c_k when it hits the k-th target
// f_k and -c_k when it hits the k-th anti-target h_k, with
// c_k = 1 - 2k/(d-1) for k = 0..floor(d/2)-1. Payoffs average the score
// over the uniform input distribution (weight 1/(4d)).
struct GameSpec {
    int d = 0;
    int k_max = 0;                 // number of k values, k = 0..k_max-1
    std::vector<double> coeffs;    // c_k
    std::vector<double> scores;    // s[x0][x][y][g], row-major

    std::size_t cell(int x0, int x, int y, int g) const {
        return ((static_cast<std::size_t>(x0) * 2 + x) * 2 + y) * d + g;
    }
    double s(int x0, int x, int y, int g) const { return scores[cell(x0, x, y, g)]; }
};

// c_k = 1 - 2k/(d-1). DomainError for d < 2 or k outside 0..floor(d/2)-1.
double coefficient_c(int d, int k);

// f_k = (x0 - x*y - (-1)^{x+y} k) mod d, mathematical modulo (never negative).
int target_f(int d, int x0, int x, int y, int k);

// h_k = (x0 - x*y + (-1)^{x+y} (k+1)) mod d, mathematical modulo.
int target_h(int d, int x0, int x, int y, int k);

// Builds the score tensor: +c_k at g = f_k, -c_k at g = h_k, accumulated
// additively. DomainError for d < 2 or d > d_cap.
GameSpec build_game(int d, int d_cap = 16);

// (1/4d) * sum s(g|x0,x,y) q(g|x0,x,y). q uses the same layout as scores:
// index ((x0*2+x)*2+y)*d+g. Entries must be >= -1e-9 and each (x0,x,y)
// slice must sum to 1 within 1e-9 (ValidationError otherwise).
double payoff_from_guess_distribution(const GameSpec& game,
                                      const std::vector<double>& q);

}  // namespace qccp
