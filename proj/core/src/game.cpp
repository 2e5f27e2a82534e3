#include "qccp/game.hpp"

#include <cmath>
#include <sstream>

#include "qccp/errors.hpp"
#include "qccp/tolerances.hpp"

namespace qccp {

namespace {

// Mathematical modulo: result always in 0..d-1.
int mod_d(long long v, int d) {
    const long long r = v % d;
    return static_cast<int>(r < 0 ? r + d : r);
}

void check_cell_inputs(int d, int x0, int x, int y, int k) {
    if (d < 2) throw DomainError("dimension must be >= 2");
    if (x0 < 0 || x0 >= d) throw DomainError("x0 out of range");
    if (x < 0 || x > 1) throw DomainError("x out of range");
    if (y < 0 || y > 1) throw DomainError("y out of range");
    if (k < 0 || k >= d / 2) throw DomainError("k out of range");
}

int sign_xy(int x, int y) { return ((x + y) % 2 == 0) ? 1 : -1; }

}  // namespace

double coefficient_c(int d, int k) {
    if (d < 2) throw DomainError("dimension must be >= 2");
    if (k < 0 || k >= d / 2) throw DomainError("k out of range");
    return 1.0 - 2.0 * k / (d - 1.0);
}

int target_f(int d, int x0, int x, int y, int k) {
    check_cell_inputs(d, x0, x, y, k);
    return mod_d(static_cast<long long>(x0) - x * y - sign_xy(x, y) * k, d);
}

int target_h(int d, int x0, int x, int y, int k) {
    check_cell_inputs(d, x0, x, y, k);
    return mod_d(static_cast<long long>(x0) - x * y + sign_xy(x, y) * (k + 1), d);
}

GameSpec build_game(int d, int d_cap) {
    if (d < 2) throw DomainError("dimension must be >= 2");
    if (d > d_cap) {
        std::ostringstream msg;
        msg << "dimension " << d << " exceeds the cap " << d_cap;
        throw DomainError(msg.str());
    }
    GameSpec game;
    game.d = d;
    game.k_max = d / 2;
    game.coeffs.resize(game.k_max);
    for (int k = 0; k < game.k_max; ++k) game.coeffs[k] = coefficient_c(d, k);
    game.scores.assign(static_cast<std::size_t>(d) * 2 * 2 * d, 0.0);
    for (int x0 = 0; x0 < d; ++x0)
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                for (int k = 0; k < game.k_max; ++k) {
                    game.scores[game.cell(x0, x, y, target_f(d, x0, x, y, k))] +=
                        game.coeffs[k];
                    game.scores[game.cell(x0, x, y, target_h(d, x0, x, y, k))] -=
                        game.coeffs[k];
                }
    return game;
}

double payoff_from_guess_distribution(const GameSpec& game,
                                      const std::vector<double>& q) {
    const int d = game.d;
    if (q.size() != game.scores.size())
        throw ValidationError("guess distribution has the wrong size");
    for (int x0 = 0; x0 < d; ++x0)
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) {
                double slice = 0.0;
                for (int g = 0; g < d; ++g) {
                    const double v = q[game.cell(x0, x, y, g)];
                    if (v < tol::kDistNonneg) {
                        std::ostringstream msg;
                        msg << "guess distribution negative at (x0=" << x0 << ", x=" << x
                            << ", y=" << y << ", g=" << g << "): " << v;
                        throw ValidationError(msg.str());
                    }
                    slice += v;
                }
                if (std::abs(slice - 1.0) > tol::kDistNorm) {
                    std::ostringstream msg;
                    msg << "guess distribution slice (x0=" << x0 << ", x=" << x
                        << ", y=" << y << ") sums to " << slice;
                    throw ValidationError(msg.str());
                }
            }
    double total = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) total += game.scores[i] * q[i];
    return total / (4.0 * d);
}

}  // namespace qccp
