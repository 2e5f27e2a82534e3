#include "qccp/strategies.hpp"

#include <cmath>
#include <sstream>

#include "qccp/errors.hpp"
#include "qccp/tolerances.hpp"

namespace qccp {

ValidationProfile strict_profile() {
    return {tol::kPsdMin, tol::kTraceOne, tol::kCompleteness};
}

ValidationProfile lenient_profile() {
    return {tol::kPsdMinLenient, tol::kTraceOneLenient, tol::kCompletenessLenient};
}

namespace {

void check_density(const Matrix& rho, int d, const ValidationProfile& profile,
                   const std::string& name) {
    if (rho.rows != d || rho.cols != d)
        throw ValidationError(name + " has wrong dimensions");
    if (!is_hermitian(rho, 1e-9))
        throw ValidationError(name + " is not Hermitian");
    const double min_eig = min_eigenvalue(hermitize(rho));
    if (min_eig < profile.psd_min) {
        std::ostringstream msg;
        msg << name << " is not positive semidefinite (min eigenvalue " << min_eig << ")";
        throw ValidationError(msg.str());
    }
    const double tr = trace(rho).real();
    if (std::abs(tr - 1.0) > profile.trace_tol) {
        std::ostringstream msg;
        msg << name << " has trace " << tr;
        throw ValidationError(msg.str());
    }
}

void check_povm(const std::vector<Matrix>& povm, int d,
                const ValidationProfile& profile, const std::string& name) {
    if (static_cast<int>(povm.size()) != d)
        throw ValidationError(name + " must have d outcomes");
    Matrix sum = Matrix::zeros(d, d);
    for (std::size_t g = 0; g < povm.size(); ++g) {
        const Matrix& m = povm[g];
        if (m.rows != d || m.cols != d)
            throw ValidationError(name + " element has wrong dimensions");
        if (!is_hermitian(m, 1e-9))
            throw ValidationError(name + " element " + std::to_string(g) +
                                  " is not Hermitian");
        const double min_eig = min_eigenvalue(hermitize(m));
        if (min_eig < profile.psd_min) {
            std::ostringstream msg;
            msg << name << " element " << g << " is not positive semidefinite "
                << "(min eigenvalue " << min_eig << ")";
            throw ValidationError(msg.str());
        }
        sum += m;
    }
    sum -= Matrix::identity(d);
    const double defect = max_abs(sum);
    if (defect > profile.completeness_tol) {
        std::ostringstream msg;
        msg << name << " is not complete (||sum - I||_max = " << defect << ")";
        throw ValidationError(msg.str());
    }
}

}  // namespace

void validate_pm(const PmStrategy& s, const ValidationProfile& profile) {
    if (s.d < 2) throw ValidationError("strategy dimension must be >= 2");
    if (s.states.size() != static_cast<std::size_t>(2 * s.d))
        throw ValidationError("strategy must contain 2d states");
    for (int x0 = 0; x0 < s.d; ++x0)
        for (int x = 0; x < 2; ++x) {
            std::ostringstream name;
            name << "state (x0=" << x0 << ", x=" << x << ")";
            check_density(s.state(x0, x), s.d, profile, name.str());
        }
    for (int y = 0; y < 2; ++y)
        check_povm(s.povms[y], s.d, profile, "measurement y=" + std::to_string(y));
}

void validate_bell(const BellStrategy& s, const ValidationProfile& profile) {
    if (s.d < 2) throw ValidationError("strategy dimension must be >= 2");
    if (s.psi.size() != static_cast<std::size_t>(s.d) * s.d)
        throw ValidationError("shared state must have d^2 amplitudes");
    double n2 = 0.0;
    for (const auto& z : s.psi) n2 += std::norm(z);
    if (std::abs(std::sqrt(n2) - 1.0) > 1e-9)
        throw ValidationError("shared state is not normalized");
    for (int x = 0; x < 2; ++x)
        check_povm(s.alice[x], s.d, profile, "Alice measurement x=" + std::to_string(x));
    for (int y = 0; y < 2; ++y)
        check_povm(s.bob[y], s.d, profile, "Bob measurement y=" + std::to_string(y));
}

void validate_behavior(const Behavior& b) {
    const int d = b.d;
    if (d < 2) throw ValidationError("behavior dimension must be >= 2");
    if (b.p.size() != static_cast<std::size_t>(d) * d * 2 * 2)
        throw ValidationError("behavior tensor has the wrong size");
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            double slice = 0.0;
            for (int a = 0; a < d; ++a)
                for (int bo = 0; bo < d; ++bo) {
                    const double v = b.at(a, bo, x, y);
                    if (v < tol::kDistNonneg) {
                        std::ostringstream msg;
                        msg << "behavior negative at (a=" << a << ", b=" << bo
                            << ", x=" << x << ", y=" << y << "): " << v;
                        throw ValidationError(msg.str());
                    }
                    slice += v;
                }
            if (std::abs(slice - 1.0) > tol::kBehaviorNorm) {
                std::ostringstream msg;
                msg << "behavior slice (x=" << x << ", y=" << y << ") sums to " << slice;
                throw ValidationError(msg.str());
            }
        }
}

double evaluate_qs(const GameSpec& game, const PmStrategy& strat) {
    if (strat.d != game.d) throw DomainError("strategy and game dimensions differ");
    validate_pm(strat);
    const int d = game.d;
    double total = 0.0;
    for (int x0 = 0; x0 < d; ++x0)
        for (int x = 0; x < 2; ++x) {
            const Matrix& rho = strat.state(x0, x);
            for (int y = 0; y < 2; ++y)
                for (int g = 0; g < d; ++g) {
                    const double w = game.s(x0, x, y, g);
                    if (w == 0.0) continue;
                    const Matrix& m = strat.povms[y][g];
                    // tr(rho M) accumulated directly, no temporary product
                    cx t = 0.0;
                    for (int i = 0; i < d; ++i)
                        for (int j = 0; j < d; ++j) t += rho(i, j) * m(j, i);
                    total += w * t.real();
                }
        }
    return total / (4.0 * d);
}

Behavior behavior_from_bell(const BellStrategy& strat) {
    validate_bell(strat);
    const int d = strat.d;
    Behavior beh;
    beh.d = d;
    beh.p.assign(static_cast<std::size_t>(d) * d * 2 * 2, 0.0);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) {
                    const Matrix op = kron(strat.alice[x][a], strat.bob[y][b]);
                    cx amp = 0.0;
                    for (int i = 0; i < d * d; ++i)
                        for (int j = 0; j < d * d; ++j)
                            amp += std::conj(strat.psi[i]) * op(i, j) * strat.psi[j];
                    beh.at(a, b, x, y) = amp.real();
                }
    validate_behavior(beh);
    return beh;
}

double evaluate_bell(const GameSpec& game, const Behavior& beh) {
    if (beh.d != game.d) throw DomainError("behavior and game dimensions differ");
    validate_behavior(beh);
    const int d = game.d;
    // Induced guess distribution: g = x0 + a - b mod d.
    std::vector<double> q(game.scores.size(), 0.0);
    for (int x0 = 0; x0 < d; ++x0)
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                for (int a = 0; a < d; ++a)
                    for (int b = 0; b < d; ++b) {
                        const int g = (x0 + a - b + d) % d;
                        q[game.cell(x0, x, y, g)] += beh.at(a, b, x, y);
                    }
    return payoff_from_guess_distribution(game, q);
}

double simulate_protocol(const GameSpec& game, const Behavior& beh) {
    if (beh.d != game.d) throw DomainError("behavior and game dimensions differ");
    validate_behavior(beh);
    const int d = game.d;
    double total = 0.0;
    for (int x0 = 0; x0 < d; ++x0)
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                for (int a = 0; a < d; ++a)
                    for (int b = 0; b < d; ++b) {
                        const int m = (x0 + a) % d;
                        const int g = (m - b + d) % d;
                        const double p = beh.at(a, b, x, y);
                        if (p == 0.0) continue;
                        for (int k = 0; k < game.k_max; ++k) {
                            if (g == target_f(d, x0, x, y, k))
                                total += game.coeffs[k] * p;
                            if (g == target_h(d, x0, x, y, k))
                                total -= game.coeffs[k] * p;
                        }
                    }
    return total / (4.0 * d);
}

}  // namespace qccp
