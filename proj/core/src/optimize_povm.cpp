#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qccp/errors.hpp"
#include "qccp/optimize.hpp"
#include "qccp/tolerances.hpp"
#include "seesaw_internal.hpp"

namespace qccp {

namespace {

double tr_prod_real(const Matrix& a, const Matrix& b) {
    // Re tr(a b) without forming the product
    double s = 0.0;
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j) {
            const cx& u = a(i, j);
            const cx& v = b(j, i);
            s += u.real() * v.real() - u.imag() * v.imag();
        }
    return s;
}

void check_operator_family(const std::vector<Matrix>& b, const char* what) {
    if (b.empty()) throw DomainError(std::string(what) + ": empty operator list");
    const int dim = b[0].rows;
    for (const Matrix& m : b) {
        if (m.rows != dim || m.cols != dim)
            throw DomainError(std::string(what) +
                              ": operators must be square with a common dimension");
        if (!is_hermitian(m, 1e-9))
            throw DomainError(std::string(what) + ": operators must be Hermitian");
    }
}

std::vector<Matrix> hermitized(const std::vector<Matrix>& b) {
    std::vector<Matrix> out;
    out.reserve(b.size());
    for (const Matrix& m : b) out.push_back(hermitize(m));
    return out;
}

double objective_value(const std::vector<Matrix>& b,
                       const std::vector<Matrix>& m) {
    double v = 0.0;
    for (std::size_t g = 0; g < b.size(); ++g) v += tr_prod_real(b[g], m[g]);
    return v;
}

// ---- log-det barrier fallback ------------------------------------------
//
// Maximize sum tr(B_g M_g) + mu * sum log det M_g over {sum M_g = I} by
// projected gradient ascent with backtracking, lowering mu geometrically.
// Used only when the fixed-point iteration fails to certify.
std::vector<Matrix> barrier_povm(const std::vector<Matrix>& b) {
    const int n = static_cast<int>(b.size());
    const int dim = b[0].rows;
    double scale = 0.0;
    for (const Matrix& m : b) scale = std::max(scale, max_abs(m));
    if (scale == 0.0) scale = 1.0;

    std::vector<Matrix> m(n);
    for (int g = 0; g < n; ++g) {
        m[g] = Matrix::identity(dim);
        m[g] *= cx(1.0 / n, 0.0);
    }
    auto barrier_obj = [&](const std::vector<Matrix>& mm, double mu) {
        double v = objective_value(b, mm);
        for (int g = 0; g < n; ++g) {
            Eig e = hermitian_eig(hermitize(mm[g]));
            for (double w : e.values) v += mu * std::log(std::max(w, 1e-300));
        }
        return v;
    };

    for (double mu = 0.1 * scale; mu > 1e-10 * scale; mu *= 0.25) {
        for (int step = 0; step < 40; ++step) {
            // Euclidean gradient B_g + mu M_g^{-1}, projected onto sum = 0.
            std::vector<Matrix> grad(n);
            Matrix mean = Matrix::zeros(dim, dim);
            for (int g = 0; g < n; ++g) {
                grad[g] = b[g] + cx(mu, 0.0) * inverse_psd(hermitize(m[g]), 1e-14);
                mean += grad[g];
            }
            mean *= cx(1.0 / n, 0.0);
            double gnorm = 0.0;
            for (int g = 0; g < n; ++g) {
                grad[g] -= mean;
                gnorm = std::max(gnorm, max_abs(grad[g]));
            }
            if (gnorm <= 1e-12 * scale) break;

            const double base = barrier_obj(m, mu);
            double t = 0.5 * mu / (gnorm * gnorm) * gnorm;  // ~ mu / gnorm
            bool accepted = false;
            for (int bt = 0; bt < 50; ++bt, t *= 0.5) {
                std::vector<Matrix> cand(n);
                double min_eig = std::numeric_limits<double>::infinity();
                for (int g = 0; g < n; ++g) {
                    cand[g] = m[g] + cx(t, 0.0) * grad[g];
                    min_eig = std::min(min_eig, min_eigenvalue(hermitize(cand[g])));
                }
                if (min_eig <= 0.0) continue;  // stay strictly interior
                if (barrier_obj(cand, mu) > base + 1e-15) {
                    m = std::move(cand);
                    accepted = true;
                    break;
                }
            }
            if (!accepted) break;
        }
    }
    for (int g = 0; g < n; ++g) m[g] = hermitize(m[g]);
    return m;
}

// Shift every operator by the same multiple of the identity so all are
// strictly PSD; with sum M_g = I the objective moves by exactly shift*dim.
std::vector<Matrix> shifted_psd(const std::vector<Matrix>& b) {
    const int dim = b[0].rows;
    double shift = 0.0;
    for (const Matrix& m : b) shift = std::max(shift, -min_eigenvalue(m));
    std::vector<Matrix> bs(b);
    Matrix eps_eye = Matrix::identity(dim);
    eps_eye *= cx(shift + 1e-12, 0.0);
    for (Matrix& m : bs) m += eps_eye;
    return bs;
}

// One fixed-point ascent step M_g <- K B_g M_g B_g K with the completeness
// normalizer K = (sum B M B)^{-1/2}. The K-sandwich restores sum M_g = I
// exactly in real arithmetic; the optional reprojection onto sum M_g = I
// only controls floating-point drift, so callers may apply it sparsely.
void fixed_point_step(const std::vector<Matrix>& bs, std::vector<Matrix>& m,
                      bool reproject) {
    const int n = static_cast<int>(bs.size());
    const int dim = bs[0].rows;
    Matrix l = Matrix::zeros(dim, dim);
    for (int g = 0; g < n; ++g) l += bs[g] * m[g] * bs[g];
    const Matrix k = invsqrt_psd(hermitize(l), 1e-300);
    for (int g = 0; g < n; ++g) m[g] = k * (bs[g] * m[g] * bs[g]) * k;
    if (!reproject) return;
    Matrix t = Matrix::zeros(dim, dim);
    for (int g = 0; g < n; ++g) t += m[g];
    const Matrix tm = invsqrt_psd(hermitize(t), 1e-14);
    for (int g = 0; g < n; ++g) m[g] = hermitize(tm * m[g] * tm);
}

// Tie-break for degenerate top eigenvalues: the candidate whose
// absolute-amplitude sequence is lexicographically largest.
int pick_top_column(const Eig& e, double tie_tol) {
    const int dim = e.vectors.rows;
    int best = 0;
    for (int i = 1; i < static_cast<int>(e.values.size()); ++i) {
        if (e.values[i] < e.values[0] - tie_tol) break;
        for (int j = 0; j < dim; ++j) {
            const double diff =
                std::abs(e.vectors(j, i)) - std::abs(e.vectors(j, best));
            if (diff > 1e-12) {
                best = i;
                break;
            }
            if (diff < -1e-12) break;
        }
    }
    return best;
}

}  // namespace

std::vector<Matrix> state_update(
    const GameSpec& game, const std::array<std::vector<Matrix>, 2>& povms) {
    const int d = game.d;
    for (int y = 0; y < 2; ++y) {
        if (static_cast<int>(povms[y].size()) != d)
            throw DomainError("state_update: measurements must have d outcomes");
        for (const Matrix& m : povms[y])
            if (m.rows != d || m.cols != d)
                throw DomainError("state_update: operator dimension mismatch");
    }
    std::vector<Matrix> states(static_cast<std::size_t>(2 * d));
    for (int x0 = 0; x0 < d; ++x0)
        for (int x = 0; x < 2; ++x) {
            Matrix a = Matrix::zeros(d, d);
            for (int y = 0; y < 2; ++y)
                for (int g = 0; g < d; ++g) {
                    const double w = game.s(x0, x, y, g);
                    if (w != 0.0) a += cx(w, 0.0) * povms[y][g];
                }
            a = hermitize(a);
            Ket v(static_cast<std::size_t>(d), cx(0.0, 0.0));
            if (max_abs(a) == 0.0) {
                v[0] = 1.0;  // zero operator: any state optimal, fixed choice
            } else {
                Eig e = hermitian_eig(a);
                const double tie_tol =
                    1e-12 * std::max(1.0, std::abs(e.values[0]));
                const int col = pick_top_column(e, tie_tol);
                for (int j = 0; j < d; ++j) v[j] = e.vectors(j, col);
            }
            states[static_cast<std::size_t>(x0) * 2 + x] = projector(v);
        }
    return states;
}

double povm_certificate(const std::vector<Matrix>& b,
                        const std::vector<Matrix>& povm) {
    check_operator_family(b, "povm_certificate");
    if (povm.size() != b.size())
        throw DomainError("povm_certificate: outcome count mismatch");
    const int dim = b[0].rows;
    Matrix y = Matrix::zeros(dim, dim);
    double val = 0.0;
    for (std::size_t g = 0; g < b.size(); ++g) {
        y += b[g] * povm[g];
        val += tr_prod_real(b[g], povm[g]);
    }
    y = hermitize(y);
    // Two dual-feasible upper bounds on the optimum, built from Y:
    //   Y + lam*I        with lam = max_g lambda_max(B_g - Y)^+, and
    //   Y + sum_g (B_g - Y)^+   (the PSD parts; each B_g - Y is dominated
    //                            by its own positive part alone).
    // The second is much tighter when only a few eigendirections of some
    // B_g - Y poke above zero, which is the generic situation near a
    // fixed point; the first wins when the excess is spread evenly.
    double lam = 0.0;
    double pos_sum = 0.0;
    for (std::size_t g = 0; g < b.size(); ++g) {
        const Eig eig = hermitian_eig(hermitize(b[g] - y));
        lam = std::max(lam, eig.values.front());
        for (double v : eig.values) pos_sum += std::max(v, 0.0);
    }
    lam = std::max(lam, 0.0);
    return trace(y).real() + std::min(lam * dim, pos_sum) - val;
}

PovmResult povm_update(const std::vector<Matrix>& b_in, double certificate_eps,
                       const std::vector<Matrix>* warm) {
    check_operator_family(b_in, "povm_update");
    const std::vector<Matrix> b = hermitized(b_in);
    const int n = static_cast<int>(b.size());
    const int dim = b[0].rows;

    const std::vector<Matrix> bs = shifted_psd(b);

    std::vector<Matrix> m(static_cast<std::size_t>(n));
    if (warm != nullptr && static_cast<int>(warm->size()) == n &&
        (*warm)[0].rows == dim) {
        // Blend toward the barycenter so rank-deficient warm starts can move.
        Matrix mix = Matrix::identity(dim);
        mix *= cx(0.02 / n, 0.0);
        for (int g = 0; g < n; ++g) m[g] = cx(0.98, 0.0) * (*warm)[g] + mix;
    } else {
        for (int g = 0; g < n; ++g) {
            m[g] = Matrix::identity(dim);
            m[g] *= cx(1.0 / n, 0.0);
        }
    }

    PovmResult best;
    best.gap = std::numeric_limits<double>::infinity();
    constexpr int kMaxIter = 3000;
    for (int it = 0; it < kMaxIter; ++it) {
        fixed_point_step(bs, m, true);

        if (it % 5 == 4 || it == kMaxIter - 1) {
            const double gap = povm_certificate(b, m);
            if (gap < best.gap) {
                best.povm = m;
                best.value = objective_value(b, m);
                best.gap = gap;
                best.iterations = it + 1;
            }
            if (gap <= certificate_eps) return best;
            // Stalled fixed point: no point burning the full budget.
            if (it >= 500 && gap > 0.9 * best.gap && best.iterations < it - 200)
                break;
        }
    }

    // Fallback: interior-point ascent on the original (unshifted) operators.
    std::vector<Matrix> mf = barrier_povm(b);
    const double fgap = povm_certificate(b, mf);
    if (fgap < best.gap) {
        best.povm = std::move(mf);
        best.value = objective_value(b, best.povm);
        best.gap = fgap;
        best.used_fallback = true;
    }
    if (best.gap <= certificate_eps) return best;

    std::ostringstream msg;
    msg << "povm_update failed to certify optimality: best certificate gap "
        << best.gap << " exceeds " << certificate_eps;
    throw NumericError(msg.str());
}

namespace seesaw_detail {

std::vector<Matrix> povm_improve(const std::vector<Matrix>& b_in,
                                 const std::vector<Matrix>& warm, int steps) {
    const std::vector<Matrix> b = hermitized(b_in);
    const std::vector<Matrix> bs = shifted_psd(b);
    const int dim = b[0].rows;
    std::vector<Matrix> m(warm);
    for (int it = 0; it < steps; ++it)
        fixed_point_step(bs, m, it % 5 == 4 || it == steps - 1);
    // Clip rounding-induced negative parts and restore completeness. The
    // congruence steps preserve the sign of any eigenvalue, so a tiny
    // negative one injected by cancellation noise would otherwise survive
    // and grow across see-saw cycles.
    Matrix t = Matrix::zeros(dim, dim);
    for (Matrix& mg : m) {
        mg = psd_part(hermitize(mg));
        t += mg;
    }
    const Matrix tm = invsqrt_psd(hermitize(t), 1e-14);
    for (Matrix& mg : m) mg = hermitize(tm * mg * tm);
    return m;
}

}  // namespace seesaw_detail

// ---- constrained variants ----------------------------------------------

namespace {

// Projection onto the affine set {sum M = I, tr M_g = 1}. Requires the
// outcome count to equal the dimension (otherwise the set is empty).
void affine_project(std::vector<Matrix>& m, int dim) {
    const int n = static_cast<int>(m.size());
    Matrix lam = Matrix::zeros(dim, dim);
    for (const Matrix& x : m) lam += x;
    lam -= Matrix::identity(dim);
    lam *= cx(1.0 / n, 0.0);
    const double tr_lam = trace(lam).real();
    for (Matrix& x : m) {
        const double nu = (trace(x).real() - tr_lam - 1.0) / dim;
        x -= lam;
        for (int i = 0; i < dim; ++i) x(i, i) -= nu;
    }
}

// Dykstra alternating projections onto the affine set above intersected with
// the PSD cone (per element). Output is PSD by construction; completeness and
// unit traces hold up to the convergence tolerance.
std::vector<Matrix> dykstra_project(std::vector<Matrix> x, int dim,
                                    int max_iters = 60, double tol = 1e-11) {
    const int n = static_cast<int>(x.size());
    std::vector<Matrix> p(n, Matrix::zeros(dim, dim));
    std::vector<Matrix> q(n, Matrix::zeros(dim, dim));
    for (int it = 0; it < max_iters; ++it) {
        std::vector<Matrix> y(n);
        for (int g = 0; g < n; ++g) y[g] = x[g] + p[g];
        affine_project(y, dim);
        for (int g = 0; g < n; ++g) p[g] = x[g] + p[g] - y[g];
        double delta = 0.0;
        for (int g = 0; g < n; ++g) {
            Matrix z = psd_part(hermitize(y[g] + q[g]));
            q[g] = y[g] + q[g] - z;
            delta = std::max(delta, max_abs(z - x[g]));
            x[g] = std::move(z);
        }
        if (delta < tol) break;
    }
    return x;
}

double max_trace_deviation(const std::vector<Matrix>& m) {
    double dev = 0.0;
    for (const Matrix& x : m) dev = std::max(dev, std::abs(trace(x).real() - 1.0));
    return dev;
}

double completeness_defect(const std::vector<Matrix>& m, int dim) {
    Matrix s = Matrix::zeros(dim, dim);
    for (const Matrix& x : m) s += x;
    s -= Matrix::identity(dim);
    return max_abs(s);
}

PovmResult trace_one_update(const std::vector<Matrix>& b,
                            const std::vector<Matrix>* warm) {
    const int n = static_cast<int>(b.size());
    const int dim = b[0].rows;
    if (n != dim)
        throw DomainError(
            "trace-one measurements need outcome count equal to dimension "
            "(sum of unit traces must equal tr I)");

    std::vector<Matrix> m;
    if (warm != nullptr && static_cast<int>(warm->size()) == n &&
        (*warm)[0].rows == dim) {
        m = dykstra_project(*warm, dim);
    } else {
        m.assign(static_cast<std::size_t>(n), Matrix::identity(dim));
        for (Matrix& x : m) x *= cx(1.0 / n, 0.0);
    }

    double scale = 0.0;
    for (const Matrix& x : b) scale = std::max(scale, max_eigenvalue(hermitize(x)));
    for (const Matrix& x : b)
        scale = std::max(scale, -min_eigenvalue(hermitize(x)));
    if (scale <= 0.0) scale = 1.0;

    double value = objective_value(b, m);
    std::vector<Matrix> best_m = m;
    double best_value = value;
    double eta = 0.15 / scale;
    int steps = 0;
    constexpr int kMaxSteps = 60;
    for (; steps < kMaxSteps; ++steps) {
        std::vector<Matrix> cand(static_cast<std::size_t>(n));
        double cand_value = -std::numeric_limits<double>::infinity();
        bool improved = false;
        for (int bt = 0; bt < 12; ++bt, eta *= 0.5) {
            for (int g = 0; g < n; ++g) cand[g] = m[g] + cx(eta, 0.0) * b[g];
            cand = dykstra_project(std::move(cand), dim);
            cand_value = objective_value(b, cand);
            if (cand_value > value) {
                improved = true;
                break;
            }
        }
        if (!improved) break;
        const double gain = cand_value - value;
        m = std::move(cand);
        value = cand_value;
        if (value > best_value && completeness_defect(m, dim) < 1e-8 &&
            max_trace_deviation(m) < 1e-8) {
            best_value = value;
            best_m = m;
        }
        if (gain < tol::kStepImprovement) break;
        eta = std::min(eta * 2.0, 0.15 / scale);  // recover after backtracking
    }

    PovmResult out;
    out.povm = std::move(best_m);
    out.value = best_value;
    out.gap = povm_certificate(b, out.povm);  // vs the unconstrained optimum
    out.iterations = steps;
    return out;
}

// Objective and Euclidean gradient for the rank-one-projective problem:
// f(U) = sum_g <u_g|B_g|u_g>, gradient column g = B_g u_g.
double basis_objective(const std::vector<Matrix>& b, const Matrix& u) {
    const int dim = u.rows;
    double v = 0.0;
    for (int g = 0; g < static_cast<int>(b.size()); ++g) {
        cx acc = 0.0;
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                acc += std::conj(u(i, g)) * b[g](i, j) * u(j, g);
        v += acc.real();
    }
    return v;
}

Matrix polar_unitary(const Matrix& a) {
    return a * invsqrt_psd(hermitize(adjoint(a) * a), 1e-20);
}

PovmResult rank_one_update(const std::vector<Matrix>& b,
                           const std::vector<Matrix>* warm) {
    const int n = static_cast<int>(b.size());
    const int dim = b[0].rows;
    if (n != dim)
        throw DomainError(
            "rank-one projective measurements need outcome count equal to "
            "dimension (orthonormal basis has exactly dim elements)");

    // Initial basis: top eigenvectors of a warm POVM orthonormalized, else
    // the eigenbasis of sum_g B_g.
    Matrix u = Matrix::zeros(dim, dim);
    bool have_init = false;
    if (warm != nullptr && static_cast<int>(warm->size()) == n &&
        (*warm)[0].rows == dim) {
        std::vector<Ket> cols;
        cols.reserve(static_cast<std::size_t>(n));
        for (int g = 0; g < n; ++g) {
            Eig e = hermitian_eig(hermitize((*warm)[g]));
            Ket v(static_cast<std::size_t>(dim));
            for (int i = 0; i < dim; ++i) v[i] = e.vectors(i, 0);
            cols.push_back(std::move(v));
        }
        try {
            cols = gram_schmidt(cols);
            for (int g = 0; g < n; ++g)
                for (int i = 0; i < dim; ++i) u(i, g) = cols[g][i];
            have_init = true;
        } catch (const DegeneracyError&) {
            have_init = false;  // overlapping top eigenvectors: use eigenbasis
        }
    }
    if (!have_init) {
        Matrix total = Matrix::zeros(dim, dim);
        for (const Matrix& x : b) total += x;
        Eig e = hermitian_eig(hermitize(total));
        u = e.vectors;
    }

    // Assignment refinement: permute columns so outcome g gets the column
    // maximizing sum_g <u_col|B_g|u_col> (optimal via Hungarian matching).
    {
        std::vector<double> score(static_cast<std::size_t>(n) * n);
        for (int g = 0; g < n; ++g)
            for (int j = 0; j < n; ++j) {
                cx acc = 0.0;
                for (int i = 0; i < dim; ++i)
                    for (int i2 = 0; i2 < dim; ++i2)
                        acc += std::conj(u(i, j)) * b[g](i, i2) * u(i2, j);
                score[static_cast<std::size_t>(g) * n + j] = acc.real();
            }
        const std::vector<int> assign = max_assignment(score, n);
        Matrix permuted = Matrix::zeros(dim, dim);
        for (int g = 0; g < n; ++g)
            for (int i = 0; i < dim; ++i) permuted(i, g) = u(i, assign[g]);
        u = std::move(permuted);
    }

    double scale = 0.0;
    for (const Matrix& x : b) scale = std::max(scale, max_abs(x));
    if (scale <= 0.0) scale = 1.0;

    double value = basis_objective(b, u);
    double t0 = 0.5 / scale;
    int steps = 0;
    constexpr int kMaxSteps = 200;
    for (; steps < kMaxSteps; ++steps) {
        Matrix grad = Matrix::zeros(dim, dim);
        for (int g = 0; g < n; ++g)
            for (int i = 0; i < dim; ++i) {
                cx acc = 0.0;
                for (int j = 0; j < dim; ++j) acc += b[g](i, j) * u(j, g);
                grad(i, g) = acc;
            }
        // Riemannian gradient: project onto the tangent space at U.
        const Matrix xi = grad - u * hermitize(adjoint(u) * grad);
        if (max_abs(xi) <= 1e-13 * scale) break;

        bool improved = false;
        double t = t0;
        for (int bt = 0; bt < 30; ++bt, t *= 0.5) {
            const Matrix cand = polar_unitary(u + cx(t, 0.0) * xi);
            const double cv = basis_objective(b, cand);
            if (cv > value) {
                const double gain = cv - value;
                u = cand;
                value = cv;
                improved = true;
                t0 = std::min(2.0 * t, 1.0 / scale);
                if (gain < tol::kStepImprovement) steps = kMaxSteps;  // done
                break;
            }
        }
        if (!improved) break;
    }

    PovmResult out;
    out.povm.reserve(static_cast<std::size_t>(n));
    for (int g = 0; g < n; ++g) {
        Ket v(static_cast<std::size_t>(dim));
        for (int i = 0; i < dim; ++i) v[i] = u(i, g);
        out.povm.push_back(projector(normalized(std::move(v))));
    }
    out.value = objective_value(b, out.povm);
    out.gap = povm_certificate(b, out.povm);
    out.iterations = std::min(steps, kMaxSteps);
    return out;
}

}  // namespace

PovmResult povm_update_constrained(const std::vector<Matrix>& b_in,
                                   Constraint constraint,
                                   const std::vector<Matrix>* warm) {
    check_operator_family(b_in, "povm_update_constrained");
    const std::vector<Matrix> b = hermitized(b_in);
    switch (constraint) {
        case Constraint::UNCONSTRAINED:
            return povm_update(b, tol::kCertificateDefault, warm);
        case Constraint::TRACE_ONE:
            return trace_one_update(b, warm);
        case Constraint::RANK_ONE_PROJECTIVE:
            return rank_one_update(b, warm);
    }
    throw DomainError("unknown measurement constraint");
}

std::vector<int> max_assignment(const std::vector<double>& score, int n) {
    if (n <= 0) throw DomainError("max_assignment: size must be positive");
    if (score.size() != static_cast<std::size_t>(n) * n)
        throw DomainError("max_assignment: score matrix must be n x n");
    // Shortest-augmenting-path assignment on cost = -score (1-based buffers).
    const double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<int> p(static_cast<std::size_t>(n) + 1, 0);
    std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);
    auto cost = [&](int i, int j) {
        return -score[(static_cast<std::size_t>(i) - 1) * n + (j - 1)];
    };
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(n) + 1, kInf);
        std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            double delta = kInf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0, j) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> assign(static_cast<std::size_t>(n), -1);
    for (int j = 1; j <= n; ++j)
        if (p[j] != 0) assign[static_cast<std::size_t>(p[j]) - 1] = j - 1;
    return assign;
}

}  // namespace qccp
