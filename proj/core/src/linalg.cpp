#include "qccp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qccp/errors.hpp"
#include "qccp/tolerances.hpp"

namespace qccp {

Matrix::Matrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {
    if (r <= 0 || c <= 0) throw DomainError("Matrix dimensions must be positive");
}

Matrix Matrix::zeros(int r, int c) { return Matrix(r, c); }

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix& Matrix::operator+=(const Matrix& o) {
    if (rows != o.rows || cols != o.cols) throw DomainError("matrix shape mismatch in +=");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += o.a[i];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
    if (rows != o.rows || cols != o.cols) throw DomainError("matrix shape mismatch in -=");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= o.a[i];
    return *this;
}

Matrix& Matrix::operator*=(cx s) {
    for (auto& v : a) v *= s;
    return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(cx s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) throw DomainError("matrix shape mismatch in product");
    Matrix out(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i) {
        for (int k = 0; k < a.cols; ++k) {
            const cx aik = a(i, k);
            if (aik == cx{}) continue;
            for (int j = 0; j < b.cols; ++j) out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

Matrix adjoint(const Matrix& m) {
    Matrix out(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) out(j, i) = std::conj(m(i, j));
    return out;
}

cx trace(const Matrix& m) {
    if (m.rows != m.cols) throw DomainError("trace requires a square matrix");
    cx t = 0.0;
    for (int i = 0; i < m.rows; ++i) t += m(i, i);
    return t;
}

double frobenius_norm(const Matrix& m) {
    double s = 0.0;
    for (const auto& v : m.a) s += std::norm(v);
    return std::sqrt(s);
}

double max_abs(const Matrix& m) {
    double s = 0.0;
    for (const auto& v : m.a) s = std::max(s, std::abs(v));
    return s;
}

Matrix hermitize(const Matrix& m) {
    if (m.rows != m.cols) throw DomainError("hermitize requires a square matrix");
    Matrix out(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j)
            out(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    return out;
}

bool is_hermitian(const Matrix& m, double tolerance) {
    if (m.rows != m.cols) return false;
    for (int i = 0; i < m.rows; ++i)
        for (int j = i; j < m.cols; ++j)
            if (std::abs(m(i, j) - std::conj(m(j, i))) > tolerance) return false;
    return true;
}

Matrix outer(const Ket& u, const Ket& v) {
    Matrix out(static_cast<int>(u.size()), static_cast<int>(v.size()));
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j)
            out(static_cast<int>(i), static_cast<int>(j)) = u[i] * std::conj(v[j]);
    return out;
}

Matrix projector(const Ket& u) { return outer(u, u); }

Ket normalized(Ket v) {
    double n2 = 0.0;
    for (const auto& z : v) n2 += std::norm(z);
    const double n = std::sqrt(n2);
    if (n == 0.0) throw DomainError("cannot normalize the zero vector");
    for (auto& z : v) z /= n;
    return v;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    const long long rr = static_cast<long long>(a.rows) * b.rows;
    const long long cc = static_cast<long long>(a.cols) * b.cols;
    if (rr > tol::kDimCap || cc > tol::kDimCap)
        throw DomainError("kron result exceeds the dimension cap of 100");
    Matrix out(static_cast<int>(rr), static_cast<int>(cc));
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j) {
            const cx aij = a(i, j);
            if (aij == cx{}) continue;
            for (int k = 0; k < b.rows; ++k)
                for (int l = 0; l < b.cols; ++l)
                    out(i * b.rows + k, j * b.cols + l) = aij * b(k, l);
        }
    return out;
}

Matrix partial_trace_b(const Matrix& m, int d) {
    if (m.rows != m.cols || m.rows != d * d)
        throw DomainError("partial_trace_b requires a d*d-dimensional square matrix");
    Matrix out(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            cx s = 0.0;
            for (int k = 0; k < d; ++k) s += m(i * d + k, j * d + k);
            out(i, j) = s;
        }
    return out;
}

Matrix partial_trace_a(const Matrix& m, int d) {
    if (m.rows != m.cols || m.rows != d * d)
        throw DomainError("partial_trace_a requires a d*d-dimensional square matrix");
    Matrix out(d, d);
    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
            cx s = 0.0;
            for (int i = 0; i < d; ++i) s += m(i * d + k, i * d + l);
            out(k, l) = s;
        }
    return out;
}

Eig hermitian_eig(const Matrix& h) {
    if (h.rows != h.cols) throw DomainError("hermitian_eig requires a square matrix");
    const int n = h.rows;
    if (n > tol::kDimCap)
        throw DomainError("hermitian_eig dimension exceeds the cap of 100");
    if (!is_hermitian(h, tol::kHermitianInput))
        throw ValidationError("hermitian_eig input is not Hermitian within 1e-12");

    Matrix a = hermitize(h);
    Matrix v = Matrix::identity(n);
    const double norm = frobenius_norm(a);
    const double target = tol::kEigConvergence * norm;

    auto off_norm = [&]() {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) s += std::norm(a(i, j));
        return std::sqrt(s);
    };

    bool converged = norm == 0.0 || off_norm() <= target;
    int sweep = 0;
    for (; sweep < tol::kEigMaxSweeps && !converged; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cx apq = a(p, q);
                const double m = std::abs(apq);
                if (m <= 1e-300) {
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    continue;
                }
                // Phase-rotate column q to make the (p,q) block real, then
                // apply the symmetric Schur rotation that zeroes it.
                const cx phase = apq / m;  // e^{i phi}
                const double alpha = a(p, p).real();
                const double gamma = a(q, q).real();
                const double tau = (gamma - alpha) / (2.0 * m);
                const double t =
                    (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cx sp = s * phase;             // s e^{i phi}
                const cx spc = s * std::conj(phase); // s e^{-i phi}

                for (int j = 0; j < n; ++j) {
                    const cx apj = a(p, j);
                    const cx aqj = a(q, j);
                    a(p, j) = c * apj - sp * aqj;
                    a(q, j) = s * apj + c * phase * aqj;
                }
                for (int i = 0; i < n; ++i) {
                    const cx aip = a(i, p);
                    const cx aiq = a(i, q);
                    a(i, p) = c * aip - spc * aiq;
                    a(i, q) = s * aip + c * std::conj(phase) * aiq;
                    const cx vip = v(i, p);
                    const cx viq = v(i, q);
                    v(i, p) = c * vip - spc * viq;
                    v(i, q) = s * vip + c * std::conj(phase) * viq;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
        converged = off_norm() <= target;
    }
    if (!converged) {
        std::ostringstream msg;
        msg << "Jacobi eigensolver did not converge in " << tol::kEigMaxSweeps
            << " sweeps; off-diagonal residual " << off_norm() << " (target " << target
            << ")";
        throw NumericError(msg.str());
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
        return a(i, i).real() > a(j, j).real();
    });

    Eig out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (int col = 0; col < n; ++col) {
        out.values[col] = a(order[col], order[col]).real();
        for (int i = 0; i < n; ++i) out.vectors(i, col) = v(i, order[col]);
    }
    return out;
}

double min_eigenvalue(const Matrix& h) {
    const Eig e = hermitian_eig(h);
    return e.values.back();
}

double max_eigenvalue(const Matrix& h) {
    const Eig e = hermitian_eig(h);
    return e.values.front();
}

Matrix spectral_map(const Matrix& h, double (*f)(double)) {
    const Eig e = hermitian_eig(h);
    const int n = h.rows;
    Matrix out(n, n);
    for (int k = 0; k < n; ++k) {
        const double fv = f(e.values[k]);
        if (fv == 0.0) continue;
        for (int i = 0; i < n; ++i) {
            const cx vik = e.vectors(i, k);
            if (vik == cx{}) continue;
            for (int j = 0; j < n; ++j)
                out(i, j) += fv * vik * std::conj(e.vectors(j, k));
        }
    }
    return out;
}

Matrix psd_part(const Matrix& h) {
    return spectral_map(h, [](double x) { return x > 0.0 ? x : 0.0; });
}

namespace {
thread_local double g_floor = 0.0;
}

Matrix invsqrt_psd(const Matrix& h, double floor_eig) {
    g_floor = floor_eig;
    return spectral_map(h, [](double x) {
        return x > g_floor ? 1.0 / std::sqrt(x) : 0.0;
    });
}

Matrix inverse_psd(const Matrix& h, double floor_eig) {
    g_floor = floor_eig;
    return spectral_map(h, [](double x) { return x > g_floor ? 1.0 / x : 0.0; });
}

std::vector<Ket> gram_schmidt(const std::vector<Ket>& vectors) {
    std::vector<Ket> out;
    out.reserve(vectors.size());
    for (const auto& input : vectors) {
        if (input.empty()) throw DomainError("gram_schmidt: empty vector");
        if (!out.empty() && out.front().size() != input.size())
            throw DomainError("gram_schmidt: inconsistent vector dimensions");
        Ket v = normalized(input);
        // Two projection passes for numerical orthogonality.
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& u : out) {
                cx ip = 0.0;
                for (std::size_t i = 0; i < v.size(); ++i) ip += std::conj(u[i]) * v[i];
                for (std::size_t i = 0; i < v.size(); ++i) v[i] -= ip * u[i];
            }
        }
        double n2 = 0.0;
        for (const auto& z : v) n2 += std::norm(z);
        const double n = std::sqrt(n2);
        if (n <= tol::kGramSchmidtIndependence)
            throw DegeneracyError(
                "gram_schmidt: input vectors are numerically dependent (residual norm " +
                std::to_string(n) + ")");
        for (auto& z : v) z /= n;
        out.push_back(std::move(v));
    }
    return out;
}

Matrix ginibre(int dim, Rng& rng) {
    Matrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = rng.cnormal();
    return g;
}

Matrix random_unitary_from(int dim, Rng& rng) {
    if (dim < 1) throw DomainError("random_unitary requires dim >= 1");
    if (dim > tol::kDimCap)
        throw DomainError("random_unitary dimension exceeds the cap of 100");
    for (;;) {
        const Matrix g = ginibre(dim, rng);
        std::vector<Ket> cols(dim, Ket(dim));
        for (int j = 0; j < dim; ++j)
            for (int i = 0; i < dim; ++i) cols[j][i] = g(i, j);
        std::vector<Ket> ortho;
        try {
            ortho = gram_schmidt(cols);
        } catch (const DegeneracyError&) {
            continue;  // essentially impossible; redraw keeps determinism
        }
        Matrix u(dim, dim);
        for (int j = 0; j < dim; ++j)
            for (int i = 0; i < dim; ++i) u(i, j) = ortho[j][i];
        return u;
    }
}

Matrix random_unitary(int dim, std::uint64_t seed) {
    Rng rng(seed);
    return random_unitary_from(dim, rng);
}

}  // namespace qccp
