#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "qccp/rng.hpp"

namespace qccp {

using cx = std::complex<double>;
using Ket = std::vector<cx>;

// Dense complex matrix, row-major. Sized for operators up to dimension 100.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<cx> a;

    Matrix() = default;
    Matrix(int r, int c);

    cx& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    const cx& operator()(int i, int j) const {
        return a[static_cast<std::size_t>(i) * cols + j];
    }

    static Matrix zeros(int r, int c);
    static Matrix identity(int n);

    Matrix& operator+=(const Matrix& o);
    Matrix& operator-=(const Matrix& o);
    Matrix& operator*=(cx s);
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(cx s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);  // matrix product

Matrix adjoint(const Matrix& m);
cx trace(const Matrix& m);
double frobenius_norm(const Matrix& m);
double max_abs(const Matrix& m);
Matrix hermitize(const Matrix& m);                   // (M + M^dag)/2
bool is_hermitian(const Matrix& m, double tol);

Matrix outer(const Ket& u, const Ket& v);            // |u><v|
Matrix projector(const Ket& u);                      // |u><u| (u not renormalized)
Ket normalized(Ket v);                               // unit Euclidean norm

// Kronecker product; composite index (i, k) -> i * B.rows + k. The result
// dimension is capped at 100 (DomainError beyond).
Matrix kron(const Matrix& a, const Matrix& b);

// Partial traces of an operator on C^{d*d} with the composite index above.
// (Tr_B M)(i,j) = sum_k M(i*d+k, j*d+k);   (Tr_A M)(k,l) = sum_i M(i*d+k, i*d+l).
Matrix partial_trace_b(const Matrix& m, int d);
Matrix partial_trace_a(const Matrix& m, int d);

// Hermitian eigendecomposition by cyclic Jacobi rotations.
// values sorted descending; vectors' column i is the eigenvector of values[i].
// Input must be Hermitian within 1e-12 (max norm); it is symmetrized before
// iterating. Convergence: off-diagonal Frobenius mass < 1e-14 * ||H||_F,
// at most 100 sweeps (NumericError with the residual otherwise).
struct Eig {
    std::vector<double> values;
    Matrix vectors;
};
Eig hermitian_eig(const Matrix& h);

double min_eigenvalue(const Matrix& h);
double max_eigenvalue(const Matrix& h);

// f applied to the spectrum: V f(diag) V^dag for Hermitian input.
Matrix spectral_map(const Matrix& h, double (*f)(double));
Matrix psd_part(const Matrix& h);                    // negative eigenvalues clipped
// (H + floor-clip)^{-1/2} on the eigenvalues; eigenvalues below `floor`
// contribute 0 (pseudo-inverse semantics for rank-deficient input).
Matrix invsqrt_psd(const Matrix& h, double floor_eig);
Matrix inverse_psd(const Matrix& h, double floor_eig);

// Two-pass modified Gram-Schmidt. Preserves span; DegeneracyError when a
// residual norm falls below the independence floor (1e-6).
std::vector<Ket> gram_schmidt(const std::vector<Ket>& vectors);

// Orthonormalization of an i.i.d. standard complex Gaussian matrix drawn
// from the given stream; deterministic in (dim, seed).
Matrix random_unitary(int dim, std::uint64_t seed);
Matrix ginibre(int dim, Rng& rng);
Matrix random_unitary_from(int dim, Rng& rng);

}  // namespace qccp
