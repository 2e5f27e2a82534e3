#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "qccp/errors.hpp"
#include "qccp/linalg.hpp"
#include "qccp/rng.hpp"

using namespace qccp;

namespace {

Matrix random_hermitian(int dim, Rng& rng) {
    Matrix g = ginibre(dim, rng);
    return hermitize(g);
}

double eig_residual(const Matrix& h, const Eig& e) {
    // ||H V - V D||_max, plus the orthonormality defect of V.
    const int n = h.rows;
    Matrix hv = h * e.vectors;
    double resid = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            resid = std::max(resid,
                             std::abs(hv(i, j) - e.values[static_cast<std::size_t>(j)] *
                                                     e.vectors(i, j)));
    Matrix vtv = adjoint(e.vectors) * e.vectors;
    for (int i = 0; i < n; ++i) vtv(i, i) -= 1.0;
    return std::max(resid, max_abs(vtv));
}

}  // namespace

TEST_CASE("matrix arithmetic basics") {
    Matrix a = Matrix::zeros(2, 2);
    a(0, 1) = cx(1.0, 2.0);
    Matrix b = Matrix::identity(2);
    Matrix c = a + b;
    CHECK(c(0, 0) == cx(1.0, 0.0));
    CHECK(c(0, 1) == cx(1.0, 2.0));
    CHECK(adjoint(a)(1, 0) == cx(1.0, -2.0));
    CHECK(trace(b) == cx(2.0, 0.0));
    CHECK(max_abs(a) == doctest::Approx(std::sqrt(5.0)));
    CHECK(frobenius_norm(b) == doctest::Approx(std::sqrt(2.0)));
    CHECK_THROWS_AS(Matrix(0, 3), DomainError);
    CHECK_THROWS_AS(trace(Matrix::zeros(2, 3)), DomainError);
}

TEST_CASE("projector and outer products") {
    Ket u = {cx(1.0, 0.0), cx(0.0, 1.0)};
    Matrix p = projector(u);
    CHECK(p(0, 0) == cx(1.0, 0.0));
    CHECK(p(0, 1) == cx(0.0, -1.0));
    CHECK(p(1, 0) == cx(0.0, 1.0));
    CHECK(p(1, 1) == cx(1.0, 0.0));
    CHECK(outer(u, u)(0, 1) == p(0, 1));
    CHECK(normalized(u)[0] == cx(1.0 / std::sqrt(2.0), 0.0));
    CHECK_THROWS_AS(normalized(Ket{cx(0.0, 0.0)}), DomainError);
}

TEST_CASE("kron matches its defining index formula") {
    Rng rng(17);
    const Matrix a = ginibre(3, rng);
    const Matrix b = ginibre(4, rng);
    const Matrix k = kron(a, b);
    REQUIRE(k.rows == 12);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int p = 0; p < 4; ++p)
                for (int q = 0; q < 4; ++q)
                    CHECK(std::abs(k(i * 4 + p, j * 4 + q) - a(i, j) * b(p, q)) ==
                          doctest::Approx(0.0));
    CHECK(std::abs(trace(k) - trace(a) * trace(b)) < 1e-12);
    CHECK_THROWS_AS(kron(Matrix::identity(11), Matrix::identity(11)), DomainError);
}

TEST_CASE("partial traces match the index-sum definition") {
    Rng rng(19);
    const int d = 4;
    const Matrix m = ginibre(d * d, rng);
    const Matrix tb = partial_trace_b(m, d);
    const Matrix ta = partial_trace_a(m, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            cx acc = 0.0;
            for (int k = 0; k < d; ++k) acc += m(i * d + k, j * d + k);
            CHECK(std::abs(tb(i, j) - acc) < 1e-13);
            acc = 0.0;
            for (int k = 0; k < d; ++k) acc += m(k * d + i, k * d + j);
            CHECK(std::abs(ta(i, j) - acc) < 1e-13);
        }
    // tracing out either side preserves the full trace
    CHECK(std::abs(trace(tb) - trace(m)) < 1e-12);
    CHECK(std::abs(trace(ta) - trace(m)) < 1e-12);
    CHECK_THROWS_AS(partial_trace_b(Matrix::identity(5), 2), DomainError);
}

TEST_CASE("partial trace of a kron factorizes") {
    Rng rng(23);
    const Matrix a = ginibre(3, rng);
    const Matrix b = ginibre(3, rng);
    const Matrix k = kron(a, b);
    const Matrix tb = partial_trace_b(k, 3);
    const Matrix ta = partial_trace_a(k, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            CHECK(std::abs(tb(i, j) - trace(b) * a(i, j)) < 1e-12);
            CHECK(std::abs(ta(i, j) - trace(a) * b(i, j)) < 1e-12);
        }
}

TEST_CASE("eigendecomposition residual stays below 1e-10 over 1000 matrices") {
    const int dims[] = {2, 3, 4, 5, 6, 7, 8, 10, 12, 14, 16, 20, 24, 32, 50, 100};
    Rng rng(101);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const int dim = dims[i % 16];
        const Matrix h = random_hermitian(dim, rng);
        const Eig e = hermitian_eig(h);
        REQUIRE(static_cast<int>(e.values.size()) == dim);
        for (int j = 1; j < dim; ++j)
            CHECK(e.values[static_cast<std::size_t>(j - 1)] >=
                  e.values[static_cast<std::size_t>(j)]);
        worst = std::max(worst, eig_residual(h, e) / std::max(1.0, max_abs(h)));
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("eigendecomposition rejects bad input") {
    Matrix m = Matrix::zeros(2, 2);
    m(0, 1) = cx(1.0, 0.0);  // not Hermitian: M(1,0) = 0 != conj(M(0,1))
    CHECK_THROWS_AS(hermitian_eig(m), ValidationError);
    CHECK_THROWS_AS(hermitian_eig(Matrix::zeros(2, 3)), DomainError);
}

TEST_CASE("min and max eigenvalue agree with the full decomposition") {
    Rng rng(29);
    for (int t = 0; t < 20; ++t) {
        const Matrix h = random_hermitian(6, rng);
        const Eig e = hermitian_eig(h);
        CHECK(max_eigenvalue(h) == doctest::Approx(e.values.front()).epsilon(1e-12));
        CHECK(min_eigenvalue(h) == doctest::Approx(e.values.back()).epsilon(1e-12));
    }
}

TEST_CASE("spectral functions: psd_part, invsqrt, inverse") {
    Matrix h = Matrix::zeros(2, 2);
    h(0, 0) = 1.0;
    h(1, 1) = -2.0;
    const Matrix pp = psd_part(h);
    CHECK(std::abs(pp(0, 0) - cx(1.0, 0.0)) < 1e-14);
    CHECK(std::abs(pp(1, 1)) < 1e-14);

    Rng rng(31);
    const Matrix g = ginibre(5, rng);
    const Matrix psd = hermitize(g * adjoint(g)) + Matrix::identity(5);
    const Matrix is = invsqrt_psd(psd, 1e-14);
    const Matrix should_be_eye = is * psd * is;
    CHECK(max_abs(should_be_eye - Matrix::identity(5)) < 1e-10);
    const Matrix inv = inverse_psd(psd, 1e-14);
    CHECK(max_abs(inv * psd - Matrix::identity(5)) < 1e-9);
}

TEST_CASE("invsqrt_psd uses pseudo-inverse semantics on singular input") {
    Matrix h = Matrix::zeros(2, 2);
    h(0, 0) = 4.0;  // second eigenvalue is exactly 0
    const Matrix is = invsqrt_psd(h, 1e-12);
    CHECK(std::abs(is(0, 0) - cx(0.5, 0.0)) < 1e-12);
    CHECK(std::abs(is(1, 1)) < 1e-12);
}

TEST_CASE("gram_schmidt orthonormalizes and preserves the span") {
    Rng rng(37);
    std::vector<Ket> vecs;
    for (int i = 0; i < 3; ++i) {
        Ket v(5);
        for (auto& c : v) c = rng.cnormal();
        vecs.push_back(v);
    }
    const auto onb = gram_schmidt(vecs);
    REQUIRE(onb.size() == 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            cx ip = 0.0;
            for (int k = 0; k < 5; ++k) ip += std::conj(onb[i][k]) * onb[j][k];
            CHECK(std::abs(ip - (i == j ? cx(1.0, 0.0) : cx(0.0, 0.0))) < 1e-10);
        }
    // span check: each input vector is reproduced by its projections
    for (const Ket& v : vecs) {
        Ket rebuilt(5, cx(0.0, 0.0));
        for (const Ket& b : onb) {
            cx ip = 0.0;
            for (int k = 0; k < 5; ++k) ip += std::conj(b[k]) * v[k];
            for (int k = 0; k < 5; ++k) rebuilt[k] += ip * b[k];
        }
        for (int k = 0; k < 5; ++k) CHECK(std::abs(rebuilt[k] - v[k]) < 1e-9);
    }
}

TEST_CASE("gram_schmidt rejects dependent input") {
    Ket v = {cx(1.0, 0.0), cx(2.0, 0.0)};
    Ket w = {cx(2.0, 0.0), cx(4.0, 0.0)};
    CHECK_THROWS_AS(gram_schmidt({v, w}), DegeneracyError);
}

TEST_CASE("random unitaries are unitary and deterministic in the seed") {
    const Matrix u = random_unitary(6, 99);
    const Matrix v = random_unitary(6, 99);
    CHECK(max_abs(u - v) == 0.0);
    CHECK(max_abs(adjoint(u) * u - Matrix::identity(6)) < 1e-10);
    const Matrix w = random_unitary(6, 100);
    CHECK(max_abs(u - w) > 1e-3);
}

TEST_CASE("hermitize and is_hermitian") {
    Matrix m = Matrix::zeros(2, 2);
    m(0, 1) = cx(1.0, 1.0);
    CHECK(!is_hermitian(m, 1e-12));
    const Matrix h = hermitize(m);
    CHECK(is_hermitian(h, 1e-15));
    CHECK(h(0, 1) == cx(0.5, 0.5));
    CHECK(h(1, 0) == cx(0.5, -0.5));
}
