#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "qccp/errors.hpp"
#include "qccp/game.hpp"
#include "qccp/linalg.hpp"
#include "qccp/optimize.hpp"
#include "qccp/rng.hpp"
#include "seesaw_internal.hpp"

using namespace qccp;

namespace {

double objective(const std::vector<Matrix>& b, const std::vector<Matrix>& m) {
    double v = 0.0;
    for (std::size_t g = 0; g < b.size(); ++g) v += trace(b[g] * m[g]).real();
    return v;
}

void check_povm_valid(const std::vector<Matrix>& m, int dim,
                      double psd_tol = 1e-9, double comp_tol = 1e-9) {
    Matrix sum = Matrix::zeros(dim, dim);
    for (const Matrix& mg : m) {
        CHECK(min_eigenvalue(hermitize(mg)) >= -psd_tol);
        sum += mg;
    }
    sum -= Matrix::identity(dim);
    CHECK(max_abs(sum) <= comp_tol);
}

Matrix diag(const std::vector<double>& d) {
    Matrix m = Matrix::zeros(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
    return m;
}

Matrix random_hermitian(int dim, Rng& rng) {
    Matrix h(dim, dim);
    for (auto& e : h.a) e = rng.cnormal();
    return hermitize(h);
}

std::vector<Matrix> uniform_povm(int n, int dim) {
    std::vector<Matrix> m;
    for (int g = 0; g < n; ++g) {
        Matrix e = Matrix::identity(dim);
        e *= cx(1.0 / n, 0.0);
        m.push_back(e);
    }
    return m;
}

// Best permutation score by exhaustive search (for validating the Hungarian
// routine on small instances).
double brute_assignment(const std::vector<double>& score, int n) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    double best = -1e300;
    do {
        double v = 0.0;
        for (int g = 0; g < n; ++g)
            v += score[static_cast<std::size_t>(g) * n + perm[static_cast<std::size_t>(g)]];
        best = std::max(best, v);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace

TEST_CASE("diagonal objectives are solved by per-level argmax selection") {
    // For commuting diagonal B the optimum decouples per basis level:
    // value = sum_i max_g B_g(i,i).
    const std::vector<Matrix> b{diag({1.0, 0.0}), diag({0.0, 2.0}),
                                diag({0.5, 0.5})};
    const PovmResult res = povm_update(b);
    CHECK(res.value == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(res.gap <= 1e-7);
    check_povm_valid(res.povm, 2);
}

TEST_CASE("plus-minus objectives reach the trace norm") {
    // B_0 = A, B_1 = -A: the optimum is sum |lambda_i(A)|, attained by the
    // eigensign projectors.
    Rng rng(91);
    for (int dim : {2, 4, 6}) {
        const Matrix A = random_hermitian(dim, rng);
        const Eig eig = hermitian_eig(A);
        double tracenorm = 0.0;
        for (double v : eig.values) tracenorm += std::abs(v);

        const std::vector<Matrix> b{A, cx(-1.0, 0.0) * A};
        const PovmResult res = povm_update(b);
        CHECK(res.value == doctest::Approx(tracenorm).epsilon(1e-8));
        CHECK(res.gap <= 1e-7);
        check_povm_valid(res.povm, dim);

        // The analytic optimizer certifies with an essentially zero gap.
        Matrix pos = Matrix::zeros(dim, dim);
        for (int i = 0; i < dim; ++i) {
            if (eig.values[i] < 0.0) continue;
            Ket v(static_cast<std::size_t>(dim));
            for (int r = 0; r < dim; ++r) v[static_cast<std::size_t>(r)] = eig.vectors(r, i);
            pos += projector(v);
        }
        Matrix neg = Matrix::identity(dim);
        neg -= pos;
        CHECK(povm_certificate(b, {pos, neg}) <= 1e-12);
        CHECK(povm_certificate(b, {pos, neg}) >= -1e-12);
    }
}

TEST_CASE("zero objective is certified immediately") {
    const std::vector<Matrix> b{Matrix::zeros(3, 3), Matrix::zeros(3, 3)};
    const PovmResult res = povm_update(b);
    CHECK(std::abs(res.value) <= 1e-10);
    CHECK(res.gap <= 1e-9);
    check_povm_valid(res.povm, 3);
}

TEST_CASE("certificate dominates the optimality gap of feasible points") {
    // Weak duality: for any feasible M, certificate(B, M) >= opt - value(M).
    Rng rng(17);
    for (int trial = 0; trial < 8; ++trial) {
        const int dim = 2 + trial % 3;
        const int n = 2 + trial % 2;
        std::vector<Matrix> b;
        for (int g = 0; g < n; ++g) b.push_back(random_hermitian(dim, rng));
        const PovmResult res = povm_update(b);
        CHECK(res.gap <= 1e-7);
        check_povm_valid(res.povm, dim);

        const std::vector<Matrix> uni = uniform_povm(n, dim);
        const double cert = povm_certificate(b, uni);
        CHECK(cert >= -1e-12);
        CHECK(cert >= res.value - objective(b, uni) - 1e-6);
    }
}

TEST_CASE("warm starts converge to the same optimum") {
    Rng rng(5);
    std::vector<Matrix> b{random_hermitian(3, rng), random_hermitian(3, rng),
                          random_hermitian(3, rng)};
    const PovmResult cold = povm_update(b);
    const std::vector<Matrix> warm = uniform_povm(3, 3);
    const PovmResult warmed = povm_update(b, 1e-7, &warm);
    CHECK(warmed.value == doctest::Approx(cold.value).epsilon(1e-7));
}

TEST_CASE("non-Hermitian objectives are rejected up front") {
    Rng rng(23);
    Matrix g0(2, 2);
    for (auto& e : g0.a) e = rng.cnormal();  // deliberately non-Hermitian
    Matrix g1 = Matrix::zeros(2, 2);
    g1 -= hermitize(g0);
    CHECK_THROWS_AS(povm_update({g0, g1}), DomainError);
    CHECK_THROWS_AS(povm_update_constrained({g0, g1}, Constraint::UNCONSTRAINED),
                    DomainError);
    // Rounding-level skew is symmetrized silently.
    Matrix near = hermitize(g0);
    near(0, 1) += cx(0.0, 1e-14);
    CHECK_NOTHROW(povm_update({near, g1}));
}

TEST_CASE("Hungarian assignment matches brute force") {
    Rng rng(7);
    for (int n = 1; n <= 6; ++n) {
        for (int trial = 0; trial < 6; ++trial) {
            std::vector<double> score(static_cast<std::size_t>(n) * n);
            for (auto& s : score) s = rng.normal();
            const std::vector<int> assign = max_assignment(score, n);
            // Must be a permutation.
            std::vector<int> seen(static_cast<std::size_t>(n), 0);
            double v = 0.0;
            for (int g = 0; g < n; ++g) {
                REQUIRE(assign[static_cast<std::size_t>(g)] >= 0);
                REQUIRE(assign[static_cast<std::size_t>(g)] < n);
                seen[static_cast<std::size_t>(assign[static_cast<std::size_t>(g)])]++;
                v += score[static_cast<std::size_t>(g) * n + assign[static_cast<std::size_t>(g)]];
            }
            for (int j = 0; j < n; ++j) CHECK(seen[static_cast<std::size_t>(j)] == 1);
            CHECK(v == doctest::Approx(brute_assignment(score, n)).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(max_assignment({}, 0), DomainError);
    CHECK_THROWS_AS(max_assignment({1.0, 2.0}, 2), DomainError);
}

TEST_CASE("trace-one solutions satisfy their constraints") {
    Rng rng(41);
    for (int dim : {2, 3, 4}) {
        std::vector<Matrix> b;
        for (int g = 0; g < dim; ++g) b.push_back(random_hermitian(dim, rng));
        const PovmResult res = povm_update_constrained(b, Constraint::TRACE_ONE);
        check_povm_valid(res.povm, dim, 1e-8, 1e-8);
        for (const Matrix& mg : res.povm)
            CHECK(trace(mg).real() == doctest::Approx(1.0).epsilon(1e-7));
        // Constrained optimum cannot beat the unconstrained one.
        const PovmResult free = povm_update(b);
        CHECK(res.value <= free.value + 1e-6);
        CHECK(res.value == doctest::Approx(objective(b, res.povm)).epsilon(1e-9));
    }
}

TEST_CASE("trace-one requires outcome count equal to dimension") {
    std::vector<Matrix> b{Matrix::identity(3), Matrix::identity(3)};
    CHECK_THROWS_AS(povm_update_constrained(b, Constraint::TRACE_ONE),
                    DomainError);
    CHECK_THROWS_AS(povm_update_constrained(b, Constraint::RANK_ONE_PROJECTIVE),
                    DomainError);
}

TEST_CASE("projective solutions form an orthonormal rank-one measurement") {
    Rng rng(53);
    for (int dim : {2, 3, 4}) {
        std::vector<Matrix> b;
        for (int g = 0; g < dim; ++g) b.push_back(random_hermitian(dim, rng));
        const PovmResult res =
            povm_update_constrained(b, Constraint::RANK_ONE_PROJECTIVE);
        check_povm_valid(res.povm, dim, 1e-9, 1e-8);
        for (const Matrix& mg : res.povm) {
            CHECK(trace(mg).real() == doctest::Approx(1.0).epsilon(1e-8));
            // Idempotent => projector.
            Matrix delta = mg * mg;
            delta -= mg;
            CHECK(max_abs(delta) <= 1e-8);
        }
        for (std::size_t g = 0; g + 1 < res.povm.size(); ++g) {
            Matrix cross = res.povm[g] * res.povm[g + 1];
            CHECK(max_abs(cross) <= 1e-8);
        }
        const PovmResult free = povm_update(b);
        CHECK(res.value <= free.value + 1e-6);
    }
}

TEST_CASE("projective optimum on diagonal objectives is the best assignment") {
    // With commuting diagonal B the projective problem reduces to assigning
    // basis vectors to outcomes.
    const int dim = 4;
    Rng rng(67);
    std::vector<Matrix> b;
    std::vector<double> score(static_cast<std::size_t>(dim) * dim);
    for (int g = 0; g < dim; ++g) {
        std::vector<double> ds(static_cast<std::size_t>(dim));
        for (int j = 0; j < dim; ++j) {
            ds[static_cast<std::size_t>(j)] = rng.normal();
            score[static_cast<std::size_t>(g) * dim + j] = ds[static_cast<std::size_t>(j)];
        }
        b.push_back(diag(ds));
    }
    const PovmResult res =
        povm_update_constrained(b, Constraint::RANK_ONE_PROJECTIVE);
    CHECK(res.value == doctest::Approx(brute_assignment(score, dim)).epsilon(1e-7));
}

TEST_CASE("state update returns top-eigenvector projectors") {
    const GameSpec game = build_game(3);
    const int d = game.d;
    // Identity-basis projective measurements for both settings.
    std::array<std::vector<Matrix>, 2> povms;
    for (int y = 0; y < 2; ++y)
        for (int g = 0; g < d; ++g) {
            Ket e(static_cast<std::size_t>(d), cx(0.0, 0.0));
            e[static_cast<std::size_t>(g)] = 1.0;
            povms[y].push_back(projector(e));
        }
    const std::vector<Matrix> states = state_update(game, povms);
    REQUIRE(static_cast<int>(states.size()) == 2 * d);
    for (int x0 = 0; x0 < d; ++x0)
        for (int x = 0; x < 2; ++x) {
            // The subproblem operator is diagonal here:
            // A(i,i) = sum_y s(i | x0, x, y).
            int arg = 0;
            double best = -1e300;
            for (int i = 0; i < d; ++i) {
                const double a = game.s(x0, x, 0, i) + game.s(x0, x, 1, i);
                if (a > best + 1e-12) {
                    best = a;
                    arg = i;
                }
            }
            const Matrix& rho = states[static_cast<std::size_t>(x0) * 2 + x];
            CHECK(trace(rho).real() == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(std::abs(rho(arg, arg).real() - 1.0) <= 1e-9);
        }
}

TEST_CASE("degenerate state subproblems resolve to the first basis vector") {
    // Uniform measurements make every subproblem operator exactly zero
    // (scores are zero-sum), so the tie-break must pick |0><0| for all cells.
    const GameSpec game = build_game(4);
    std::array<std::vector<Matrix>, 2> povms{uniform_povm(4, 4),
                                             uniform_povm(4, 4)};
    const std::vector<Matrix> states = state_update(game, povms);
    for (const Matrix& rho : states) {
        CHECK(std::abs(rho(0, 0).real() - 1.0) <= 1e-12);
        CHECK(std::abs(trace(rho).real() - 1.0) <= 1e-12);
    }
}

TEST_CASE("improvement steps ascend and preserve measurement validity") {
    Rng rng(113);
    const int dim = 5;
    std::vector<Matrix> b;
    for (int g = 0; g < dim; ++g) b.push_back(random_hermitian(dim, rng));

    std::vector<Matrix> m = seesaw_detail::wishart_povm(dim, rng);
    const double before = objective(b, m);
    m = seesaw_detail::povm_improve(b, m, seesaw_detail::kImproveSteps);
    CHECK(objective(b, m) >= before - 1e-9);
    check_povm_valid(m, dim, 1e-12, 1e-9);

    // Repeated chained calls with drifting objectives must never leak
    // negativity into the elements (regression for a feedback instability
    // where a clipped-off eigenvalue re-grew across calls).
    for (int round = 0; round < 40; ++round) {
        for (Matrix& bg : b) {
            Matrix noise = random_hermitian(dim, rng);
            noise *= cx(0.05, 0.0);
            bg += noise;
        }
        m = seesaw_detail::povm_improve(b, m, seesaw_detail::kImproveSteps);
        check_povm_valid(m, dim, 1e-12, 1e-9);
    }
}

TEST_CASE("rank-deficient warm starts escape through the init blend") {
    // basis_povm draws are rank one; the improvement iteration preserves
    // ranges, so escaping a bad projective basin requires the one-off blend.
    Rng rng(211);
    const int dim = 3;
    std::vector<Matrix> b;
    for (int g = 0; g < dim; ++g) b.push_back(random_hermitian(dim, rng));
    std::vector<Matrix> m = seesaw_detail::basis_povm(dim, rng);
    seesaw_detail::blend_full_rank(m, dim);
    check_povm_valid(m, dim, 1e-12, 1e-10);
    for (const Matrix& mg : m)
        CHECK(min_eigenvalue(hermitize(mg)) >= 0.02 / dim - 1e-12);
    for (int it = 0; it < 8; ++it)
        m = seesaw_detail::povm_improve(b, m, seesaw_detail::kImproveSteps);
    const PovmResult opt = povm_update(b);
    CHECK(objective(b, m) >= opt.value - 1e-4);
}

TEST_CASE("random measurement draws are valid and seed deterministic") {
    for (int dim : {2, 4, 7}) {
        Rng r1(99), r2(99), r3(100);
        const std::vector<Matrix> w1 = seesaw_detail::wishart_povm(dim, r1);
        const std::vector<Matrix> w2 = seesaw_detail::wishart_povm(dim, r2);
        const std::vector<Matrix> w3 = seesaw_detail::wishart_povm(dim, r3);
        check_povm_valid(w1, dim, 1e-10, 1e-10);
        REQUIRE(w1.size() == static_cast<std::size_t>(dim));
        double diff12 = 0.0, diff13 = 0.0;
        for (int g = 0; g < dim; ++g) {
            Matrix d12 = w1[static_cast<std::size_t>(g)] - w2[static_cast<std::size_t>(g)];
            Matrix d13 = w1[static_cast<std::size_t>(g)] - w3[static_cast<std::size_t>(g)];
            diff12 = std::max(diff12, max_abs(d12));
            diff13 = std::max(diff13, max_abs(d13));
        }
        CHECK(diff12 == 0.0);
        CHECK(diff13 > 1e-3);

        Rng rb(3);
        const std::vector<Matrix> basis = seesaw_detail::basis_povm(dim, rb);
        check_povm_valid(basis, dim, 1e-12, 1e-10);
        for (const Matrix& mg : basis) {
            CHECK(trace(mg).real() == doctest::Approx(1.0).epsilon(1e-10));
            Matrix sq = mg * mg;
            sq -= mg;
            CHECK(max_abs(sq) <= 1e-10);  // rank-one projectors
        }
    }
}
