#include <doctest.h>

#include <cmath>
#include <random>

#include "bcode/kernels.hpp"
#include "bcode/oracles.hpp"
#include "support.hpp"

using bcode::Matrix;
using bcode::OracleConfig;

namespace {

// Oracle-ranking inner value min_a a^2/gamma + sum_j ((|b^T E_j| - a)_+)^2 via
// the breakpoint oracle; lambda-free, used for ranking checks.
double inner_value(const std::vector<double>& b, const Matrix& e, double gamma) {
    std::vector<double> z(e.cols(), 0.0);
    for (std::size_t j = 0; j < e.cols(); ++j)
        for (std::size_t i = 0; i < e.rows(); ++i) z[j] += b[i] * e(i, j);
    return testsupport::exact_inner_value_single_row(z, gamma);
}

double best_inner_value_on_circle(const Matrix& e, double gamma, std::size_t points) {
    const double pi = 3.14159265358979323846;
    double best = 0.0;
    for (std::size_t k = 0; k < points; ++k) {
        const double t = 2.0 * pi * static_cast<double>(k) / static_cast<double>(points);
        const double v = inner_value({std::cos(t), std::sin(t)}, e, gamma);
        best = std::max(best, v);
    }
    return best;
}

}  // namespace

TEST_CASE("l1 oracle picks the largest-loss column") {
    const auto b = bcode::oracle_l1(Matrix::from_rows({{3.0, 0.0}, {4.0, 0.0}}));
    CHECK(b[0] == doctest::Approx(0.6));
    CHECK(b[1] == doctest::Approx(0.8));

    const auto c = bcode::oracle_l1(Matrix::from_rows({{1.0, 0.0}, {0.0, 2.0}}));
    CHECK(c[0] == doctest::Approx(0.0));
    CHECK(c[1] == doctest::Approx(1.0));

    // tie resolves to the lowest column index
    const auto t = bcode::oracle_l1(Matrix::from_rows({{1.0, 0.0}, {0.0, 1.0}}));
    CHECK(t[0] == doctest::Approx(1.0));
    CHECK(t[1] == doctest::Approx(0.0));

    CHECK_THROWS_WITH_AS(bcode::oracle_l1(Matrix(2, 3)), "no residual to fit",
                         std::invalid_argument);
}

TEST_CASE("l21 oracle is the dominant eigen direction") {
    const OracleConfig cfg;
    const auto b = bcode::oracle_l21(Matrix::from_rows({{2.0, 0.0}, {0.0, 1.0}}), cfg);
    CHECK(b[0] == doctest::Approx(1.0));
    CHECK(b[1] == doctest::Approx(0.0));

    // rank-1 E = u v^T returns +-u
    std::mt19937_64 gen(5);
    const auto u = testsupport::random_unit_vector(gen, 4);
    Matrix e(4, 6);
    std::uniform_real_distribution<double> uni(-2.0, 2.0);
    std::vector<double> v(6);
    for (double& x : v) x = uni(gen);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 6; ++j) e(i, j) = u[i] * v[j];
    const auto r = bcode::oracle_l21(e, cfg);
    CHECK(std::abs(std::abs(bcode::dot(r, u)) - 1.0) < 1e-9);

    // isotropic E E^T = 2I: any unit vector is optimal, check the quadratic form
    const Matrix iso = Matrix::from_rows({{1.0, 1.0}, {1.0, -1.0}});
    const auto q = bcode::oracle_l21(iso, cfg);
    CHECK(bcode::norm2_sq(bcode::kernels::gemv_t(iso, q)) == doctest::Approx(2.0));
}

TEST_CASE("oracle objective matches the conjugate of the dual row") {
    const Matrix zero(2, 3);
    const std::vector<double> e1{1.0, 0.0};
    CHECK(bcode::oracle_objective(e1, zero, 1.0, 1.0) == 0.0);

    const Matrix e = Matrix::from_rows({{2.0, 1.0}, {9.0, 9.0}});
    CHECK(bcode::oracle_objective(e1, e, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-8));

    // ranking example: for diag(2,1), e1 scores above e2
    const Matrix d = Matrix::from_rows({{2.0, 0.0}, {0.0, 1.0}});
    const std::vector<double> e2{0.0, 1.0};
    CHECK(bcode::oracle_objective(e1, d, 1.0, 1.0) > bcode::oracle_objective(e2, d, 1.0, 1.0));

    const std::vector<double> not_unit{0.5, 0.5};
    CHECK_THROWS_AS(bcode::oracle_objective(not_unit, d, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("exemplar oracle returns the best-scoring candidate") {
    const Matrix d = Matrix::from_rows({{2.0, 0.0}, {0.0, 1.0}});
    const Matrix identity = Matrix::from_rows({{1.0, 0.0}, {0.0, 1.0}});
    const auto pick = bcode::oracle_exemplar(d, identity, 1.0, 1.0);
    CHECK(pick[0] == doctest::Approx(1.0));
    CHECK(pick[1] == doctest::Approx(0.0));

    // single candidate comes straight back
    const Matrix one = Matrix::from_rows({{0.0}, {1.0}});
    const auto only = bcode::oracle_exemplar(d, one, 1.0, 1.0);
    CHECK(only[1] == doctest::Approx(1.0));

    // all candidates orthogonal to the residual: lowest index, objective 0
    const Matrix e_row = Matrix::from_rows({{0.0, 0.0}, {1.0, -1.0}});
    const Matrix orth = Matrix::from_rows({{1.0, -1.0}, {0.0, 0.0}});  // e1 and -e1
    CHECK(bcode::oracle_exemplar(e_row, orth, 1.0, 1.0)[0] == doctest::Approx(1.0));

    CHECK_THROWS_AS(bcode::oracle_exemplar(d, Matrix(2, 0), 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("heuristic oracle on rank-1 residual returns the factor direction") {
    std::mt19937_64 gen(17);
    const auto u = testsupport::random_unit_vector(gen, 3);
    Matrix e(3, 5);
    std::uniform_real_distribution<double> uni(-1.5, 1.5);
    for (std::size_t j = 0; j < 5; ++j) {
        const double vj = uni(gen);
        for (std::size_t i = 0; i < 3; ++i) e(i, j) = u[i] * vj;
    }
    const auto b = bcode::oracle_heuristic(e, 1.0, 1.0, OracleConfig{});
    CHECK(std::abs(std::abs(bcode::dot(b, u)) - 1.0) < 1e-8);
}

TEST_CASE("heuristic oracle gamma limits") {
    std::mt19937_64 gen(29);
    const OracleConfig cfg;
    for (int rep = 0; rep < 20; ++rep) {
        const Matrix e = testsupport::random_matrix(gen, 3, 6);

        // gamma -> 0: objective matches the pure eigen candidate's objective.
        const auto b_small = bcode::oracle_heuristic(e, 1.0, 1e-8, cfg);
        const auto eig = bcode::oracle_l21(e, cfg);
        const double ours = bcode::oracle_objective(b_small, e, 1.0, 1e-8);
        const double eig_obj = bcode::oracle_objective(eig, e, 1.0, 1e-8);
        CHECK(ours >= eig_obj * (1.0 - 1e-6) - 1e-12);

        // gamma -> inf: proportional to a maximal-norm column of E.
        const auto b_big = bcode::oracle_heuristic(e, 1.0, 1e8, cfg);
        const auto cn = bcode::kernels::col_norms_sq(e);
        const double top = *std::max_element(cn.begin(), cn.end());
        double best_align = 0.0;
        for (std::size_t j = 0; j < e.cols(); ++j) {
            if (cn[j] < top * (1.0 - 1e-9)) continue;
            auto col = e.col(j);
            bcode::normalize(col);
            best_align = std::max(best_align, std::abs(bcode::dot(b_big, col)));
        }
        CHECK(std::acos(std::min(1.0, best_align)) <= 1e-4);
    }
}

TEST_CASE("oracle outputs are unit norm and deterministic") {
    std::mt19937_64 gen(31);
    const OracleConfig cfg;
    for (int rep = 0; rep < 10; ++rep) {
        const Matrix e = testsupport::random_matrix(gen, 4, 7);
        for (const auto& b : {bcode::oracle_l1(e), bcode::oracle_l21(e, cfg),
                              bcode::oracle_heuristic(e, 0.7, 2.0, cfg)})
            CHECK(std::abs(bcode::norm2(b) - 1.0) <= 1e-9);
        CHECK(bcode::oracle_heuristic(e, 0.7, 2.0, cfg) ==
              bcode::oracle_heuristic(e, 0.7, 2.0, cfg));
    }
}

TEST_CASE("heuristic clears 99% of the angular-grid maximum in 2-D") {
    std::mt19937_64 gen(41);
    const OracleConfig cfg;
    for (double gamma : {0.1, 1.0, 10.0}) {
        for (int rep = 0; rep < 10; ++rep) {
            const Matrix e = testsupport::random_matrix(gen, 2, 4);
            const auto b = bcode::oracle_heuristic(e, 1.0, gamma, cfg);
            const double ours = inner_value(b, e, gamma);
            const double grid = best_inner_value_on_circle(e, gamma, 3600);
            CHECK(ours >= 0.99 * grid);
        }
    }
}
