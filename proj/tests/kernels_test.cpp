#include <doctest.h>

#include <omp.h>

#include <random>

#include "bcode/kernels.hpp"
#include "support.hpp"

using bcode::Matrix;
namespace k = bcode::kernels;

namespace {

void check_close(const Matrix& a, const Matrix& b, double tol = 1e-12) {
    REQUIRE(a.rows() == b.rows());
    REQUIRE(a.cols() == b.cols());
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(a.data()[i] == doctest::Approx(b.data()[i]).epsilon(tol));
}

}  // namespace

TEST_CASE("parallel kernels match the serial reference") {
    std::mt19937_64 gen(3);
    for (int rep = 0; rep < 5; ++rep) {
        const Matrix a = testsupport::random_matrix(gen, 33, 17);
        const Matrix b = testsupport::random_matrix(gen, 17, 129);
        const Matrix c = testsupport::random_matrix(gen, 33, 129);
        check_close(k::matmul(a, b), k::ref::matmul(a, b));
        check_close(k::matmul_at_b(a, c), k::ref::matmul_at_b(a, c));
        check_close(k::matmul_a_bt(b, c), k::ref::matmul_a_bt(b, c));
        check_close(k::residual(a, b, c), k::ref::residual(a, b, c));
        CHECK(k::frobenius_sq(c) == doctest::Approx(k::ref::frobenius_sq(c)).epsilon(1e-12));
        CHECK(k::row_norms_sq(c) == k::ref::row_norms_sq(c));
        CHECK(k::col_norms_sq(a) == k::ref::col_norms_sq(a));
    }
}

TEST_CASE("kernel results do not depend on the thread count") {
    std::mt19937_64 gen(9);
    const Matrix a = testsupport::random_matrix(gen, 120, 70);
    const Matrix b = testsupport::random_matrix(gen, 70, 210);
    const Matrix x = testsupport::random_matrix(gen, 120, 210);

    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const Matrix c1 = k::matmul(a, b);
    const Matrix e1 = k::residual(a, b, x);
    const double f1 = k::frobenius_sq(x);
    omp_set_num_threads(2);
    const Matrix c2 = k::matmul(a, b);
    const Matrix e2 = k::residual(a, b, x);
    const double f2 = k::frobenius_sq(x);
    omp_set_num_threads(saved);

    CHECK(c1 == c2);  // bitwise
    CHECK(e1 == e2);
    CHECK(f1 == f2);
}

TEST_CASE("kernels reject nonconforming shapes") {
    const Matrix a(3, 2);
    const Matrix b(3, 4);
    CHECK_THROWS_AS((void)k::matmul(a, b), std::invalid_argument);
    CHECK_THROWS_AS((void)k::gemv(a, std::vector<double>{1.0, 2.0, 3.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)k::residual(a, Matrix(2, 4), Matrix(3, 5)), std::invalid_argument);
}

TEST_CASE("residual with an empty basis is minus the data") {
    const Matrix x = Matrix::from_rows({{1.0, -2.0}, {3.0, 0.5}});
    const Matrix e = k::residual(Matrix(2, 0), Matrix(0, 2), x);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(e.data()[i] == -x.data()[i]);
}
