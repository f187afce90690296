#pragma once

#include <span>
#include <vector>

#include "bcode/matrix.hpp"

namespace bcode::kernels {

// OpenMP-parallel dense kernels. Every kernel assigns each output element to
// exactly one thread and accumulates it in a fixed serial order, so results
// are bitwise identical regardless of thread count.

// C = A * B
Matrix matmul(const Matrix& a, const Matrix& b);
// C = A^T * B
Matrix matmul_at_b(const Matrix& a, const Matrix& b);
// C = A * B^T
Matrix matmul_a_bt(const Matrix& a, const Matrix& b);
// E = B*W - X; with an empty basis (k = 0) this is -X.
Matrix residual(const Matrix& basis, const Matrix& weights, const Matrix& x);

std::vector<double> gemv(const Matrix& a, std::span<const double> x);
std::vector<double> gemv_t(const Matrix& a, std::span<const double> x);

double frobenius_sq(const Matrix& a);
std::vector<double> row_norms_sq(const Matrix& a);
std::vector<double> col_norms_sq(const Matrix& a);

// Serial reference implementations, kept for correctness tests and the
// kernel benchmark.
namespace ref {

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix matmul_at_b(const Matrix& a, const Matrix& b);
Matrix matmul_a_bt(const Matrix& a, const Matrix& b);
Matrix residual(const Matrix& basis, const Matrix& weights, const Matrix& x);
std::vector<double> gemv(const Matrix& a, std::span<const double> x);
std::vector<double> gemv_t(const Matrix& a, std::span<const double> x);
double frobenius_sq(const Matrix& a);
std::vector<double> row_norms_sq(const Matrix& a);
std::vector<double> col_norms_sq(const Matrix& a);

}  // namespace ref

}  // namespace bcode::kernels
