#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bcode/matrix.hpp"

namespace bcode {

struct PowerIterationResult {
    std::vector<double> vector;  // unit-norm dominant direction of E*E^T
    double rayleigh = 0.0;       // v^T E E^T v at the returned v
    std::size_t iterations = 0;
};

// Dominant eigenvector of E*E^T by power iteration on v <- E (E^T v).
//
// Fully deterministic: the start vector is the largest-L2-norm column of E
// (ties to the lowest index), convergence is measured on the iterate
// (||v_next - v|| or ||v_next + v|| below tol), and the sign is fixed so the
// largest-magnitude entry of the result is nonnegative.
PowerIterationResult power_iteration(const Matrix& e, double tol = 1e-10,
                                     std::size_t max_iter = 1000);

// Cholesky factorization of a symmetric positive definite matrix; callers add
// their own ridge jitter before factoring near-singular systems.
class CholeskyFactor {
public:
    explicit CholeskyFactor(const Matrix& a);
    std::vector<double> solve(std::span<const double> b) const;
    std::size_t dim() const { return l_.rows(); }

private:
    Matrix l_;  // lower triangle
};

// One-shot solve of A x = b for SPD A.
std::vector<double> solve_spd(const Matrix& a, std::span<const double> b);

}  // namespace bcode
