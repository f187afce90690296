#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bcode/matrix.hpp"
#include "bcode/oracles.hpp"
#include "bcode/regularizer.hpp"

namespace bcode {

struct SolverOptions {
    std::size_t max_basis = 32;      // basis budget d
    std::size_t w_max_iters = 500;   // subgradient iterations per weight solve
    double w_tol = 1e-8;             // relative best-objective change over a 10-iteration window
    double w_step0 = 0.0;            // initial step; <= 0 selects 1/||X||_F
    std::size_t alt_iters = 20;      // alternations for the baseline
    std::uint64_t seed = 0;          // baseline initialization only
    double zero_row_tol = 1e-6;      // stop when the new weight row stays this small
};

struct CodingResult {
    Matrix basis;    // m x k, unit-norm columns
    Matrix weights;  // k x n
    std::vector<double> objective_trace;
    std::size_t steps_taken = 0;
    bool stopped_early = false;
    std::vector<std::string> provenance;  // one entry per basis vector
};

// 1/2 ||B W - X||_F^2 + lambda * phi(W).
double objective(const Matrix& basis, const Matrix& weights, const Matrix& x,
                 const RegParams& params);

// Subgradient descent on the coding objective over W with step w_step0/sqrt(t),
// tracking and returning the best iterate (never worse than W0).
Matrix optimize_weights(const Matrix& basis, const Matrix& x, const RegParams& params,
                        const Matrix& w0, const SolverOptions& opts);

// Greedy basis growth: each step asks the oracle for one new unit vector for
// the current reconstruction error, re-optimizes W from a warm start, and
// stops early once the new weight row comes back (numerically) zero.
CodingResult boosted_coding(const Matrix& x, const RegParams& params, OracleKind oracle,
                            const SolverOptions& opts, const OracleConfig& oracle_cfg = {});

// Cyclic coordinate descent with soft thresholding for
//   min_w 1/2 ||B w - x||_2^2 + lambda ||w||_1.
std::vector<double> lasso_column(const Matrix& basis, std::span<const double> x, double lambda,
                                 const SolverOptions& opts);

// Classical baseline: seeded random unit basis, then alternate per-column
// lasso W-steps with least-squares B-steps (ridge jitter 1e-10, columns
// renormalized, near-zero columns redrawn). The trace records the
// ||BW - X||_F^2 + lambda ||W||_1 objective after each W-step.
CodingResult alternating_optimization(const Matrix& x, std::size_t basis_size, double lambda,
                                      const SolverOptions& opts);

}  // namespace bcode
