#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bcode/matrix.hpp"
#include "bcode/regularizer.hpp"

namespace bcode {

enum class OracleKind { l1, l21, heuristic, exemplar };

struct OracleConfig {
    std::size_t n_candidates = 10;     // exemplar columns fed to the heuristic
    double step_size = 0.1;            // gradient-ascent step
    double ascent_tol = 1e-6;          // stop when the ascent gradient norm drops below this
    std::size_t max_ascent_iters = 200;
    double power_tol = 1e-10;
    std::size_t power_max_iter = 1000;
};

// New basis vector plus a note on where it came from ("eigen", "column:<j>",
// optionally "+ascent"), recorded per step by the coding solvers.
struct OracleChoice {
    std::vector<double> vector;
    std::string provenance;
};

// L2 projection of the largest-norm column of the reconstruction error:
// the limiting boosting step under pure L1^2 regularization.
std::vector<double> oracle_l1(const Matrix& e);

// Dominant eigenvector of E E^T: the limiting step under pure L_{2,1}^2
// regularization.
std::vector<double> oracle_l21(const Matrix& e, const OracleConfig& cfg);

// Ranking value for a candidate basis vector: Phi*(z) with z = -(1/lambda) b^T E.
// Phi* depends only on |z|, so the sign convention cannot reorder candidates.
double oracle_objective(std::span<const double> b, const Matrix& e, double lambda,
                        double gamma, double tol = 0.0);

// Best candidate among a finite set of unit columns (ties to the lowest index).
std::vector<double> oracle_exemplar(const Matrix& e, const Matrix& candidates, double lambda,
                                    double gamma, double tol = 0.0);

// Candidate pool (eigenvector + top-norm error columns), selection by
// oracle_objective, then projected gradient ascent on the unit sphere with a
// fall-back to the selected candidate if ascent did not improve it.
std::vector<double> oracle_heuristic(const Matrix& e, double lambda, double gamma,
                                     const OracleConfig& cfg);

// Same as oracle_heuristic but reporting the provenance of the returned vector.
OracleChoice oracle_heuristic_traced(const Matrix& e, double lambda, double gamma,
                                     const OracleConfig& cfg);

}  // namespace bcode
