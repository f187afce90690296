#pragma once

#include <cstddef>

#include "bcode/matrix.hpp"

namespace bcode {

enum class NormOrder { one, two, inf };

// Regularization weights of the coding objective
//   1/2 ||B W - X||_F^2 + lambda (1/2 ||W||_{2,1}^2 + gamma/2 ||W||_1^2).
// lambda is applied by the objective, not folded into phi(), so the dual
// variable Z = -(1/lambda) grad L carries lambda exactly once.
struct RegParams {
    RegParams(double lambda_in, double gamma_in);
    double lambda;
    double gamma;
};

// Result of minimizing
//   g(alpha) = alpha^2/(2 gamma) + 1/2 max_i sum_j ((|Z_ij| - alpha)_+)^2
// over alpha in [0, ||Z||_inf]. conjugate_value is g(alpha_hat), i.e. the
// Fenchel conjugate Phi*(Z); kappa is the maximal row's clamp energy
// max_i sum_j ((|Z_ij| - alpha_hat)_+)^2 and max_row_index attains it
// (ties resolved to the lowest index).
struct AlphaSolution {
    double alpha_hat = 0.0;
    double conjugate_value = 0.0;
    std::size_t max_row_index = 0;
    double kappa = 0.0;
};

// L_{p,q} block norm: the L_q norm over rows of the per-row L_p norms.
double block_norm(const Matrix& m, NormOrder p, NormOrder q);

// 1/2 ||W||_{2,1}^2 + gamma/2 ||W||_1^2 (no lambda factor).
double phi(const Matrix& w, const RegParams& params);

// Elementwise clamp of Z to [-alpha, alpha]: the minimizer of the infimal
// convolution 1/2 ||Z - A||_{2,inf}^2 + 1/(2 gamma) ||A||_inf^2 at fixed
// ||A||_inf = alpha.
Matrix infimal_A(const Matrix& z, double alpha);

// Golden-section search for alpha_hat on the convex g(alpha). A non-positive
// tol selects the default 1e-10 * max(1, ||Z||_inf).
AlphaSolution solve_alpha(const Matrix& z, double gamma, double tol = 0.0);

// Sparse subgradient of Phi* at Z: entries above alpha_hat on (a) maximal
// row(s) are shrunk by it, everything else is zero. Generically this is the
// single row from solve_alpha; when the 1-D optimum falls on a crossing of
// two rows' clamp-energy curves, the exact subgradient is a convex mixture of
// that pair, so up to two rows can be nonzero. The boosting step of the
// coding algorithm.
Matrix conjugate_subgradient(const Matrix& z, double gamma, double tol = 0.0);

}  // namespace bcode
