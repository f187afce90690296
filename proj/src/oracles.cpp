#include "bcode/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bcode/kernels.hpp"
#include "bcode/linalg.hpp"

namespace bcode {

namespace {

void check_lambda(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("oracle: lambda must be positive and finite");
}

Matrix dual_row(std::span<const double> b, const Matrix& e, double lambda) {
    // z = -(1/lambda) b^T E as a 1 x n matrix.
    Matrix bm(b.size(), 1);
    for (std::size_t i = 0; i < b.size(); ++i) bm(i, 0) = b[i];
    Matrix z = kernels::matmul_at_b(bm, e);
    const double s = -1.0 / lambda;
    for (std::size_t j = 0; j < z.size(); ++j) z.data()[j] *= s;
    return z;
}

// Ascent gradient of Phi*(z(b)) with respect to b:
//   -(1/lambda) sum_j E_j sign(z_j) (|z_j| - alpha)_+
std::vector<double> ascent_gradient(const Matrix& e, const Matrix& z, double alpha,
                                    double lambda) {
    std::vector<double> grad(e.rows(), 0.0);
    for (std::size_t j = 0; j < e.cols(); ++j) {
        const double zj = z(0, j);
        const double excess = std::abs(zj) - alpha;
        if (excess <= 0.0) continue;
        const double c = -(1.0 / lambda) * (zj > 0.0 ? excess : -excess);
        for (std::size_t i = 0; i < e.rows(); ++i) grad[i] += c * e(i, j);
    }
    return grad;
}

}  // namespace

std::vector<double> oracle_l1(const Matrix& e) {
    const std::vector<double> cn = kernels::col_norms_sq(e);
    std::size_t arg = 0;
    double best = 0.0;
    for (std::size_t j = 0; j < cn.size(); ++j) {
        if (cn[j] > best) {
            best = cn[j];
            arg = j;
        }
    }
    if (best == 0.0) throw std::invalid_argument("no residual to fit");
    std::vector<double> b = e.col(arg);
    normalize(b);
    return b;
}

std::vector<double> oracle_l21(const Matrix& e, const OracleConfig& cfg) {
    return power_iteration(e, cfg.power_tol, cfg.power_max_iter).vector;
}

double oracle_objective(std::span<const double> b, const Matrix& e, double lambda,
                        double gamma, double tol) {
    check_lambda(lambda);
    if (b.size() != e.rows())
        throw std::invalid_argument("oracle_objective: vector length does not match rows of E");
    if (std::abs(norm2(b) - 1.0) > 1e-9)
        throw std::invalid_argument("oracle_objective: b must be unit norm");
    return solve_alpha(dual_row(b, e, lambda), gamma, tol).conjugate_value;
}

std::vector<double> oracle_exemplar(const Matrix& e, const Matrix& candidates, double lambda,
                                    double gamma, double tol) {
    if (candidates.cols() == 0) throw std::invalid_argument("oracle_exemplar: empty candidate set");
    if (candidates.rows() != e.rows())
        throw std::invalid_argument("oracle_exemplar: candidate dimension mismatch");
    const std::size_t k = candidates.cols();
    std::vector<std::vector<double>> cols(k);
    for (std::size_t j = 0; j < k; ++j) {
        cols[j] = candidates.col(j);
        if (std::abs(norm2(cols[j]) - 1.0) > 1e-6)
            throw std::invalid_argument("oracle_exemplar: candidate columns must be unit norm");
    }
    std::vector<double> scores(k, 0.0);
    const std::ptrdiff_t kk = static_cast<std::ptrdiff_t>(k);
#pragma omp parallel for schedule(static) if (kk > 4)
    for (std::ptrdiff_t j = 0; j < kk; ++j)
        scores[static_cast<std::size_t>(j)] =
            oracle_objective(cols[static_cast<std::size_t>(j)], e, lambda, gamma, tol);
    // Deterministic argmax by index, independent of evaluation order.
    std::size_t arg = 0;
    for (std::size_t j = 1; j < k; ++j)
        if (scores[j] > scores[arg]) arg = j;
    return cols[arg];
}

OracleChoice oracle_heuristic_traced(const Matrix& e, double lambda, double gamma,
                                     const OracleConfig& cfg) {
    check_lambda(lambda);

    // Candidate pool: the L_{2,1}-limit eigenvector first, then the largest
    // (by L2 norm) N error columns, normalized. Zero columns are skipped.
    std::vector<std::vector<double>> cands;
    std::vector<std::string> names;
    cands.push_back(oracle_l21(e, cfg));
    names.emplace_back("eigen");

    const std::vector<double> cn = kernels::col_norms_sq(e);
    std::vector<std::size_t> order(cn.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&cn](std::size_t a, std::size_t b) { return cn[a] > cn[b]; });
    const std::size_t take = std::min(cfg.n_candidates, order.size());
    for (std::size_t r = 0; r < take; ++r) {
        const std::size_t j = order[r];
        if (cn[j] == 0.0) break;  // sorted, so the rest are zero too
        std::vector<double> c = e.col(j);
        normalize(c);
        cands.push_back(std::move(c));
        names.push_back("column:" + std::to_string(j));
    }

    std::vector<double> scores(cands.size(), 0.0);
    const std::ptrdiff_t nc = static_cast<std::ptrdiff_t>(cands.size());
#pragma omp parallel for schedule(static) if (nc > 4)
    for (std::ptrdiff_t j = 0; j < nc; ++j)
        scores[static_cast<std::size_t>(j)] =
            oracle_objective(cands[static_cast<std::size_t>(j)], e, lambda, gamma);
    std::size_t arg = 0;
    for (std::size_t j = 1; j < cands.size(); ++j)
        if (scores[j] > scores[arg]) arg = j;

    // Projected gradient ascent from the selected candidate, keeping the best
    // iterate seen so the result never scores below the selection.
    std::vector<double> b = cands[arg];
    std::vector<double> best_b = b;
    double best_score = scores[arg];
    bool improved = false;
    for (std::size_t it = 0; it < cfg.max_ascent_iters; ++it) {
        const Matrix z = dual_row(b, e, lambda);
        const AlphaSolution sol = solve_alpha(z, gamma);
        const std::vector<double> grad = ascent_gradient(e, z, sol.alpha_hat, lambda);
        if (norm2(grad) < cfg.ascent_tol) break;
        for (std::size_t i = 0; i < b.size(); ++i) b[i] += cfg.step_size * grad[i];
        const double n = norm2(b);
        if (n < 1e-12) break;  // step collapsed the iterate
        scale(b, 1.0 / n);
        const double score = oracle_objective(b, e, lambda, gamma);
        if (score > best_score) {
            best_score = score;
            best_b = b;
            improved = true;
        }
    }

    OracleChoice out;
    out.vector = std::move(best_b);
    out.provenance = names[arg] + (improved ? "+ascent" : "");
    return out;
}

std::vector<double> oracle_heuristic(const Matrix& e, double lambda, double gamma,
                                     const OracleConfig& cfg) {
    return oracle_heuristic_traced(e, lambda, gamma, cfg).vector;
}

}  // namespace bcode
