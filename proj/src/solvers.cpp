#include "bcode/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <random>
#include <stdexcept>

#include "bcode/kernels.hpp"
#include "bcode/linalg.hpp"

namespace bcode {

namespace {

void check_conformable(const Matrix& basis, const Matrix& weights, const Matrix& x) {
    if (basis.cols() != weights.rows())
        throw std::invalid_argument("solver: basis and weights do not conform");
    if (basis.cols() > 0 && (basis.rows() != x.rows() || weights.cols() != x.cols()))
        throw std::invalid_argument("solver: factorization does not conform to data");
}

double default_step(const Matrix& x, double w_step0) {
    if (w_step0 > 0.0) return w_step0;
    const double xf = std::sqrt(kernels::frobenius_sq(x));
    return xf > 0.0 ? 1.0 / xf : 1.0;
}

}  // namespace

double objective(const Matrix& basis, const Matrix& weights, const Matrix& x,
                 const RegParams& params) {
    check_conformable(basis, weights, x);
    const Matrix e = kernels::residual(basis, weights, x);
    return 0.5 * kernels::frobenius_sq(e) + params.lambda * phi(weights, params);
}

Matrix optimize_weights(const Matrix& basis, const Matrix& x, const RegParams& params,
                        const Matrix& w0, const SolverOptions& opts) {
    check_conformable(basis, w0, x);
    if (!(opts.w_tol > 0.0 && opts.w_tol < 1.0))
        throw std::invalid_argument("optimize_weights: w_tol must be in (0,1)");
    const double step0 = default_step(x, opts.w_step0);

    Matrix w = w0;
    Matrix e = kernels::residual(basis, w, x);
    double obj = 0.5 * kernels::frobenius_sq(e) + params.lambda * phi(w, params);

    Matrix best_w = w;
    double best_obj = obj;
    double window_obj = obj;

    const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(w.rows());
    const std::size_t n = w.cols();

    for (std::size_t t = 1; t <= opts.w_max_iters; ++t) {
        const Matrix grad_loss = kernels::matmul_at_b(basis, e);  // B^T (BW - X)
        const double l21 = block_norm(w, NormOrder::two, NormOrder::one);
        const double l1 = block_norm(w, NormOrder::one, NormOrder::one);
        const std::vector<double> rn = kernels::row_norms_sq(w);
        const double eta = step0 / std::sqrt(static_cast<double>(t));

        // Zero-subgradient convention at kinks: rows of norm zero and entries
        // equal to zero contribute nothing.
#pragma omp parallel for schedule(static) if (w.size() >= 16384)
        for (std::ptrdiff_t i = 0; i < rows; ++i) {
            const std::size_t ui = static_cast<std::size_t>(i);
            const double rinv = rn[ui] > 0.0 ? l21 / std::sqrt(rn[ui]) : 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double wij = w(ui, j);
                const double sgn = wij > 0.0 ? 1.0 : (wij < 0.0 ? -1.0 : 0.0);
                const double sg =
                    grad_loss(ui, j) + params.lambda * (rinv * wij + params.gamma * l1 * sgn);
                w(ui, j) = wij - eta * sg;
            }
        }

        e = kernels::residual(basis, w, x);
        obj = 0.5 * kernels::frobenius_sq(e) + params.lambda * phi(w, params);
        if (obj < best_obj) {
            best_obj = obj;
            best_w = w;
        }

        if (t % 10 == 0) {
            const double rel = (window_obj - best_obj) / std::max(1.0, std::abs(window_obj));
            if (rel < opts.w_tol) break;
            window_obj = best_obj;
        }
    }
    return best_w;
}

CodingResult boosted_coding(const Matrix& x, const RegParams& params, OracleKind oracle,
                            const SolverOptions& opts, const OracleConfig& oracle_cfg) {
    if (!x.all_finite()) throw std::invalid_argument("boosted_coding: non-finite data");
    CodingResult result;
    result.basis = Matrix(x.rows(), 0);
    result.weights = Matrix(0, x.cols());

    OracleConfig cfg = oracle_cfg;
    cfg.n_candidates = std::min(cfg.n_candidates, std::max<std::size_t>(x.cols(), 1));

    // Exemplar pool: the normalized nonzero data columns.
    Matrix exemplars;
    if (oracle == OracleKind::exemplar) {
        exemplars = Matrix(x.rows(), 0);
        for (std::size_t j = 0; j < x.cols(); ++j) {
            std::vector<double> c = x.col(j);
            const double nrm = norm2(c);
            if (nrm == 0.0) continue;
            scale(c, 1.0 / nrm);
            exemplars.append_col(c);
        }
    }

    const std::vector<double> zero_row(x.cols(), 0.0);
    for (std::size_t t = 0; t < opts.max_basis; ++t) {
        const Matrix e = kernels::residual(result.basis, result.weights, x);
        if (kernels::frobenius_sq(e) == 0.0) {
            result.stopped_early = true;
            break;
        }

        OracleChoice choice;
        switch (oracle) {
            case OracleKind::l1:
                choice.vector = oracle_l1(e);
                choice.provenance = "l1";
                break;
            case OracleKind::l21:
                choice.vector = oracle_l21(e, cfg);
                choice.provenance = "eigen";
                break;
            case OracleKind::heuristic:
                choice = oracle_heuristic_traced(e, params.lambda, params.gamma, cfg);
                break;
            case OracleKind::exemplar:
                choice.vector = oracle_exemplar(e, exemplars, params.lambda, params.gamma);
                choice.provenance = "exemplar";
                break;
        }

        result.basis.append_col(choice.vector);
        Matrix warm = result.weights;
        warm.append_row(zero_row);
        result.weights = optimize_weights(result.basis, x, params, warm, opts);

        const std::size_t last = result.weights.rows() - 1;
        if (norm2(result.weights.row(last)) <= opts.zero_row_tol) {
            result.basis.drop_last_col();
            result.weights.drop_last_row();
            result.stopped_early = true;
            break;
        }

        result.provenance.push_back(choice.provenance);
        result.objective_trace.push_back(objective(result.basis, result.weights, x, params));
        result.steps_taken = result.basis.cols();
    }
    return result;
}

std::vector<double> lasso_column(const Matrix& basis, std::span<const double> x, double lambda,
                                 const SolverOptions& opts) {
    (void)opts;
    if (basis.rows() != x.size())
        throw std::invalid_argument("lasso_column: target length does not match basis rows");
    const std::size_t m = basis.rows();
    const std::size_t k = basis.cols();

    const std::vector<double> col_sq = kernels::col_norms_sq(basis);
    std::vector<double> w(k, 0.0);
    std::vector<double> r(x.begin(), x.end());  // r = x - B w

    constexpr double kSweepTol = 1e-8;
    constexpr std::size_t kMaxSweeps = 1000;
    for (std::size_t sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double max_change = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            if (col_sq[i] == 0.0) continue;
            double corr = w[i] * col_sq[i];
            for (std::size_t p = 0; p < m; ++p) corr += basis(p, i) * r[p];
            const double mag = std::abs(corr) - lambda;
            const double next = mag > 0.0 ? (corr > 0.0 ? mag : -mag) / col_sq[i] : 0.0;
            const double delta = next - w[i];
            if (delta != 0.0) {
                for (std::size_t p = 0; p < m; ++p) r[p] -= basis(p, i) * delta;
                w[i] = next;
                max_change = std::max(max_change, std::abs(delta));
            }
        }
        if (max_change < kSweepTol) break;
    }
    return w;
}

CodingResult alternating_optimization(const Matrix& x, std::size_t basis_size, double lambda,
                                      const SolverOptions& opts) {
    if (basis_size == 0) throw std::invalid_argument("alternating_optimization: basis_size must be >= 1");
    if (!x.all_finite()) throw std::invalid_argument("alternating_optimization: non-finite data");
    const std::size_t m = x.rows();
    const std::size_t n = x.cols();
    if (basis_size >= m * n)
        std::cerr << "alternating_optimization: basis size " << basis_size
                  << " is degenerate for " << m << "x" << n << " data\n";

    std::mt19937_64 gen(opts.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto draw_column = [&](Matrix& b, std::size_t j) {
        while (true) {
            for (std::size_t i = 0; i < m; ++i) b(i, j) = gauss(gen);
            std::vector<double> c = b.col(j);
            const double nrm = norm2(c);
            if (nrm > 1e-10) {
                for (std::size_t i = 0; i < m; ++i) b(i, j) /= nrm;
                return;
            }
        }
    };

    CodingResult result;
    result.basis = Matrix(m, basis_size);
    for (std::size_t j = 0; j < basis_size; ++j) draw_column(result.basis, j);
    result.weights = Matrix(basis_size, n);
    result.provenance.assign(basis_size, "random-init");

    for (std::size_t it = 0; it < opts.alt_iters; ++it) {
        // W-step: independent lasso per data column.
        const std::ptrdiff_t nn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) if (nn > 8)
        for (std::ptrdiff_t j = 0; j < nn; ++j) {
            const std::size_t uj = static_cast<std::size_t>(j);
            const std::vector<double> xj = x.col(uj);
            const std::vector<double> wj = lasso_column(result.basis, xj, lambda, opts);
            for (std::size_t i = 0; i < basis_size; ++i) result.weights(i, uj) = wj[i];
        }

        const Matrix e = kernels::residual(result.basis, result.weights, x);
        result.objective_trace.push_back(kernels::frobenius_sq(e) +
                                         lambda * block_norm(result.weights, NormOrder::one,
                                                             NormOrder::one));

        if (it + 1 == opts.alt_iters) break;

        // B-step: ridge-jittered normal equations, then renormalize columns.
        Matrix gram = kernels::matmul_a_bt(result.weights, result.weights);
        for (std::size_t i = 0; i < basis_size; ++i) gram(i, i) += 1e-10;
        const CholeskyFactor chol(gram);
        const Matrix xwt = kernels::matmul_a_bt(x, result.weights);  // m x k
        const std::ptrdiff_t mm = static_cast<std::ptrdiff_t>(m);
#pragma omp parallel for schedule(static) if (mm > 8)
        for (std::ptrdiff_t i = 0; i < mm; ++i) {
            const std::size_t ui = static_cast<std::size_t>(i);
            const std::vector<double> row = chol.solve(xwt.row(ui));
            for (std::size_t j = 0; j < basis_size; ++j) result.basis(ui, j) = row[j];
        }
        for (std::size_t j = 0; j < basis_size; ++j) {
            const double nrm = norm2(result.basis.col(j));
            if (nrm < 1e-10) {
                draw_column(result.basis, j);
            } else {
                for (std::size_t i = 0; i < m; ++i) result.basis(i, j) /= nrm;
            }
        }
    }

    result.steps_taken = opts.alt_iters;
    return result;
}

}  // namespace bcode
