#include "bcode/linalg.hpp"

#include <cmath>
#include <stdexcept>

#include "bcode/kernels.hpp"

namespace bcode {

namespace {

// Flip so the largest-magnitude entry (lowest index on ties) is nonnegative.
void fix_sign(std::vector<double>& v) {
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v[i]);
        if (mag > best) {
            best = mag;
            arg = i;
        }
    }
    if (v[arg] < 0.0)
        for (double& x : v) x = -x;
}

}  // namespace

PowerIterationResult power_iteration(const Matrix& e, double tol, std::size_t max_iter) {
    if (tol <= 0.0) throw std::invalid_argument("power_iteration: tol must be positive");
    if (max_iter == 0) throw std::invalid_argument("power_iteration: max_iter must be positive");
    if (!e.all_finite()) throw std::invalid_argument("power_iteration: non-finite input");

    const std::vector<double> cn = kernels::col_norms_sq(e);
    std::size_t start = 0;
    double best = 0.0;
    for (std::size_t j = 0; j < cn.size(); ++j) {
        if (cn[j] > best) {
            best = cn[j];
            start = j;
        }
    }
    if (best == 0.0) throw std::invalid_argument("zero matrix has no dominant direction");

    std::vector<double> v = e.col(start);
    normalize(v);

    std::size_t iters = 0;
    for (; iters < max_iter; ++iters) {
        std::vector<double> t = kernels::gemv_t(e, v);
        std::vector<double> next = kernels::gemv(e, t);
        // A column start vector cannot be annihilated by E E^T, so next != 0.
        normalize(next);
        double diff = 0.0, sum = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            diff += (next[i] - v[i]) * (next[i] - v[i]);
            sum += (next[i] + v[i]) * (next[i] + v[i]);
        }
        v = std::move(next);
        if (std::sqrt(diff) < tol || std::sqrt(sum) < tol) {
            ++iters;
            break;
        }
    }

    fix_sign(v);
    PowerIterationResult out;
    out.rayleigh = norm2_sq(kernels::gemv_t(e, v));
    out.vector = std::move(v);
    out.iterations = iters;
    return out;
}

CholeskyFactor::CholeskyFactor(const Matrix& a) : l_(a.rows(), a.cols()) {
    if (a.rows() != a.cols()) throw std::invalid_argument("cholesky: matrix not square");
    const std::size_t n = a.rows();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = a(i, j);
            for (std::size_t p = 0; p < j; ++p) s -= l_(i, p) * l_(j, p);
            if (i == j) {
                if (s <= 0.0) throw std::invalid_argument("cholesky: matrix not positive definite");
                l_(i, i) = std::sqrt(s);
            } else {
                l_(i, j) = s / l_(j, j);
            }
        }
    }
}

std::vector<double> CholeskyFactor::solve(std::span<const double> b) const {
    const std::size_t n = l_.rows();
    if (b.size() != n) throw std::invalid_argument("cholesky solve: rhs length mismatch");
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t p = 0; p < i; ++p) s -= l_(i, p) * y[p];
        y[i] = s / l_(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t p = ii + 1; p < n; ++p) s -= l_(p, ii) * y[p];
        y[ii] = s / l_(ii, ii);
    }
    return y;
}

std::vector<double> solve_spd(const Matrix& a, std::span<const double> b) {
    return CholeskyFactor(a).solve(b);
}

}  // namespace bcode
