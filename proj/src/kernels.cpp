#include "bcode/kernels.hpp"

#include <cstddef>
#include <stdexcept>

namespace bcode::kernels {

namespace {

using index = std::ptrdiff_t;

// Below this element count the parallel-for is not worth the fork.
constexpr std::size_t kParallelCutoff = 16384;

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

Matrix matmul(const Matrix& a, const Matrix& b) {
    require(a.cols() == b.rows(), "matmul: inner dimensions differ");
    const index m = static_cast<index>(a.rows());
    const index k = static_cast<index>(a.cols());
    const index n = static_cast<index>(b.cols());
    Matrix c(a.rows(), b.cols());
    const double* ap = a.data();
    const double* bp = b.data();
    double* cp = c.data();
    const bool par = a.rows() * b.cols() * (a.cols() + 1) >= kParallelCutoff;
#pragma omp parallel for schedule(static) if (par)
    for (index i = 0; i < m; ++i) {
        double* crow = cp + i * n;
        for (index p = 0; p < k; ++p) {
            const double aip = ap[i * k + p];
            const double* brow = bp + p * n;
            for (index j = 0; j < n; ++j) crow[j] += aip * brow[j];
        }
    }
    return c;
}

Matrix matmul_at_b(const Matrix& a, const Matrix& b) {
    require(a.rows() == b.rows(), "matmul_at_b: row counts differ");
    const index m = static_cast<index>(a.rows());
    const index k = static_cast<index>(a.cols());
    const index n = static_cast<index>(b.cols());
    Matrix c(a.cols(), b.cols());
    const double* ap = a.data();
    const double* bp = b.data();
    double* cp = c.data();
    const bool par = a.cols() * b.cols() * (a.rows() + 1) >= kParallelCutoff;
#pragma omp parallel for schedule(static) if (par)
    for (index i = 0; i < k; ++i) {
        double* crow = cp + i * n;
        for (index p = 0; p < m; ++p) {
            const double api = ap[p * k + i];
            const double* brow = bp + p * n;
            for (index j = 0; j < n; ++j) crow[j] += api * brow[j];
        }
    }
    return c;
}

Matrix matmul_a_bt(const Matrix& a, const Matrix& b) {
    require(a.cols() == b.cols(), "matmul_a_bt: column counts differ");
    const index m = static_cast<index>(a.rows());
    const index k = static_cast<index>(a.cols());
    const index n = static_cast<index>(b.rows());
    Matrix c(a.rows(), b.rows());
    const double* ap = a.data();
    const double* bp = b.data();
    double* cp = c.data();
    const bool par = a.rows() * b.rows() * (a.cols() + 1) >= kParallelCutoff;
#pragma omp parallel for schedule(static) if (par)
    for (index i = 0; i < m; ++i) {
        for (index j = 0; j < n; ++j) {
            double s = 0.0;
            const double* arow = ap + i * k;
            const double* brow = bp + j * k;
            for (index p = 0; p < k; ++p) s += arow[p] * brow[p];
            cp[i * n + j] = s;
        }
    }
    return c;
}

Matrix residual(const Matrix& basis, const Matrix& weights, const Matrix& x) {
    require(basis.cols() == weights.rows(), "residual: basis/weights dimensions differ");
    if (basis.cols() > 0) {
        require(basis.rows() == x.rows() && weights.cols() == x.cols(),
                "residual: output shape does not match data");
    }
    const index m = static_cast<index>(x.rows());
    const index n = static_cast<index>(x.cols());
    const index k = static_cast<index>(basis.cols());
    Matrix e(x.rows(), x.cols());
    const double* bp = basis.data();
    const double* wp = weights.data();
    const double* xp = x.data();
    double* ep = e.data();
    const bool par = x.size() * (basis.cols() + 1) >= kParallelCutoff;
#pragma omp parallel for schedule(static) if (par)
    for (index i = 0; i < m; ++i) {
        double* erow = ep + i * n;
        for (index p = 0; p < k; ++p) {
            const double bip = bp[i * k + p];
            const double* wrow = wp + p * n;
            for (index j = 0; j < n; ++j) erow[j] += bip * wrow[j];
        }
        const double* xrow = xp + i * n;
        for (index j = 0; j < n; ++j) erow[j] -= xrow[j];
    }
    return e;
}

std::vector<double> gemv(const Matrix& a, std::span<const double> x) {
    require(a.cols() == x.size(), "gemv: dimension mismatch");
    const index m = static_cast<index>(a.rows());
    const index n = static_cast<index>(a.cols());
    std::vector<double> y(a.rows(), 0.0);
    const double* ap = a.data();
#pragma omp parallel for schedule(static) if (a.size() >= kParallelCutoff)
    for (index i = 0; i < m; ++i) {
        double s = 0.0;
        const double* arow = ap + i * n;
        for (index j = 0; j < n; ++j) s += arow[j] * x[j];
        y[i] = s;
    }
    return y;
}

std::vector<double> gemv_t(const Matrix& a, std::span<const double> x) {
    require(a.rows() == x.size(), "gemv_t: dimension mismatch");
    const index m = static_cast<index>(a.rows());
    const index n = static_cast<index>(a.cols());
    std::vector<double> y(a.cols(), 0.0);
    const double* ap = a.data();
#pragma omp parallel for schedule(static) if (a.size() >= kParallelCutoff)
    for (index j = 0; j < n; ++j) {
        double s = 0.0;
        for (index i = 0; i < m; ++i) s += ap[i * n + j] * x[i];
        y[j] = s;
    }
    return y;
}

// Per-row partial sums combined serially in row order, so the result does not
// depend on the thread count.
double frobenius_sq(const Matrix& a) {
    const index m = static_cast<index>(a.rows());
    const index n = static_cast<index>(a.cols());
    std::vector<double> partial(a.rows(), 0.0);
    const double* ap = a.data();
#pragma omp parallel for schedule(static) if (a.size() >= kParallelCutoff)
    for (index i = 0; i < m; ++i) {
        double s = 0.0;
        const double* arow = ap + i * n;
        for (index j = 0; j < n; ++j) s += arow[j] * arow[j];
        partial[i] = s;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

std::vector<double> row_norms_sq(const Matrix& a) {
    const index m = static_cast<index>(a.rows());
    const index n = static_cast<index>(a.cols());
    std::vector<double> out(a.rows(), 0.0);
    const double* ap = a.data();
#pragma omp parallel for schedule(static) if (a.size() >= kParallelCutoff)
    for (index i = 0; i < m; ++i) {
        double s = 0.0;
        const double* arow = ap + i * n;
        for (index j = 0; j < n; ++j) s += arow[j] * arow[j];
        out[i] = s;
    }
    return out;
}

std::vector<double> col_norms_sq(const Matrix& a) {
    const index m = static_cast<index>(a.rows());
    const index n = static_cast<index>(a.cols());
    std::vector<double> out(a.cols(), 0.0);
    const double* ap = a.data();
#pragma omp parallel for schedule(static) if (a.size() >= kParallelCutoff)
    for (index j = 0; j < n; ++j) {
        double s = 0.0;
        for (index i = 0; i < m; ++i) s += ap[i * n + j] * ap[i * n + j];
        out[j] = s;
    }
    return out;
}

namespace ref {

Matrix matmul(const Matrix& a, const Matrix& b) {
    require(a.cols() == b.rows(), "matmul: inner dimensions differ");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double s = 0.0;
            for (std::size_t p = 0; p < a.cols(); ++p) s += a(i, p) * b(p, j);
            c(i, j) = s;
        }
    return c;
}

Matrix matmul_at_b(const Matrix& a, const Matrix& b) {
    require(a.rows() == b.rows(), "matmul_at_b: row counts differ");
    Matrix c(a.cols(), b.cols());
    for (std::size_t i = 0; i < a.cols(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double s = 0.0;
            for (std::size_t p = 0; p < a.rows(); ++p) s += a(p, i) * b(p, j);
            c(i, j) = s;
        }
    return c;
}

Matrix matmul_a_bt(const Matrix& a, const Matrix& b) {
    require(a.cols() == b.cols(), "matmul_a_bt: column counts differ");
    Matrix c(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.rows(); ++j) {
            double s = 0.0;
            for (std::size_t p = 0; p < a.cols(); ++p) s += a(i, p) * b(j, p);
            c(i, j) = s;
        }
    return c;
}

Matrix residual(const Matrix& basis, const Matrix& weights, const Matrix& x) {
    require(basis.cols() == weights.rows(), "residual: basis/weights dimensions differ");
    if (basis.cols() > 0) {
        require(basis.rows() == x.rows() && weights.cols() == x.cols(),
                "residual: output shape does not match data");
    }
    Matrix e(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) {
            double s = 0.0;
            for (std::size_t p = 0; p < basis.cols(); ++p) s += basis(i, p) * weights(p, j);
            e(i, j) = s - x(i, j);
        }
    return e;
}

std::vector<double> gemv(const Matrix& a, std::span<const double> x) {
    require(a.cols() == x.size(), "gemv: dimension mismatch");
    std::vector<double> y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

std::vector<double> gemv_t(const Matrix& a, std::span<const double> x) {
    require(a.rows() == x.size(), "gemv_t: dimension mismatch");
    std::vector<double> y(a.cols(), 0.0);
    for (std::size_t j = 0; j < a.cols(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i) s += a(i, j) * x[i];
        y[j] = s;
    }
    return y;
}

double frobenius_sq(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a.data()[i] * a.data()[i];
    return s;
}

std::vector<double> row_norms_sq(const Matrix& a) {
    std::vector<double> out(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out[i] += a(i, j) * a(i, j);
    return out;
}

std::vector<double> col_norms_sq(const Matrix& a) {
    std::vector<double> out(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out[j] += a(i, j) * a(i, j);
    return out;
}

}  // namespace ref

}  // namespace bcode::kernels
