#pragma once

// Shared helpers for the test suites. The numerical routines here are
// independent oracles: they recompute expected values by a different route
// than the library (Jacobi rotations, breakpoint enumeration, grid search)
// and must stay decoupled from the implementation they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "bcode/image.hpp"
#include "bcode/matrix.hpp"

namespace testsupport {

inline bcode::Matrix random_matrix(std::mt19937_64& gen, std::size_t rows, std::size_t cols,
                                   double lo = -2.0, double hi = 2.0) {
    std::uniform_real_distribution<double> uni(lo, hi);
    bcode::Matrix m(rows, cols);
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = uni(gen);
    return m;
}

inline std::vector<double> random_unit_vector(std::mt19937_64& gen, std::size_t n) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> v(n);
    double nrm = 0.0;
    do {
        nrm = 0.0;
        for (double& x : v) {
            x = gauss(gen);
            nrm += x * x;
        }
    } while (nrm == 0.0);
    nrm = std::sqrt(nrm);
    for (double& x : v) x /= nrm;
    return v;
}

// Largest eigenvalue of a symmetric matrix by cyclic Jacobi rotations.
inline double jacobi_lambda_max(bcode::Matrix s) {
    const std::size_t n = s.rows();
    for (std::size_t sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += s(p, q) * s(p, q);
        if (off < 1e-24) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (s(p, q) == 0.0) continue;
                const double theta = (s(q, q) - s(p, p)) / (2.0 * s(p, q));
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double snv = t * c;
                for (std::size_t i = 0; i < n; ++i) {
                    const double sip = s(i, p), siq = s(i, q);
                    s(i, p) = c * sip - snv * siq;
                    s(i, q) = snv * sip + c * siq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double spi = s(p, i), sqi = s(q, i);
                    s(p, i) = c * spi - snv * sqi;
                    s(q, i) = snv * spi + c * sqi;
                }
            }
        }
    }
    double best = s(0, 0);
    for (std::size_t i = 1; i < n; ++i) best = std::max(best, s(i, i));
    return best;
}

inline bcode::Matrix gram_eet(const bcode::Matrix& e) {
    bcode::Matrix s(e.rows(), e.rows());
    for (std::size_t i = 0; i < e.rows(); ++i)
        for (std::size_t j = 0; j < e.rows(); ++j) {
            double acc = 0.0;
            for (std::size_t p = 0; p < e.cols(); ++p) acc += e(i, p) * e(j, p);
            s(i, j) = acc;
        }
    return s;
}

// g(alpha) = alpha^2/(2 gamma) + 1/2 max_i sum_j ((|Z_ij|-alpha)_+)^2,
// evaluated directly from the definition.
inline double g_direct(const bcode::Matrix& z, double gamma, double alpha) {
    double rowmax = 0.0;
    for (std::size_t i = 0; i < z.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < z.cols(); ++j) {
            const double d = std::abs(z(i, j)) - alpha;
            if (d > 0.0) s += d * d;
        }
        rowmax = std::max(rowmax, s);
    }
    return alpha * alpha / (2.0 * gamma) + 0.5 * rowmax;
}

inline double max_abs(const bcode::Matrix& z) {
    double s = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) s = std::max(s, std::abs(z.data()[i]));
    return s;
}

struct GridMin {
    double alpha = 0.0;
    double value = 0.0;
    double step = 0.0;
};

// Dense grid minimization of g over [0, ||Z||_inf].
inline GridMin grid_min_alpha(const bcode::Matrix& z, double gamma, std::size_t points) {
    const double hi = max_abs(z);
    GridMin out;
    out.step = points > 1 ? hi / static_cast<double>(points - 1) : 0.0;
    out.value = g_direct(z, gamma, 0.0);
    for (std::size_t i = 1; i < points; ++i) {
        const double a = out.step * static_cast<double>(i);
        const double v = g_direct(z, gamma, a);
        if (v < out.value) {
            out.value = v;
            out.alpha = a;
        }
    }
    return out;
}

// Exact minimizer of h(alpha) = alpha^2/gamma + sum_j ((|z_j|-alpha)_+)^2 for a
// single row, by enumerating the sorted-|z| breakpoint segments. The
// independent route for the oracle-ranking inner value.
inline double exact_inner_value_single_row(const std::vector<double>& z, double gamma) {
    std::vector<double> a(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) a[i] = std::abs(z[i]);
    std::sort(a.begin(), a.end(), std::greater<>());
    double prefix = 0.0;
    double best = 0.0;
    bool have = false;
    auto consider = [&](double alpha) {
        double h = alpha * alpha / gamma;
        for (double v : a) {
            const double d = v - alpha;
            if (d > 0.0) h += d * d;
        }
        if (!have || h < best) {
            best = h;
            have = true;
        }
    };
    // On the segment where exactly the top k magnitudes exceed alpha the
    // stationary point is alpha = S_k / (1/gamma + k).
    for (std::size_t k = 1; k <= a.size(); ++k) {
        prefix += a[k - 1];
        const double alpha = prefix / (1.0 / gamma + static_cast<double>(k));
        const double seg_hi = a[k - 1];
        const double seg_lo = k < a.size() ? a[k] : 0.0;
        if (alpha >= seg_lo && alpha <= seg_hi) consider(alpha);
    }
    for (double v : a) consider(v);  // segment endpoints
    consider(0.0);
    return best;
}

inline double frob_diff(const bcode::Matrix& a, const bcode::Matrix& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a.data()[i] - b.data()[i];
        s += d * d;
    }
    return std::sqrt(s);
}

inline double inner_product(const bcode::Matrix& a, const bcode::Matrix& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a.data()[i] * b.data()[i];
    return s;
}

// Deterministic piecewise-smooth test scene: smooth gradients, two oriented
// sinusoidal textures, a disk and a bar with sharp edges. Patch-scale detail
// is repeated across the image so a patch dictionary can represent it.
inline bcode::Image make_test_image(std::size_t width, std::size_t height) {
    bcode::Image img(width, height);
    const double pi = 3.14159265358979323846;
    for (std::size_t r = 0; r < height; ++r) {
        for (std::size_t c = 0; c < width; ++c) {
            const double x = static_cast<double>(c) / static_cast<double>(width);
            const double y = static_cast<double>(r) / static_cast<double>(height);
            double v = 0.46 + 0.20 * std::sin(2.0 * pi * (0.9 * x + 0.15)) *
                                  std::cos(2.0 * pi * (0.7 * y + 0.1));
            if (y < 0.5)
                v += 0.10 * std::sin(2.0 * pi * (static_cast<double>(c) * 0.16 +
                                                 static_cast<double>(r) * 0.06));
            else
                v += 0.09 * std::sin(2.0 * pi * (static_cast<double>(r) * 0.21 -
                                                 static_cast<double>(c) * 0.05));
            const double dx = x - 0.3, dy = y - 0.32;
            if (dx * dx + dy * dy < 0.028) v += 0.16;
            if (x > 0.62 && x < 0.8 && y > 0.58 && y < 0.9) v -= 0.14;
            img(r, c) = std::clamp(v, 0.02, 0.98);
        }
    }
    return img;
}

}  // namespace testsupport
