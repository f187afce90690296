#include "bcode/regularizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bcode {

RegParams::RegParams(double lambda_in, double gamma_in) : lambda(lambda_in), gamma(gamma_in) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("RegParams: lambda must be positive and finite");
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("RegParams: gamma must be positive and finite");
}

namespace {

double vector_norm(std::span<const double> v, NormOrder p) {
    switch (p) {
        case NormOrder::one: {
            double s = 0.0;
            for (double x : v) s += std::abs(x);
            return s;
        }
        case NormOrder::two: {
            double s = 0.0;
            for (double x : v) s += x * x;
            return std::sqrt(s);
        }
        case NormOrder::inf: {
            double s = 0.0;
            for (double x : v) s = std::max(s, std::abs(x));
            return s;
        }
    }
    return 0.0;
}

double max_abs(const Matrix& z) {
    double s = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) s = std::max(s, std::abs(z.data()[i]));
    return s;
}

struct RowMax {
    double value = 0.0;       // max_i sum_j ((|Z_ij| - alpha)_+)^2
    std::size_t index = 0;    // lowest attaining row
};

RowMax clamp_energy(const Matrix& z, double alpha) {
    RowMax out;
    bool first = true;
    for (std::size_t i = 0; i < z.rows(); ++i) {
        double s = 0.0;
        for (double x : z.row(i)) {
            const double d = std::abs(x) - alpha;
            if (d > 0.0) s += d * d;
        }
        if (first || s > out.value) {
            out.value = s;
            out.index = i;
            first = false;
        }
    }
    return out;
}

double g_value(const Matrix& z, double gamma, double alpha) {
    return alpha * alpha / (2.0 * gamma) + 0.5 * clamp_energy(z, alpha).value;
}

}  // namespace

double block_norm(const Matrix& m, NormOrder p, NormOrder q) {
    std::vector<double> rows(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) rows[i] = vector_norm(m.row(i), p);
    return vector_norm(rows, q);
}

double phi(const Matrix& w, const RegParams& params) {
    const double l21 = block_norm(w, NormOrder::two, NormOrder::one);
    const double l1 = block_norm(w, NormOrder::one, NormOrder::one);
    return 0.5 * l21 * l21 + 0.5 * params.gamma * l1 * l1;
}

Matrix infimal_A(const Matrix& z, double alpha) {
    if (alpha < 0.0) throw std::invalid_argument("infimal_A: alpha must be nonnegative");
    Matrix a = z;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double& x = a.data()[i];
        if (x > alpha)
            x = alpha;
        else if (x < -alpha)
            x = -alpha;
    }
    return a;
}

AlphaSolution solve_alpha(const Matrix& z, double gamma, double tol) {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("solve_alpha: gamma must be positive and finite");
    if (!z.all_finite()) throw std::invalid_argument("solve_alpha: non-finite input");

    const double zmax = max_abs(z);
    if (zmax == 0.0) return {};
    if (tol <= 0.0) tol = 1e-10 * std::max(1.0, zmax);

    // g is strictly convex (the alpha^2 term), so golden-section is safe.
    static const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0, hi = zmax;
    double c = hi - invphi * (hi - lo);
    double d = lo + invphi * (hi - lo);
    double gc = g_value(z, gamma, c);
    double gd = g_value(z, gamma, d);
    while (hi - lo > tol) {
        if (gc < gd) {
            hi = d;
            d = c;
            gd = gc;
            c = hi - invphi * (hi - lo);
            gc = g_value(z, gamma, c);
        } else {
            lo = c;
            c = d;
            gc = gd;
            d = lo + invphi * (hi - lo);
            gd = g_value(z, gamma, d);
        }
    }

    AlphaSolution out;
    out.alpha_hat = 0.5 * (lo + hi);
    const RowMax rm = clamp_energy(z, out.alpha_hat);
    out.kappa = rm.value;
    out.max_row_index = rm.index;
    out.conjugate_value = out.alpha_hat * out.alpha_hat / (2.0 * gamma) + 0.5 * rm.value;
    return out;
}

namespace {

void add_shrunk_row(Matrix& dw, const Matrix& z, std::size_t row, double alpha, double weight) {
    for (std::size_t j = 0; j < z.cols(); ++j) {
        const double v = z(row, j);
        if (std::abs(v) > alpha) dw(row, j) = weight * (v - (v > 0.0 ? alpha : -alpha));
    }
}

}  // namespace

Matrix conjugate_subgradient(const Matrix& z, double gamma, double tol) {
    const AlphaSolution sol = solve_alpha(z, gamma, tol);
    Matrix dw(z.rows(), z.cols());
    if (z.size() == 0 || sol.kappa == 0.0) return dw;
    const double alpha = sol.alpha_hat;

    // Subgradient validity requires the clamp-excess mass on the chosen rows
    // to match alpha/gamma. At a smooth optimum the single maximal row m
    // satisfies this on its own. When the optimum sits at a crossing of two
    // rows' clamp-energy curves (both attain kappa but neither is stationary),
    // a convex mixture of the straddling pair is the subgradient.
    const double target = alpha / gamma;
    struct Active {
        std::size_t row;
        double mass;  // sum_j (|Z_ij| - alpha)_+
    };
    std::vector<Active> active;
    for (std::size_t i = 0; i < z.rows(); ++i) {
        double energy = 0.0;
        double mass = 0.0;
        for (double v : z.row(i)) {
            const double d = std::abs(v) - alpha;
            if (d > 0.0) {
                energy += d * d;
                mass += d;
            }
        }
        if (energy >= sol.kappa * (1.0 - 1e-8)) active.push_back({i, mass});
    }

    const Active* above = nullptr;  // smallest mass >= target
    const Active* below = nullptr;  // largest mass <= target
    for (const Active& a : active) {
        if (a.mass >= target && (above == nullptr || a.mass < above->mass)) above = &a;
        if (a.mass <= target && (below == nullptr || a.mass > below->mass)) below = &a;
    }

    if (above == nullptr || below == nullptr || above->row == below->row ||
        above->mass == below->mass) {
        const Active* pick = above != nullptr ? above : below;
        add_shrunk_row(dw, z, pick->row, alpha, 1.0);
        return dw;
    }
    const double theta = (target - below->mass) / (above->mass - below->mass);
    add_shrunk_row(dw, z, above->row, alpha, theta);
    add_shrunk_row(dw, z, below->row, alpha, 1.0 - theta);
    return dw;
}

}  // namespace bcode
