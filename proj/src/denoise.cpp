#include "bcode/denoise.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "bcode/kernels.hpp"
#include "bcode/linalg.hpp"

namespace bcode {

namespace {

std::vector<std::size_t> axis_origins(std::size_t extent, std::size_t patch, std::size_t stride) {
    std::vector<std::size_t> out;
    for (std::size_t p = 0; p + patch <= extent; p += stride) out.push_back(p);
    if (out.back() + patch != extent) out.push_back(extent - patch);
    return out;
}

}  // namespace

ExtractedPatches extract_patches(const Image& img, std::size_t patch_size, std::size_t stride) {
    if (patch_size == 0 || stride == 0)
        throw std::invalid_argument("extract_patches: patch size and stride must be positive");
    if (patch_size > img.width || patch_size > img.height)
        throw std::invalid_argument("extract_patches: image smaller than patch");

    const std::vector<std::size_t> row_origins = axis_origins(img.height, patch_size, stride);
    const std::vector<std::size_t> col_origins = axis_origins(img.width, patch_size, stride);

    ExtractedPatches out;
    out.grid.patch_size = patch_size;
    out.grid.stride = stride;
    out.grid.image_width = img.width;
    out.grid.image_height = img.height;
    for (std::size_t r : row_origins)
        for (std::size_t c : col_origins) out.grid.origins.emplace_back(r, c);

    const std::size_t dim = patch_size * patch_size;
    const std::size_t count = out.grid.origins.size();
    out.x = Matrix(dim, count);
    out.grid.means.assign(count, 0.0);

    const std::ptrdiff_t pcount = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static) if (pcount > 16)
    for (std::ptrdiff_t j = 0; j < pcount; ++j) {
        const std::size_t uj = static_cast<std::size_t>(j);
        const auto [r0, c0] = out.grid.origins[uj];
        double mean = 0.0;
        for (std::size_t r = 0; r < patch_size; ++r)
            for (std::size_t c = 0; c < patch_size; ++c) mean += img(r0 + r, c0 + c);
        mean /= static_cast<double>(dim);
        out.grid.means[uj] = mean;
        for (std::size_t r = 0; r < patch_size; ++r)
            for (std::size_t c = 0; c < patch_size; ++c)
                out.x(r * patch_size + c, uj) = img(r0 + r, c0 + c) - mean;
    }
    return out;
}

Matrix refit_support(const Matrix& basis, const Matrix& weights, const Matrix& x, double tau) {
    if (basis.cols() != weights.rows() ||
        (basis.cols() > 0 && (basis.rows() != x.rows() || weights.cols() != x.cols())))
        throw std::invalid_argument("refit_support: shapes do not conform");
    if (!(tau > 0.0)) throw std::invalid_argument("refit_support: tau must be positive");

    Matrix out(weights.rows(), weights.cols());
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(weights.cols());
#pragma omp parallel for schedule(static) if (n > 8)
    for (std::ptrdiff_t j = 0; j < n; ++j) {
        const std::size_t uj = static_cast<std::size_t>(j);
        std::vector<std::size_t> support;
        for (std::size_t i = 0; i < weights.rows(); ++i)
            if (std::abs(weights(i, uj)) > tau) support.push_back(i);
        if (support.empty()) continue;

        const std::size_t s = support.size();
        Matrix gram(s, s);
        std::vector<double> rhs(s, 0.0);
        for (std::size_t a = 0; a < s; ++a) {
            for (std::size_t b = a; b < s; ++b) {
                double acc = 0.0;
                for (std::size_t p = 0; p < basis.rows(); ++p)
                    acc += basis(p, support[a]) * basis(p, support[b]);
                gram(a, b) = acc;
                gram(b, a) = acc;
            }
            double r = 0.0;
            for (std::size_t p = 0; p < basis.rows(); ++p) r += basis(p, support[a]) * x(p, uj);
            rhs[a] = r;
            gram(a, a) += 1e-10;
        }
        const std::vector<double> sol = solve_spd(gram, rhs);
        for (std::size_t a = 0; a < s; ++a) out(support[a], uj) = sol[a];
    }
    return out;
}

Image reconstruct(const Matrix& basis, const Matrix& weights, const PatchGrid& grid) {
    if (basis.cols() != weights.rows())
        throw std::invalid_argument("reconstruct: basis and weights do not conform");
    if (weights.cols() != grid.origins.size() && basis.cols() > 0)
        throw std::invalid_argument("reconstruct: weights do not match patch count");
    if (basis.cols() > 0 && basis.rows() != grid.patch_size * grid.patch_size)
        throw std::invalid_argument("reconstruct: basis rows do not match patch size");

    const std::size_t dim = grid.patch_size * grid.patch_size;
    Matrix coded(dim, grid.origins.size());
    if (basis.cols() > 0) coded = kernels::matmul(basis, weights);

    Image sums(grid.image_width, grid.image_height);
    std::vector<double> counts(sums.pixels.size(), 0.0);
    // Serial patch-order accumulation keeps the overlap average reproducible.
    for (std::size_t j = 0; j < grid.origins.size(); ++j) {
        const auto [r0, c0] = grid.origins[j];
        const double mean = grid.means[j];
        for (std::size_t r = 0; r < grid.patch_size; ++r)
            for (std::size_t c = 0; c < grid.patch_size; ++c) {
                const std::size_t pix = (r0 + r) * grid.image_width + (c0 + c);
                sums.pixels[pix] += coded(r * grid.patch_size + c, j) + mean;
                counts[pix] += 1.0;
            }
    }
    for (std::size_t i = 0; i < sums.pixels.size(); ++i) {
        if (counts[i] == 0.0)
            throw std::logic_error("reconstruct: pixel not covered by any patch");
        sums.pixels[i] /= counts[i];
    }
    return sums;
}

DenoiseOutcome denoise_image(const Image& noisy, const DenoiseOptions& options,
                             const Image* clean) {
    const auto start = std::chrono::steady_clock::now();

    ExtractedPatches patches = extract_patches(noisy, options.patch_size, options.stride);

    DenoiseOutcome out;
    if (options.method == CodingMethod::boosted) {
        out.coding = boosted_coding(patches.x, options.params, options.oracle, options.solver,
                                    options.oracle_cfg);
    } else {
        out.coding = alternating_optimization(patches.x, options.solver.max_basis,
                                              options.params.lambda, options.solver);
    }

    const Matrix refit =
        refit_support(out.coding.basis, out.coding.weights, patches.x, options.refit_tau);
    out.image = reconstruct(out.coding.basis, refit, patches.grid);

    const auto stop = std::chrono::steady_clock::now();

    DenoiseReport& rep = out.report;
    rep.basis_size = out.coding.basis.cols();
    rep.lambda = options.params.lambda;
    rep.gamma = options.params.gamma;
    rep.solver = options.solver;
    rep.method = to_string(options.method);
    rep.oracle = to_string(options.oracle);
    rep.patch_size = options.patch_size;
    rep.stride = options.stride;
    rep.seed = options.solver.seed;
    rep.wall_time = std::chrono::duration<double>(stop - start).count();
    if (clean != nullptr) {
        const Matrix zero_w(out.coding.basis.cols(), patches.x.cols());
        const Image patch_avg = reconstruct(out.coding.basis, zero_w, patches.grid);
        rep.psnr_noisy = psnr(*clean, noisy);
        rep.psnr_patch_avg = psnr(*clean, patch_avg);
        rep.psnr_denoised = psnr(*clean, out.image);
    }
    return out;
}

Image render_basis_tiles(const Matrix& basis, std::size_t patch_size) {
    if (basis.rows() != patch_size * patch_size)
        throw std::invalid_argument("render_basis_tiles: basis rows do not match patch size");
    const std::size_t k = basis.cols();
    if (k == 0) return Image(patch_size, patch_size);

    const std::size_t tiles_per_row =
        static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(k))));
    const std::size_t tile_rows = (k + tiles_per_row - 1) / tiles_per_row;
    const std::size_t cell = patch_size + 1;
    Image img(tiles_per_row * cell + 1, tile_rows * cell + 1);

    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t tr = j / tiles_per_row;
        const std::size_t tc = j % tiles_per_row;
        double lo = basis(0, j), hi = basis(0, j);
        for (std::size_t i = 0; i < basis.rows(); ++i) {
            lo = std::min(lo, basis(i, j));
            hi = std::max(hi, basis(i, j));
        }
        const double span = hi > lo ? hi - lo : 1.0;
        for (std::size_t r = 0; r < patch_size; ++r)
            for (std::size_t c = 0; c < patch_size; ++c)
                img(tr * cell + 1 + r, tc * cell + 1 + c) =
                    (basis(r * patch_size + c, j) - lo) / span;
    }
    return img;
}

const char* to_string(CodingMethod method) {
    return method == CodingMethod::boosted ? "boosted" : "alternating";
}

const char* to_string(OracleKind oracle) {
    switch (oracle) {
        case OracleKind::l1: return "l1";
        case OracleKind::l21: return "l21";
        case OracleKind::heuristic: return "heuristic";
        case OracleKind::exemplar: return "exemplar";
    }
    return "unknown";
}

}  // namespace bcode
