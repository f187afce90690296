#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bcode/image.hpp"
#include "bcode/matrix.hpp"
#include "bcode/solvers.hpp"

namespace bcode {

// Patch bookkeeping for the round trip image -> columns -> image. Origins are
// top-left corners in row-major order; a final flush origin is added per axis
// when the regular stride does not reach the image edge.
struct PatchGrid {
    std::size_t patch_size = 8;
    std::size_t stride = 4;
    std::vector<std::pair<std::size_t, std::size_t>> origins;  // (row, col)
    std::vector<double> means;                                 // per-patch mean
    std::size_t image_width = 0;
    std::size_t image_height = 0;
};

struct ExtractedPatches {
    Matrix x;  // patch_size^2 x num_patches, mean-subtracted columns
    PatchGrid grid;
};

ExtractedPatches extract_patches(const Image& img, std::size_t patch_size = 8,
                                 std::size_t stride = 4);

// Per-column unregularized least-squares refit on the support
// {i : |W_ij| > tau}; empty supports stay zero. Rank-deficient systems are
// ridge-jittered (1e-10), never an error.
Matrix refit_support(const Matrix& basis, const Matrix& weights, const Matrix& x, double tau);

// Un-flattens each coded patch (plus its stored mean) to its origin and
// overlap-averages; accumulation order is fixed so results are reproducible.
Image reconstruct(const Matrix& basis, const Matrix& weights, const PatchGrid& grid);

enum class CodingMethod { boosted, alternating };

struct DenoiseOptions {
    CodingMethod method = CodingMethod::boosted;
    OracleKind oracle = OracleKind::heuristic;
    RegParams params{0.1, 1.0};
    SolverOptions solver{};
    OracleConfig oracle_cfg{};
    std::size_t patch_size = 8;
    std::size_t stride = 4;
    double refit_tau = 1e-8;
};

// PSNR fields are present only when a clean reference image was supplied.
struct DenoiseReport {
    std::optional<double> psnr_noisy;
    std::optional<double> psnr_patch_avg;
    std::optional<double> psnr_denoised;
    std::size_t basis_size = 0;
    double lambda = 0.0;
    double gamma = 0.0;
    SolverOptions solver{};
    std::string method;
    std::string oracle;
    std::size_t patch_size = 0;
    std::size_t stride = 0;
    std::uint64_t seed = 0;
    double wall_time = 0.0;  // seconds
};

struct DenoiseOutcome {
    Image image;
    DenoiseReport report;
    CodingResult coding;
};

// The full pipeline: extract patches, code them with the chosen method, refit
// the nonzero supports without regularization, reconstruct by overlap
// averaging, and report PSNRs against the clean image when one is given.
DenoiseOutcome denoise_image(const Image& noisy, const DenoiseOptions& options,
                             const Image* clean = nullptr);

// Tiled rendering of basis columns as patch_size x patch_size tiles (min-max
// normalized per tile, selection order left-to-right then top-to-bottom,
// 1-pixel separators).
Image render_basis_tiles(const Matrix& basis, std::size_t patch_size);

const char* to_string(CodingMethod method);
const char* to_string(OracleKind oracle);

}  // namespace bcode
