#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bcode {

// Grayscale image with nominal [0,1] intensities. Values outside the range
// are allowed internally (unclamped noise); export clamps and quantizes.
struct Image {
    Image() = default;
    Image(std::size_t width_in, std::size_t height_in)
        : width(width_in), height(height_in), pixels(width_in * height_in, 0.0) {}

    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<double> pixels;  // row-major

    double operator()(std::size_t r, std::size_t c) const { return pixels[r * width + c]; }
    double& operator()(std::size_t r, std::size_t c) { return pixels[r * width + c]; }
};

// File-format or I/O failure; the message carries the offending byte offset
// (PGM) or line number (CSV).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Binary 8-bit PGM ("P5", maxval 255). Intensities map v/255 on read and
// round(255*clamp(v,0,1)) on write.
Image read_pgm(const std::string& path);
void write_pgm(const std::string& path, const Image& img);
std::vector<std::uint8_t> encode_pgm(const Image& img);

// Seeded i.i.d. Gaussian pixel noise; the result is intentionally unclamped.
Image add_noise(const Image& img, double sigma, std::uint64_t seed);

// 20*log10(1/RMSE) with peak 1.0, capped at 99.0 dB for identical images.
double psnr(const Image& reference, const Image& test);

}  // namespace bcode
