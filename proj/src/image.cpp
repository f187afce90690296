#include "bcode/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

namespace bcode {

namespace {

struct PgmScanner {
    explicit PgmScanner(std::vector<std::uint8_t> bytes_in) : bytes(std::move(bytes_in)) {}

    [[noreturn]] void fail(const std::string& what) const {
        throw IoError("malformed PGM at byte offset " + std::to_string(pos) + ": " + what);
    }

    void skip_space_and_comments() {
        while (pos < bytes.size()) {
            const char c = static_cast<char>(bytes[pos]);
            if (c == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos;
            } else {
                break;
            }
        }
    }

    std::size_t read_number() {
        skip_space_and_comments();
        if (pos >= bytes.size()) fail("unexpected end of header");
        if (!std::isdigit(bytes[pos])) fail("expected a decimal number");
        std::size_t value = 0;
        while (pos < bytes.size() && std::isdigit(bytes[pos])) {
            value = value * 10 + static_cast<std::size_t>(bytes[pos] - '0');
            if (value > 1'000'000'000) fail("header number out of range");
            ++pos;
        }
        return value;
    }

    std::vector<std::uint8_t> bytes;
    std::size_t pos = 0;
};

}  // namespace

Image read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());

    PgmScanner s(std::move(bytes));
    if (s.bytes.size() < 2 || s.bytes[0] != 'P' || s.bytes[1] != '5')
        s.fail("missing P5 magic");
    s.pos = 2;
    const std::size_t width = s.read_number();
    const std::size_t height = s.read_number();
    const std::size_t maxval = s.read_number();
    if (width == 0 || height == 0) s.fail("zero image dimension");
    if (maxval != 255) s.fail("unsupported maxval (expected 255)");
    if (s.pos >= s.bytes.size() ||
        !std::isspace(static_cast<unsigned char>(s.bytes[s.pos])))
        s.fail("missing single whitespace after maxval");
    ++s.pos;  // exactly one separator byte before the raster

    const std::size_t need = width * height;
    if (s.bytes.size() - s.pos < need) {
        s.pos = s.bytes.size();
        s.fail("raster truncated (expected " + std::to_string(need) + " bytes)");
    }

    Image img(width, height);
    for (std::size_t i = 0; i < need; ++i)
        img.pixels[i] = static_cast<double>(s.bytes[s.pos + i]) / 255.0;
    return img;
}

std::vector<std::uint8_t> encode_pgm(const Image& img) {
    std::string header = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) +
                         "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(out.size() + img.pixels.size());
    for (double v : img.pixels) {
        const double c = std::clamp(v, 0.0, 1.0);
        out.push_back(static_cast<std::uint8_t>(std::lround(255.0 * c)));
    }
    return out;
}

void write_pgm(const std::string& path, const Image& img) {
    const std::vector<std::uint8_t> bytes = encode_pgm(img);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write to '" + path + "'");
}

Image add_noise(const Image& img, double sigma, std::uint64_t seed) {
    if (!(sigma > 0.0)) throw std::invalid_argument("add_noise: sigma must be positive");
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Image out = img;
    for (double& v : out.pixels) v += sigma * gauss(gen);
    return out;
}

double psnr(const Image& reference, const Image& test) {
    if (reference.width != test.width || reference.height != test.height)
        throw std::invalid_argument("psnr: image dimensions differ");
    double sq = 0.0;
    for (std::size_t i = 0; i < reference.pixels.size(); ++i) {
        const double d = reference.pixels[i] - test.pixels[i];
        sq += d * d;
    }
    const double rmse = std::sqrt(sq / static_cast<double>(reference.pixels.size()));
    if (rmse == 0.0) return 99.0;
    return std::min(99.0, 20.0 * std::log10(1.0 / rmse));
}

}  // namespace bcode
