#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mdlhisto/wavelet.hpp"

namespace mdlhisto::io {

// One real per line, or a single comma-separated row. Throws
// std::runtime_error naming the offending line on parse failure.
std::vector<double> read_csv_signal(const std::string& path);

// One value per line, 17 significant digits.
void write_csv_signal(const std::string& path, std::span<const double> values);

struct PgmImage {
    std::size_t rows = 0, cols = 0;
    int maxval = 255;
    std::vector<int> pixels;  // row-major
};

// Accepts both P2 (ascii) and P5 (binary, 1- or 2-byte samples).
PgmImage read_pgm(const std::string& path);

// Always writes P5 with the image's maxval.
void write_pgm(const std::string& path, const PgmImage& img);

// pixel/maxval rescaling into [0,1] and back (round + clamp).
wavelet::Grid to_unit_grid(const PgmImage& img);
PgmImage from_unit_grid(const wavelet::Grid& grid, int maxval);

// Residuals lie around 0; encode (r+1)/2 * maxval, clamped.
PgmImage residual_to_pgm(const wavelet::Grid& residual, int maxval);

// %.17g, round-trip safe
std::string format_double(double v);

std::uint64_t fnv1a64(std::span<const unsigned char> bytes);
std::uint64_t fnv1a64_file(const std::string& path);

}  // namespace mdlhisto::io
