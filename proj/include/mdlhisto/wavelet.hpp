#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mdlhisto::wavelet {

// Orthonormal Daubechies filter pair. The lowpass taps sum to sqrt(2) and
// have unit energy; the highpass is the quadrature mirror
// g[k] = (-1)^k h[2p-1-k] where p is the order.
struct FilterSpec {
    int order = 0;
    std::vector<double> lowpass;
    std::vector<double> highpass;

    std::size_t length() const { return lowpass.size(); }
};

// order in [1, 10]; throws std::invalid_argument otherwise.
FilterSpec daubechies_filter(int order);

// Multi-level 1D decomposition. details[0] is the finest layer (j = 1),
// details[levels-1] the coarsest; approx is the remaining lowpass band.
struct Decomposition1D {
    std::vector<std::vector<double>> details;
    std::vector<double> approx;
    int levels = 0;
    FilterSpec filter;
    std::size_t original_length = 0;

    std::size_t coefficient_count() const;
};

// Rectangular grid, row-major.
struct Grid {
    std::size_t rows = 0, cols = 0;
    std::vector<double> data;

    Grid() = default;
    Grid(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    std::size_t size() const { return data.size(); }
};

// One detail subband of a 2D decomposition. Orientation names the filter
// applied along (rows, cols): HL = highpass along rows, lowpass down columns.
enum class Orientation { HL, LH, HH };

struct Subband {
    Orientation orientation;
    int level = 0;  // 1 = finest
    Grid grid;
};

// Per level three subbands, finest level first, orientation order HL, LH, HH.
struct Decomposition2D {
    std::vector<Subband> subbands;
    Grid approx;
    int levels = 0;
    FilterSpec filter;
    std::size_t original_rows = 0, original_cols = 0;

    std::size_t coefficient_count() const;
};

// Periodic (circular) boundary handling throughout; the transform matrix is
// exactly orthonormal, so round-trip and energy identities hold to rounding.
// Signal length must be a positive multiple of 2^levels.
Decomposition1D dwt1d(std::span<const double> signal, const FilterSpec& filter, int levels);
std::vector<double> idwt1d(const Decomposition1D& decomp);

Decomposition2D dwt2d(const Grid& image, const FilterSpec& filter, int levels);
Grid idwt2d(const Decomposition2D& decomp);

}  // namespace mdlhisto::wavelet
