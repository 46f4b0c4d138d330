#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mdlhisto/selector.hpp"
#include "mdlhisto/wavelet.hpp"

namespace mdlhisto::denoise {

enum class Optimizer { Exhaustive, GreedyMagnitude, GreedyLowFreq };

struct DenoiseConfig {
    int wavelet_order = 5;
    int levels = 5;  // callers use levels_2d for images
    int levels_2d = 3;
    selector::HistogramMode hist = selector::HistogramMode::FixedWidth;
    selector::Criterion criterion = selector::Criterion::LayeredFixed;
    Optimizer optimizer = Optimizer::GreedyMagnitude;
    int refine_rounds = 2;
    int bins_per_layer = 8;
    std::vector<int> residual_bin_search = {1, 2, 4, 8, 16, 32};
    double delta = 0.0;  // <= 0: common_range/1024
    bool literal_width_cost = false;
    int max_greedy_iters = 4;
    bool all_retained = false;  // debug: keep every bin, skip optimization

    // throws std::invalid_argument on out-of-range or inconsistent settings
    void validate() const;
};

struct DenoiseResult1D {
    std::vector<double> denoised;
    std::vector<double> residual;  // original - denoised, elementwise
    selector::Selection selection;
    selector::CodeLenBreakdown breakdown;
    std::vector<std::int64_t> retained_per_layer;
    std::vector<double> refine_totals;  // accepted refinement totals (first = unrefined)
    selector::LayerSet layers;          // final (possibly refined) histograms
    int chosen_residual_bins = 1;
    double resolved_delta = 0.0;
    DenoiseConfig config;
};

struct DenoiseResult2D {
    wavelet::Grid denoised;
    wavelet::Grid residual;
    selector::Selection selection;
    selector::CodeLenBreakdown breakdown;
    std::vector<std::int64_t> retained_per_layer;
    std::vector<double> refine_totals;
    selector::LayerSet layers;
    int chosen_residual_bins = 1;
    double resolved_delta = 0.0;
    DenoiseConfig config;
};

DenoiseResult1D denoise1d(std::span<const double> signal, const DenoiseConfig& config);
DenoiseResult2D denoise2d(const wavelet::Grid& image, const DenoiseConfig& config);

// Splits a decomposition into the part kept by the selection (retained bins
// plus the approximation band) and the complementary residual part. The two
// sum elementwise to the original; no floating arithmetic is involved.
std::pair<wavelet::Decomposition1D, wavelet::Decomposition1D> split_coefficients(
    const wavelet::Decomposition1D& decomp, const selector::LayerSet& layers,
    const selector::Selection& sel);
std::pair<wavelet::Decomposition2D, wavelet::Decomposition2D> split_coefficients(
    const wavelet::Decomposition2D& decomp, const selector::LayerSet& layers,
    const selector::Selection& sel);

const char* optimizer_name(Optimizer o);
const char* criterion_name(selector::Criterion c);
const char* hist_mode_name(selector::HistogramMode m);

}  // namespace mdlhisto::denoise
