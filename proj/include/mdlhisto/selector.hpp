#pragma once

#include <cstdint>
#include <vector>

#include "mdlhisto/histo.hpp"

namespace mdlhisto::selector {

enum class HistogramMode { FixedWidth, VariableWidth };

// Which code-length formula scores a selection. LayeredFixed pairs with
// equal-width layer histograms over a common range and an equal-width
// residual histogram plus explicit parameter costs. GlobalVariable uses
// per-layer native ranges with equal-mass bins everywhere; its Alt form
// moves the cost of locating non-selected coefficients from the layer
// terms into the residual term.
enum class Criterion { LayeredFixed, GlobalVariable, GlobalVariableAlt };

// One wavelet layer prepared for selection: its coefficients, the histogram
// over them, and per-bin membership (indices into coeffs, sorted by value).
// A degenerate all-zero layer carries no bins; its coefficients always land
// in the residual.
struct Layer {
    std::vector<double> coeffs;
    histo::Histogram hist;
    std::vector<std::vector<int>> members;
    double range = 0.0;

    std::int64_t count() const { return static_cast<std::int64_t>(coeffs.size()); }
    bool degenerate() const { return hist.bin_count() == 0; }
};

struct LayerSet {
    std::vector<Layer> layers;  // finest layer first
    HistogramMode mode = HistogramMode::FixedWidth;
    double delta = 0.0;
    double common_range = 0.0;  // largest native layer range
    std::int64_t total_count = 0;
};

// Builds histograms for the given detail layers (finest first). delta <= 0
// selects the default policy common_range/1024. Fixed mode bins every layer
// with width common_range/m over an interval centred on the layer's
// midrange; variable mode fits a Laplace model per layer and places
// equal-mass edges. The effective bin count may drop below bins_per_layer
// when widths would fall under delta.
LayerSet make_layer_set(const std::vector<std::vector<double>>& layer_coeffs,
                        HistogramMode mode, int bins_per_layer, double delta);

// Per-layer sets of retained bin indices (sorted ascending). Coefficients in
// retained bins are kept verbatim; all others are zeroed.
struct Selection {
    std::vector<std::vector<int>> retained;

    static Selection none_of(const LayerSet& ls);
    static Selection all_of(const LayerSet& ls);
    std::int64_t retained_bin_count() const;
};

// k_j: number of retained coefficients per layer.
std::vector<std::int64_t> retained_counts(const LayerSet& ls, const Selection& sel);

struct CodeLenBreakdown {
    std::vector<double> layer_bits;   // model cost per layer, finest first
    double residual_bits = 0.0;
    double parameter_bits = 0.0;      // LayeredFixed only
    double total = 0.0;
    int residual_bins_used = 0;       // effective residual bin count (0 = empty residual)
};

// The three criteria. residual_bins is the requested residual bin count M;
// fewer bins are used when M would violate the width >= delta constraint.
// literal_width_cost switches the variable-width data cost from the
// per-coefficient weighted sum to the unweighted per-bin sum.
CodeLenBreakdown criterion_fixed(const LayerSet& ls, const Selection& sel, int residual_bins);
CodeLenBreakdown criterion_variable(const LayerSet& ls, const Selection& sel, int residual_bins,
                                    bool literal_width_cost = false);
CodeLenBreakdown criterion_variable_alt(const LayerSet& ls, const Selection& sel,
                                        int residual_bins, bool literal_width_cost = false);

CodeLenBreakdown evaluate_criterion(const LayerSet& ls, const Selection& sel, Criterion crit,
                                    int residual_bins, bool literal_width_cost = false);

struct SearchOptions {
    Criterion criterion = Criterion::LayeredFixed;
    std::vector<int> residual_bin_search = {1, 2, 4, 8, 16, 32};
    int max_iters = 4;
    bool literal_width_cost = false;
};

struct SearchResult {
    Selection selection;
    CodeLenBreakdown breakdown;
    int chosen_residual_bins = 1;  // entry of residual_bin_search that won
};

// Visitation order for the greedy passes.
enum class GreedyOrder { MagnitudeDescending, CoarsestFirst };

// Global optimum over all subsets of all bins and all residual bin counts.
// Ties resolved by fewer retained bins, then the lexicographically smallest
// (layer, bin) set, then the earliest residual bin count. Refuses instances
// with more than 20 bins total.
SearchResult optimize_exhaustive(const LayerSet& ls, const SearchOptions& opts);

SearchResult optimize_greedy_magnitude(const LayerSet& ls, const SearchOptions& opts);
SearchResult optimize_greedy_lowfreq(const LayerSet& ls, const SearchOptions& opts);

// Greedy passes from an explicit starting selection (bins in `locked` can
// never be toggled). Used by refinement and fixed-point tests.
SearchResult greedy_from(const LayerSet& ls, const SearchOptions& opts, GreedyOrder order,
                         const Selection& start, const Selection* locked = nullptr);

struct RefineResult {
    Selection selection;
    CodeLenBreakdown breakdown;
    int chosen_residual_bins = 1;
    // Total at round zero followed by each accepted round; strictly decreasing.
    std::vector<double> accepted_totals;
};

// Successive refinement: each round splits every non-retained occupied bin
// in two (occupancy median for variable-width, midpoint for fixed), keeps
// the incoming selection locked, and re-runs the greedy over the new bins.
// A round is kept only if the total strictly decreases; the layer set is
// mutated in place for accepted rounds. Bins at width < 2*delta are skipped.
RefineResult refine_by_splitting(LayerSet& ls, const Selection& start, const SearchOptions& opts,
                                 int max_rounds, GreedyOrder order);

}  // namespace mdlhisto::selector
