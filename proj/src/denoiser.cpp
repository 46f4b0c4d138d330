#include "mdlhisto/denoiser.hpp"

#include <limits>
#include <stdexcept>
#include <utility>

namespace mdlhisto::denoise {

namespace {

struct SelectionOutcome {
    selector::LayerSet layers;
    selector::Selection selection;
    selector::CodeLenBreakdown breakdown;
    int chosen_residual_bins = 1;
    std::vector<double> refine_totals;
};

selector::GreedyOrder refine_order(Optimizer o) {
    return o == Optimizer::GreedyLowFreq ? selector::GreedyOrder::CoarsestFirst
                                         : selector::GreedyOrder::MagnitudeDescending;
}

SelectionOutcome run_selection(std::vector<std::vector<double>> layer_coeffs,
                               const DenoiseConfig& config) {
    SelectionOutcome out;
    out.layers = selector::make_layer_set(layer_coeffs, config.hist, config.bins_per_layer,
                                          config.delta);
    selector::SearchOptions opts;
    opts.criterion = config.criterion;
    opts.residual_bin_search = config.residual_bin_search;
    opts.max_iters = config.max_greedy_iters;
    opts.literal_width_cost = config.literal_width_cost;

    if (config.all_retained) {
        out.selection = selector::Selection::all_of(out.layers);
        double best = std::numeric_limits<double>::infinity();
        for (int m : opts.residual_bin_search) {
            auto bd = selector::evaluate_criterion(out.layers, out.selection, opts.criterion, m,
                                                   opts.literal_width_cost);
            if (bd.total < best) {
                best = bd.total;
                out.breakdown = bd;
                out.chosen_residual_bins = m;
            }
        }
        out.refine_totals = {out.breakdown.total};
        return out;
    }

    selector::SearchResult found;
    switch (config.optimizer) {
        case Optimizer::Exhaustive:
            found = selector::optimize_exhaustive(out.layers, opts);
            break;
        case Optimizer::GreedyMagnitude:
            found = selector::optimize_greedy_magnitude(out.layers, opts);
            break;
        case Optimizer::GreedyLowFreq:
            found = selector::optimize_greedy_lowfreq(out.layers, opts);
            break;
    }
    out.selection = std::move(found.selection);
    out.breakdown = std::move(found.breakdown);
    out.chosen_residual_bins = found.chosen_residual_bins;
    out.refine_totals = {out.breakdown.total};

    if (config.refine_rounds > 0) {
        auto refined = selector::refine_by_splitting(out.layers, out.selection, opts,
                                                     config.refine_rounds,
                                                     refine_order(config.optimizer));
        out.selection = std::move(refined.selection);
        out.breakdown = std::move(refined.breakdown);
        out.chosen_residual_bins = refined.chosen_residual_bins;
        out.refine_totals = std::move(refined.accepted_totals);
    }
    return out;
}

// keep[i] flags per layer built from the selection's bin membership lists
std::vector<std::vector<char>> keep_flags(const selector::LayerSet& layers,
                                          const selector::Selection& sel) {
    std::vector<std::vector<char>> keep(layers.layers.size());
    for (std::size_t j = 0; j < layers.layers.size(); ++j) {
        const auto& layer = layers.layers[j];
        keep[j].assign(layer.coeffs.size(), 0);
        for (int b : sel.retained[j])
            for (int idx : layer.members[static_cast<std::size_t>(b)])
                keep[j][static_cast<std::size_t>(idx)] = 1;
    }
    return keep;
}

}  // namespace

void DenoiseConfig::validate() const {
    if (wavelet_order < 1 || wavelet_order > 10)
        throw std::invalid_argument("wavelet order must be in 1..10");
    if (levels < 1 || levels_2d < 1) throw std::invalid_argument("levels must be >= 1");
    if (bins_per_layer < 1) throw std::invalid_argument("bins per layer must be >= 1");
    if (refine_rounds < 0) throw std::invalid_argument("refinement rounds must be >= 0");
    if (max_greedy_iters < 1) throw std::invalid_argument("greedy iterations must be >= 1");
    if (residual_bin_search.empty())
        throw std::invalid_argument("residual bin search set must not be empty");
    for (int m : residual_bin_search)
        if (m < 1) throw std::invalid_argument("residual bin counts must be >= 1");
    if (criterion == selector::Criterion::LayeredFixed &&
        hist != selector::HistogramMode::FixedWidth)
        throw std::invalid_argument(
            "the layered fixed criterion requires fixed-width histograms");
}

std::pair<wavelet::Decomposition1D, wavelet::Decomposition1D> split_coefficients(
    const wavelet::Decomposition1D& decomp, const selector::LayerSet& layers,
    const selector::Selection& sel) {
    if (layers.layers.size() != decomp.details.size() ||
        sel.retained.size() != decomp.details.size())
        throw std::invalid_argument("selection does not match decomposition layer count");
    const auto keep = keep_flags(layers, sel);
    wavelet::Decomposition1D retained = decomp, residual = decomp;
    for (std::size_t j = 0; j < decomp.details.size(); ++j) {
        if (layers.layers[j].coeffs.size() != decomp.details[j].size())
            throw std::invalid_argument("layer histograms were built from another decomposition");
        for (std::size_t i = 0; i < decomp.details[j].size(); ++i) {
            if (keep[j][i])
                residual.details[j][i] = 0.0;
            else
                retained.details[j][i] = 0.0;
        }
    }
    residual.approx.assign(residual.approx.size(), 0.0);  // approximation is always kept
    return {std::move(retained), std::move(residual)};
}

std::pair<wavelet::Decomposition2D, wavelet::Decomposition2D> split_coefficients(
    const wavelet::Decomposition2D& decomp, const selector::LayerSet& layers,
    const selector::Selection& sel) {
    if (layers.layers.size() != decomp.subbands.size() ||
        sel.retained.size() != decomp.subbands.size())
        throw std::invalid_argument("selection does not match decomposition subband count");
    const auto keep = keep_flags(layers, sel);
    wavelet::Decomposition2D retained = decomp, residual = decomp;
    for (std::size_t j = 0; j < decomp.subbands.size(); ++j) {
        auto& ret = retained.subbands[j].grid.data;
        auto& res = residual.subbands[j].grid.data;
        if (layers.layers[j].coeffs.size() != ret.size())
            throw std::invalid_argument("layer histograms were built from another decomposition");
        for (std::size_t i = 0; i < ret.size(); ++i) {
            if (keep[j][i])
                res[i] = 0.0;
            else
                ret[i] = 0.0;
        }
    }
    residual.approx.data.assign(residual.approx.data.size(), 0.0);
    return {std::move(retained), std::move(residual)};
}

DenoiseResult1D denoise1d(std::span<const double> signal, const DenoiseConfig& config) {
    config.validate();
    const auto filter = wavelet::daubechies_filter(config.wavelet_order);
    const auto decomp = wavelet::dwt1d(signal, filter, config.levels);

    auto outcome = run_selection(decomp.details, config);
    auto [retained, residual_decomp] = split_coefficients(decomp, outcome.layers,
                                                          outcome.selection);

    DenoiseResult1D result;
    result.denoised = wavelet::idwt1d(retained);
    result.residual.resize(signal.size());
    for (std::size_t i = 0; i < signal.size(); ++i)
        result.residual[i] = signal[i] - result.denoised[i];
    result.retained_per_layer = selector::retained_counts(outcome.layers, outcome.selection);
    result.selection = std::move(outcome.selection);
    result.breakdown = std::move(outcome.breakdown);
    result.refine_totals = std::move(outcome.refine_totals);
    result.chosen_residual_bins = outcome.chosen_residual_bins;
    result.resolved_delta = outcome.layers.delta;
    result.layers = std::move(outcome.layers);
    result.config = config;
    return result;
}

DenoiseResult2D denoise2d(const wavelet::Grid& image, const DenoiseConfig& config) {
    config.validate();
    const auto filter = wavelet::daubechies_filter(config.wavelet_order);
    const auto decomp = wavelet::dwt2d(image, filter, config.levels_2d);

    std::vector<std::vector<double>> layer_coeffs;
    layer_coeffs.reserve(decomp.subbands.size());
    for (const auto& sb : decomp.subbands) layer_coeffs.push_back(sb.grid.data);

    auto outcome = run_selection(std::move(layer_coeffs), config);
    auto [retained, residual_decomp] = split_coefficients(decomp, outcome.layers,
                                                          outcome.selection);

    DenoiseResult2D result;
    result.denoised = wavelet::idwt2d(retained);
    result.residual = wavelet::Grid(image.rows, image.cols);
    for (std::size_t i = 0; i < image.data.size(); ++i)
        result.residual.data[i] = image.data[i] - result.denoised.data[i];
    result.retained_per_layer = selector::retained_counts(outcome.layers, outcome.selection);
    result.selection = std::move(outcome.selection);
    result.breakdown = std::move(outcome.breakdown);
    result.refine_totals = std::move(outcome.refine_totals);
    result.chosen_residual_bins = outcome.chosen_residual_bins;
    result.resolved_delta = outcome.layers.delta;
    result.layers = std::move(outcome.layers);
    result.config = config;
    return result;
}

const char* optimizer_name(Optimizer o) {
    switch (o) {
        case Optimizer::Exhaustive: return "exhaustive";
        case Optimizer::GreedyMagnitude: return "greedy-mag";
        case Optimizer::GreedyLowFreq: return "greedy-lowfreq";
    }
    return "?";
}

const char* criterion_name(selector::Criterion c) {
    switch (c) {
        case selector::Criterion::LayeredFixed: return "eq4";
        case selector::Criterion::GlobalVariable: return "eq7";
        case selector::Criterion::GlobalVariableAlt: return "eq8";
    }
    return "?";
}

const char* hist_mode_name(selector::HistogramMode m) {
    return m == selector::HistogramMode::FixedWidth ? "fixed" : "variable";
}

}  // namespace mdlhisto::denoise
