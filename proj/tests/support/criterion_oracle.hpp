// Test-only re-implementation of the three selection criteria, written
// straight from the code-length formulas with exact big-integer
// combinatorics, plus an independent brute-force enumerator. Shares only
// input data (layer histograms and memberships) with the library.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mdlhisto/selector.hpp"
#include "support/exact_combinatorics.hpp"

namespace testsupport {

namespace oracle_detail {

inline double log2_clamped(double x) { return std::log2(std::max(x, 1.0)); }
inline double log2log2_clamped(double x) { return log2_clamped(log2_clamped(x)); }

struct ResidualBins {
    std::vector<double> edges;
    std::vector<std::int64_t> counts;
};

inline std::size_t locate(const std::vector<double>& edges, double x) {
    auto it = std::upper_bound(edges.begin(), edges.end(), x);
    auto i = static_cast<std::size_t>(it - edges.begin());
    if (i == 0 || x > edges.back()) throw std::logic_error("oracle: value out of range");
    --i;
    if (i == edges.size() - 1) --i;
    return i;
}

inline ResidualBins residual_equal_width(const std::vector<double>& values, int m_requested,
                                         double delta) {
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it;
    double span = *hi_it - lo;
    if (span < delta) span = delta;
    const int cells = static_cast<int>(std::floor(span / delta * (1.0 + 1e-12)));
    const int m = std::max(1, std::min(m_requested, cells));
    ResidualBins rb;
    const double a = lo, b = std::max(lo + span, *hi_it);
    for (int i = 0; i <= m; ++i)
        rb.edges.push_back(a + (b - a) * (static_cast<double>(i) / m));
    rb.edges.back() = b;
    rb.counts.assign(static_cast<std::size_t>(m), 0);
    for (double v : values) ++rb.counts[locate(rb.edges, v)];
    return rb;
}

inline ResidualBins residual_equal_mass(const std::vector<double>& values, int m_requested,
                                        double delta) {
    double abs_sum = 0.0;
    for (double v : values) abs_sum += std::abs(v);
    ResidualBins rb;
    if (abs_sum == 0.0) {
        rb.edges = {-0.5 * delta, 0.5 * delta};
        rb.counts = {static_cast<std::int64_t>(values.size())};
        return rb;
    }
    const double mean_abs = abs_sum / static_cast<double>(values.size());
    const double lambda = std::log1p(delta / mean_abs) / delta;

    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    double a = std::floor(*lo_it / delta + 1e-9) * delta;
    double b = std::ceil(*hi_it / delta - 1e-9) * delta;
    if (a > *lo_it) a -= delta;
    if (b < *hi_it) b += delta;
    if (b - a < delta) b = a + delta;

    rb.edges.push_back(a);
    for (int i = 1; i < m_requested; ++i) {
        const double p = static_cast<double>(i) / m_requested;
        const double q = p < 0.5 ? std::log(2.0 * p) / lambda : -std::log(2.0 * (1.0 - p)) / lambda;
        double e = 0.0;
        if (q != 0.0)
            e = (q > 0 ? 1.0 : -1.0) * std::ceil(std::abs(q) / delta - 1e-9) * delta;
        if (e - rb.edges.back() >= delta * (1.0 - 1e-9) && b - e >= delta * (1.0 - 1e-9))
            rb.edges.push_back(e);
    }
    rb.edges.push_back(b);
    rb.counts.assign(rb.edges.size() - 1, 0);
    for (double v : values) ++rb.counts[locate(rb.edges, v)];
    return rb;
}

}  // namespace oracle_detail

// Straight-from-formula evaluation of one (selection, M) pair.
inline double oracle_criterion(const mdlhisto::selector::LayerSet& ls,
                               const mdlhisto::selector::Selection& sel,
                               mdlhisto::selector::Criterion crit, int m_requested,
                               bool literal = false) {
    using mdlhisto::selector::Criterion;
    namespace od = oracle_detail;
    const double delta = ls.delta;

    double total = 0.0;
    std::int64_t k_total = 0;
    std::vector<double> residual;
    for (std::size_t j = 0; j < ls.layers.size(); ++j) {
        const auto& layer = ls.layers[j];
        const auto n_j = static_cast<std::int64_t>(layer.coeffs.size());
        std::vector<char> keep(layer.hist.bin_count(), 0);
        for (int b : sel.retained[j]) keep[static_cast<std::size_t>(b)] = 1;

        std::vector<std::int64_t> slots;
        std::int64_t k_j = 0;
        double w_bits = 0.0;
        for (std::size_t b = 0; b < layer.hist.bin_count(); ++b) {
            if (keep[b]) {
                slots.push_back(layer.hist.counts[b]);
                k_j += layer.hist.counts[b];
                const double ratio = std::log2(layer.hist.width(b) / delta);
                w_bits += (literal && crit != Criterion::LayeredFixed)
                              ? ratio
                              : static_cast<double>(layer.hist.counts[b]) * ratio;
            } else {
                for (int idx : layer.members[b])
                    residual.push_back(layer.coeffs[static_cast<std::size_t>(idx)]);
            }
        }
        if (layer.hist.bin_count() == 0)
            residual.insert(residual.end(), layer.coeffs.begin(), layer.coeffs.end());
        k_total += k_j;

        const auto s_j = static_cast<std::int64_t>(sel.retained[j].size());
        if (crit == Criterion::GlobalVariableAlt) {
            total += exact_log2_multinomial(slots) + exact_log2_binomial(k_j + s_j, k_j) + w_bits;
        } else {
            slots.push_back(n_j - k_j);
            total += exact_log2_multinomial(slots) + exact_log2_binomial(n_j + s_j + 1, n_j) +
                     w_bits;
        }
    }

    if (residual.empty()) return total;
    const auto n_res = static_cast<std::int64_t>(residual.size());
    const od::ResidualBins rb = crit == Criterion::LayeredFixed
                                    ? od::residual_equal_width(residual, m_requested, delta)
                                    : od::residual_equal_mass(residual, m_requested, delta);
    const auto m_eff = static_cast<std::int64_t>(rb.counts.size());
    double w_bits = 0.0;
    for (std::size_t l = 0; l < rb.counts.size(); ++l) {
        const double ratio = std::log2((rb.edges[l + 1] - rb.edges[l]) / delta);
        w_bits += (literal && crit != Criterion::LayeredFixed)
                      ? ratio
                      : static_cast<double>(rb.counts[l]) * ratio;
    }

    switch (crit) {
        case Criterion::LayeredFixed: {
            total += exact_log2_multinomial(rb.counts) +
                     exact_log2_binomial(n_res + m_eff, m_eff) + w_bits;
            const double cells = (rb.edges.back() - rb.edges.front()) / delta;
            total += od::log2_clamped(cells) + od::log2log2_clamped(cells);
            if (m_eff >= 2)
                total += std::log2(static_cast<double>(m_eff)) +
                         2.0 * od::log2_clamped(std::log2(static_cast<double>(m_eff)));
            break;
        }
        case Criterion::GlobalVariable:
            total += exact_log2_multinomial(rb.counts) +
                     exact_log2_binomial(n_res + m_eff, m_eff) + w_bits;
            break;
        case Criterion::GlobalVariableAlt: {
            std::vector<std::int64_t> slots = rb.counts;
            slots.push_back(k_total);
            total += exact_log2_multinomial(slots) +
                     exact_log2_binomial(ls.total_count + m_eff + 1, m_eff) + w_bits;
            break;
        }
    }
    return total;
}

// min over the residual bin search set, first strictly-smaller entry wins
inline double oracle_best_m(const mdlhisto::selector::LayerSet& ls,
                            const mdlhisto::selector::Selection& sel,
                            const mdlhisto::selector::SearchOptions& opts) {
    double best = std::numeric_limits<double>::infinity();
    for (int m : opts.residual_bin_search)
        best = std::min(best, oracle_criterion(ls, sel, opts.criterion, m,
                                               opts.literal_width_cost));
    return best;
}

struct OracleSearchResult {
    mdlhisto::selector::Selection selection;
    double total = 0.0;
};

// Recursive per-layer enumeration (deliberately unlike the library's flat
// bitmask walk), same tie-break: fewer bins, then lexicographic.
inline OracleSearchResult oracle_exhaustive(const mdlhisto::selector::LayerSet& ls,
                                            const mdlhisto::selector::SearchOptions& opts) {
    OracleSearchResult best;
    best.total = std::numeric_limits<double>::infinity();
    std::vector<std::pair<std::size_t, std::size_t>> best_key;

    mdlhisto::selector::Selection sel = mdlhisto::selector::Selection::none_of(ls);
    std::vector<std::pair<std::size_t, std::size_t>> key;

    auto recurse = [&](auto&& self, std::size_t j) -> void {
        if (j == ls.layers.size()) {
            const double total = oracle_best_m(ls, sel, opts);
            const bool better =
                total < best.total ||
                (total == best.total && (key.size() < best_key.size() ||
                                         (key.size() == best_key.size() && key < best_key)));
            if (better) {
                best.total = total;
                best.selection = sel;
                best_key = key;
            }
            return;
        }
        const std::size_t bins = ls.layers[j].hist.bin_count();
        const std::uint32_t limit = 1u << bins;
        for (std::uint32_t bits = 0; bits < limit; ++bits) {
            sel.retained[j].clear();
            const std::size_t key_mark = key.size();
            for (std::size_t b = 0; b < bins; ++b) {
                if ((bits >> b) & 1u) {
                    sel.retained[j].push_back(static_cast<int>(b));
                    key.emplace_back(j, b);
                }
            }
            self(self, j + 1);
            key.resize(key_mark);
        }
        sel.retained[j].clear();
    };
    recurse(recurse, 0);
    return best;
}

}  // namespace testsupport
