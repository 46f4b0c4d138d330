#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mdlhisto::histo {

// A partition of [edges.front(), edges.back()] into bins with occupancy
// counts. Bins are left-closed right-open; the last bin is right-closed.
// delta is the quantization precision; every bin width is >= delta.
struct Histogram {
    std::vector<double> edges;       // m+1 strictly increasing boundaries
    std::vector<std::int64_t> counts;  // m occupancies
    double delta = 0.0;

    std::size_t bin_count() const { return counts.size(); }
    std::int64_t total() const;
    double width(std::size_t i) const { return edges[i + 1] - edges[i]; }
    double range() const { return edges.empty() ? 0.0 : edges.back() - edges.front(); }
    double center(std::size_t i) const { return 0.5 * (edges[i] + edges[i + 1]); }
};

// Index of the bin containing x under the membership rule above.
// Requires edges.front() <= x <= edges.back().
std::size_t bin_index(const std::vector<double>& edges, double x);

Histogram build_equal_width(std::span<const double> values, int m, double a, double b,
                            double delta);

// Symmetric two-sided Laplace model for signed coefficients, rate lambda in
// natural-log units. The quantized one-sided mass function is
// (1 - e^{-lambda*delta}) e^{-lambda*i*delta}.
struct LaplaceModel {
    double lambda = 0.0;
    double delta = 0.0;
    double mean_abs = 0.0;
};

// lambda = ln(1 + delta/mean(|values|)) / delta. Throws if mean(|values|)=0.
LaplaceModel fit_laplace(std::span<const double> values, double delta);

// Quantile of the symmetric two-sided Laplace law, p in (0,1).
double laplace_quantile(double p, double lambda);

// Interior edges at quantiles i/m of the two-sided Laplace CDF, snapped away
// from zero onto the delta grid; outer edges at the data extremes snapped
// outward. Throws if any resulting width falls below delta or an interior
// quantile lands outside the data range (reduce m).
Histogram build_equal_mass(std::span<const double> values, int m, const LaplaceModel& model,
                           double delta);

// Tolerant variant for pipeline use: collapsed or out-of-range edges are
// dropped, so the result may have fewer than m bins (never zero).
Histogram build_equal_mass_clamped(std::span<const double> values, int m,
                                   const LaplaceModel& model, double delta);

// Code lengths in bits (base-2 logs), computed via log-gamma.
double log_multinomial(std::span<const std::int64_t> counts);
double log_binomial(std::int64_t n, std::int64_t k);

// log2 m + 2 log2 log2 m; defined as 0 for m < 2.
double model_order_cost(std::int64_t m);

// log2 of max(inner, 1) applied twice: the guarded log2 log2 used by
// parameter costs (0 whenever the inner log is degenerate).
double log2_log2_clamped(double x);

// Full-histogram code: multinomial + C(n+m, n) + per-datum width cost
// sum_i n_i log2(w_i/delta). Reduces to n*log2(w/delta) for equal widths.
double codelen_full(const Histogram& h);

// Retained-subset code: multinomial over the retained counts plus the
// (n-k) zero slot, C(n+|S|+1, n), width cost of retained data, plus m bits
// naming the subset among the 2^m possibilities.
double codelen_retained(const Histogram& h, std::span<const int> retained_bins);

}  // namespace mdlhisto::histo
