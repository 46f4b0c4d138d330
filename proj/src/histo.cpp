#include "mdlhisto/histo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mdlhisto::histo {

namespace {

constexpr double kLn2 = 0.6931471805599453094;
// Relative slack when comparing widths against delta, so grid-aligned edges
// are not rejected by rounding.
constexpr double kEdgeTol = 1.0 - 1e-9;

double log2_factorial(std::int64_t n) {
    return std::lgamma(static_cast<double>(n) + 1.0) / kLn2;
}

// Snap away from zero onto the delta grid.
double snap_outward(double x, double delta) {
    if (x == 0.0) return 0.0;
    const double cells = std::ceil(std::abs(x) / delta - 1e-9);
    return (x > 0 ? 1.0 : -1.0) * cells * delta;
}

std::vector<double> equal_mass_edges(std::span<const double> values, int m,
                                     const LaplaceModel& model, double delta,
                                     bool strict) {
    if (m < 1) throw std::invalid_argument("bin count must be >= 1");
    if (values.empty()) throw std::invalid_argument("cannot bin an empty value set");
    if (!(model.lambda > 0.0)) throw std::invalid_argument("Laplace model rate must be positive");
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");

    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    double a = std::floor(*lo_it / delta + 1e-9) * delta;
    double b = std::ceil(*hi_it / delta - 1e-9) * delta;
    if (a > *lo_it) a -= delta;  // grid rounding must not exclude the extremes
    if (b < *hi_it) b += delta;
    if (b - a < delta) b = a + delta;

    std::vector<double> edges{a};
    int dropped = 0;
    for (int i = 1; i < m; ++i) {
        const double q = laplace_quantile(static_cast<double>(i) / m, model.lambda);
        const double e = snap_outward(q, delta);
        if (e - edges.back() >= delta * kEdgeTol && b - e >= delta * kEdgeTol) {
            edges.push_back(e);
        } else {
            ++dropped;
        }
    }
    edges.push_back(b);
    if (strict && dropped > 0)
        throw std::invalid_argument("quantile edges collapse below width delta; reduce m");
    return edges;
}

Histogram count_into(std::span<const double> values, std::vector<double> edges,
                     double delta) {
    Histogram h;
    h.delta = delta;
    h.counts.assign(edges.size() - 1, 0);
    h.edges = std::move(edges);
    for (double v : values) ++h.counts[bin_index(h.edges, v)];
    return h;
}

}  // namespace

std::int64_t Histogram::total() const {
    std::int64_t n = 0;
    for (auto c : counts) n += c;
    return n;
}

std::size_t bin_index(const std::vector<double>& edges, double x) {
    if (edges.size() < 2 || x < edges.front() || x > edges.back())
        throw std::out_of_range("value " + std::to_string(x) + " outside histogram range");
    auto it = std::upper_bound(edges.begin(), edges.end(), x);
    std::size_t i = static_cast<std::size_t>(it - edges.begin()) - 1;
    if (i == edges.size() - 1) --i;  // x == last edge: right-closed final bin
    return i;
}

Histogram build_equal_width(std::span<const double> values, int m, double a, double b,
                            double delta) {
    if (m < 1) throw std::invalid_argument("bin count must be >= 1");
    if (!(b > a)) throw std::invalid_argument("histogram range is empty");
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
    const double w = (b - a) / m;
    if (w < delta * kEdgeTol)
        throw std::invalid_argument("bin width below quantization precision; reduce m");
    std::vector<double> edges(static_cast<std::size_t>(m) + 1);
    for (int i = 0; i <= m; ++i)
        edges[static_cast<std::size_t>(i)] = a + (b - a) * (static_cast<double>(i) / m);
    edges.back() = b;
    return count_into(values, std::move(edges), delta);
}

LaplaceModel fit_laplace(std::span<const double> values, double delta) {
    if (values.empty()) throw std::invalid_argument("cannot fit a model to no values");
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
    double sum = 0.0;
    for (double v : values) sum += std::abs(v);
    const double mean_abs = sum / static_cast<double>(values.size());
    if (mean_abs == 0.0)
        throw std::invalid_argument("all values are zero; Laplace fit is degenerate");
    return {std::log1p(delta / mean_abs) / delta, delta, mean_abs};
}

double laplace_quantile(double p, double lambda) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("quantile level must be in (0,1)");
    if (p < 0.5) return std::log(2.0 * p) / lambda;
    return -std::log(2.0 * (1.0 - p)) / lambda;
}

Histogram build_equal_mass(std::span<const double> values, int m, const LaplaceModel& model,
                           double delta) {
    return count_into(values, equal_mass_edges(values, m, model, delta, true), delta);
}

Histogram build_equal_mass_clamped(std::span<const double> values, int m,
                                   const LaplaceModel& model, double delta) {
    return count_into(values, equal_mass_edges(values, m, model, delta, false), delta);
}

double log_multinomial(std::span<const std::int64_t> counts) {
    std::int64_t n = 0;
    double denom = 0.0;
    for (auto c : counts) {
        if (c < 0) throw std::invalid_argument("negative count in multinomial");
        n += c;
        denom += log2_factorial(c);
    }
    return log2_factorial(n) - denom;
}

double log_binomial(std::int64_t n, std::int64_t k) {
    if (k < 0 || n < 0 || k > n)
        throw std::invalid_argument("log_binomial requires 0 <= k <= n");
    return log2_factorial(n) - log2_factorial(k) - log2_factorial(n - k);
}

double model_order_cost(std::int64_t m) {
    if (m < 2) return 0.0;
    const double l = std::log2(static_cast<double>(m));
    return l + 2.0 * std::log2(std::max(l, 1.0));
}

double log2_log2_clamped(double x) {
    const double inner = std::log2(std::max(x, 1.0));
    return std::log2(std::max(inner, 1.0));
}

double codelen_full(const Histogram& h) {
    double width_bits = 0.0;
    for (std::size_t i = 0; i < h.bin_count(); ++i) {
        const double w = h.width(i);
        if (w < h.delta * kEdgeTol)
            throw std::invalid_argument("bin width below quantization precision");
        width_bits += static_cast<double>(h.counts[i]) * std::log2(w / h.delta);
    }
    const std::int64_t n = h.total();
    const std::int64_t m = static_cast<std::int64_t>(h.bin_count());
    return log_multinomial(h.counts) + log_binomial(n + m, n) + width_bits;
}

double codelen_retained(const Histogram& h, std::span<const int> retained_bins) {
    const std::int64_t n = h.total();
    std::vector<std::int64_t> slots;
    slots.reserve(retained_bins.size() + 1);
    std::int64_t k = 0;
    double width_bits = 0.0;
    std::vector<bool> seen(h.bin_count(), false);
    for (int idx : retained_bins) {
        if (idx < 0 || static_cast<std::size_t>(idx) >= h.bin_count())
            throw std::out_of_range("retained bin index out of range");
        if (seen[static_cast<std::size_t>(idx)])
            throw std::invalid_argument("duplicate retained bin index");
        seen[static_cast<std::size_t>(idx)] = true;
        const auto i = static_cast<std::size_t>(idx);
        slots.push_back(h.counts[i]);
        k += h.counts[i];
        width_bits += static_cast<double>(h.counts[i]) * std::log2(h.width(i) / h.delta);
    }
    slots.push_back(n - k);
    const auto s = static_cast<std::int64_t>(retained_bins.size());
    return log_multinomial(slots) + log_binomial(n + s + 1, n) + width_bits +
           static_cast<double>(h.bin_count());
}

}  // namespace mdlhisto::histo
