#include "mdlhisto/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mdlhisto::bench {

namespace {

double median_abs(std::vector<double> v) {
    for (auto& x : v) x = std::abs(x);
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n == 0) throw std::invalid_argument("median of empty sequence");
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

denoise::DenoiseConfig method_config(const std::string& name,
                                     const denoise::DenoiseConfig& base) {
    denoise::DenoiseConfig c = base;
    const bool lowfreq = name.ends_with("-lowfreq");
    const std::string stem = lowfreq ? name.substr(0, name.size() - 8) : name;
    if (stem == "mdl-fixed") {
        c.hist = selector::HistogramMode::FixedWidth;
        c.criterion = selector::Criterion::LayeredFixed;
    } else if (stem == "mdl-variable") {
        c.hist = selector::HistogramMode::VariableWidth;
        c.criterion = selector::Criterion::GlobalVariable;
    } else if (stem == "mdl-variable-alt") {
        c.hist = selector::HistogramMode::VariableWidth;
        c.criterion = selector::Criterion::GlobalVariableAlt;
    }
    if (lowfreq) c.optimizer = denoise::Optimizer::GreedyLowFreq;
    return c;
}

}  // namespace

double NoiseSampler::uniform() {
    // 52 high bits plus one half-bit: never exactly 0 or 1
    return (static_cast<double>(engine_() >> 12) + 0.5) * (1.0 / 4503599627370496.0);
}

double NoiseSampler::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform(), u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

double NoiseSampler::gamma(double shape, double scale) {
    if (!(shape > 0.0) || !(scale > 0.0))
        throw std::invalid_argument("gamma noise needs positive shape and scale");
    if (shape < 1.0) {
        const double boost = std::pow(uniform(), 1.0 / shape);
        return gamma(shape + 1.0, scale) * boost;
    }
    // Marsaglia-Tsang squeeze
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = gaussian();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v * scale;
    }
}

std::vector<double> gen_test_signal(int n) {
    if (n < 4 || n % 4 != 0)
        throw std::invalid_argument("test signal length must be >= 4 and divisible by 4");
    const int q = n / 4;
    const int half_period = std::max(1, n / 16);
    std::vector<double> s(static_cast<std::size_t>(n));
    for (int i = 0; i < q; ++i)
        s[static_cast<std::size_t>(i)] = 100.0 * static_cast<double>(i) / q;
    for (int i = q; i < 2 * q; ++i)
        s[static_cast<std::size_t>(i)] =
            100.0 * std::sin(2.0 * std::numbers::pi * 4.0 * (i - q) / q);
    for (int i = 2 * q; i < n; ++i)
        s[static_cast<std::size_t>(i)] = ((i - 2 * q) / half_period) % 2 == 0 ? 100.0 : -100.0;
    return s;
}

std::vector<double> add_noise(std::span<const double> signal, const NoiseSpec& spec) {
    std::vector<double> out(signal.begin(), signal.end());
    switch (spec.kind) {
        case NoiseKind::None:
            return out;
        case NoiseKind::Gaussian: {
            if (spec.sigma < 0.0) throw std::invalid_argument("sigma must be >= 0");
            NoiseSampler rng(spec.seed);
            for (auto& x : out) x += spec.sigma * rng.gaussian();
            return out;
        }
        case NoiseKind::Gamma: {
            if (!(spec.gamma_shape > 0.0) || !(spec.gamma_scale > 0.0))
                throw std::invalid_argument("gamma noise needs positive shape and scale");
            NoiseSampler rng(spec.seed);
            const double mean = spec.gamma_shape * spec.gamma_scale;
            for (auto& x : out) x += rng.gamma(spec.gamma_shape, spec.gamma_scale) - mean;
            return out;
        }
    }
    throw std::invalid_argument("unknown noise kind");
}

double apply_threshold(double c, double t, ThresholdMode mode) {
    if (std::abs(c) <= t) return 0.0;
    if (mode == ThresholdMode::Hard) return c;
    return c > 0 ? c - t : c + t;
}

std::vector<double> universal_threshold_denoise(std::span<const double> signal,
                                                ThresholdMode mode, int wavelet_order,
                                                int levels) {
    const auto filter = wavelet::daubechies_filter(wavelet_order);
    auto decomp = wavelet::dwt1d(signal, filter, levels);
    const double sigma_hat = median_abs(decomp.details.front()) / 0.6745;
    const double t = sigma_hat * std::sqrt(2.0 * std::log(static_cast<double>(signal.size())));
    for (auto& layer : decomp.details)
        for (auto& c : layer) c = apply_threshold(c, t, mode);
    return wavelet::idwt1d(decomp);
}

double mae(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.empty())
        throw std::invalid_argument("mae needs two equal nonempty sequences");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
    return sum / static_cast<double>(a.size());
}

double mse(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.empty())
        throw std::invalid_argument("mse needs two equal nonempty sequences");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += (a[i] - b[i]) * (a[i] - b[i]);
    return sum / static_cast<double>(a.size());
}

double mae(const wavelet::Grid& a, const wavelet::Grid& b) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw std::invalid_argument("mae needs grids of equal shape");
    return mae(std::span<const double>(a.data), std::span<const double>(b.data));
}

double mse(const wavelet::Grid& a, const wavelet::Grid& b) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw std::invalid_argument("mse needs grids of equal shape");
    return mse(std::span<const double>(a.data), std::span<const double>(b.data));
}

std::vector<std::string> known_methods() {
    return {"identity",      "fixedform",        "fixedform-hard",
            "fixedform-soft", "mdl-fixed",        "mdl-variable",
            "mdl-variable-alt", "mdl-fixed-lowfreq", "mdl-variable-lowfreq",
            "mdl-variable-alt-lowfreq"};
}

bool is_known_method(const std::string& name) {
    const auto all = known_methods();
    return std::find(all.begin(), all.end(), name) != all.end();
}

double quantile(std::vector<double> values, double p) {
    if (values.empty()) throw std::invalid_argument("quantile of empty sequence");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile level must be in [0,1]");
    std::sort(values.begin(), values.end());
    const double h = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, values.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

BenchReport run_benchmark(const BenchOptions& options) {
    if (options.methods.empty()) throw std::invalid_argument("at least one method is required");
    if (options.seeds.empty()) throw std::invalid_argument("at least one seed is required");
    for (const auto& m : options.methods) {
        if (!is_known_method(m)) {
            std::string valid;
            for (const auto& k : known_methods()) valid += (valid.empty() ? "" : ", ") + k;
            throw std::invalid_argument("unknown method '" + m + "' (valid: " + valid + ")");
        }
    }

    BenchReport report;
    report.signal_length = options.signal_length;
    report.noise = options.noise;
    report.seeds = options.seeds;
    report.methods = options.methods;

    const auto clean = gen_test_signal(options.signal_length);
    for (std::uint64_t seed : options.seeds) {
        NoiseSpec spec = options.noise;
        spec.seed = seed;
        const auto noisy = add_noise(clean, spec);
        for (const auto& name : options.methods) {
            BenchRow row;
            row.method = name;
            row.seed = seed;
            const auto start = std::chrono::steady_clock::now();
            try {
                std::vector<double> denoised;
                if (name == "identity") {
                    denoised = noisy;
                } else if (name == "fixedform" || name == "fixedform-soft") {
                    denoised = universal_threshold_denoise(noisy, ThresholdMode::Soft,
                                                           options.config.wavelet_order,
                                                           options.config.levels);
                } else if (name == "fixedform-hard") {
                    denoised = universal_threshold_denoise(noisy, ThresholdMode::Hard,
                                                           options.config.wavelet_order,
                                                           options.config.levels);
                } else {
                    const auto result =
                        denoise::denoise1d(noisy, method_config(name, options.config));
                    denoised = result.denoised;
                    row.codelen_total = result.breakdown.total;
                }
                row.mae = mae(denoised, clean);
                row.mse = mse(denoised, clean);
            } catch (const std::exception& e) {
                row.error = e.what();
            }
            if (options.record_timing) {
                const auto stop = std::chrono::steady_clock::now();
                row.timing_ms =
                    std::chrono::duration<double, std::milli>(stop - start).count();
            }
            report.rows.push_back(std::move(row));
        }
    }

    for (const auto& name : options.methods) {
        std::vector<double> maes, mses;
        for (const auto& row : report.rows)
            if (row.method == name && !row.error) {
                maes.push_back(row.mae);
                mses.push_back(row.mse);
            }
        if (maes.empty()) continue;
        MethodAggregate agg;
        agg.method = name;
        agg.median_mae = median(maes);
        agg.iqr_mae = quantile(maes, 0.75) - quantile(maes, 0.25);
        agg.median_mse = median(mses);
        report.aggregates.push_back(std::move(agg));
    }
    return report;
}

}  // namespace mdlhisto::bench
