#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "mdlhisto/denoiser.hpp"

namespace mdlhisto::bench {

enum class NoiseKind { None, Gaussian, Gamma };

// Gamma noise is mean-shifted to zero (shape*scale subtracted), so its
// variance is shape*scale^2; the defaults match the Gaussian sigma=10 case.
struct NoiseSpec {
    NoiseKind kind = NoiseKind::Gaussian;
    double sigma = 10.0;
    double gamma_shape = 2.0;
    double gamma_scale = 7.0710678118654755;  // sqrt(50): variance 100
    std::uint64_t seed = 1;
};

// Deterministic draws built on mt19937_64 with explicit Box-Muller and
// Marsaglia-Tsang transforms, so streams are identical across standard
// library implementations (the standard pins the engine but not the
// distributions).
class NoiseSampler {
  public:
    explicit NoiseSampler(std::uint64_t seed) : engine_(seed) {}
    double uniform();   // strictly inside (0, 1)
    double gaussian();  // standard normal
    double gamma(double shape, double scale);

  private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Ramp over the first quarter (0 to 100), four sinusoid cycles of amplitude
// 100 over the second quarter, and a two-valued +/-100 square wave over the
// second half. n must be >= 4 and divisible by 4.
std::vector<double> gen_test_signal(int n);

std::vector<double> add_noise(std::span<const double> signal, const NoiseSpec& spec);

enum class ThresholdMode { Hard, Soft };

// hard: zero when |c| <= t; soft: shrink toward zero by t
double apply_threshold(double c, double t, ThresholdMode mode);

// Fixed-form (universal threshold) baseline: t = sigma_hat * sqrt(2 ln n)
// with sigma_hat = median(|finest detail|)/0.6745.
std::vector<double> universal_threshold_denoise(std::span<const double> signal,
                                                ThresholdMode mode, int wavelet_order,
                                                int levels);

double mae(std::span<const double> a, std::span<const double> b);
double mse(std::span<const double> a, std::span<const double> b);
double mae(const wavelet::Grid& a, const wavelet::Grid& b);
double mse(const wavelet::Grid& a, const wavelet::Grid& b);

struct BenchRow {
    std::string method;
    std::uint64_t seed = 0;
    double mae = 0.0;
    double mse = 0.0;
    std::optional<double> codelen_total;  // MDL methods only
    std::optional<double> timing_ms;      // filled only when requested
    std::optional<std::string> error;     // method failure, run continues
};

struct MethodAggregate {
    std::string method;
    double median_mae = 0.0;
    double iqr_mae = 0.0;
    double median_mse = 0.0;
};

struct BenchReport {
    int signal_length = 0;
    NoiseSpec noise;  // template; per-row seed varies
    std::vector<std::uint64_t> seeds;
    std::vector<std::string> methods;
    std::vector<BenchRow> rows;        // one per method x seed
    std::vector<MethodAggregate> aggregates;
};

// Known method names: identity, fixedform (soft), fixedform-hard,
// fixedform-soft, mdl-fixed, mdl-variable, mdl-variable-alt, and the
// -lowfreq variants of the mdl methods.
std::vector<std::string> known_methods();
bool is_known_method(const std::string& name);

struct BenchOptions {
    std::vector<std::string> methods;
    std::vector<std::uint64_t> seeds;
    NoiseSpec noise;
    int signal_length = 4000;
    denoise::DenoiseConfig config;
    bool record_timing = false;
};

BenchReport run_benchmark(const BenchOptions& options);

// median and interquartile range with linear interpolation between order
// statistics
double median(std::vector<double> values);
double quantile(std::vector<double> values, double p);

}  // namespace mdlhisto::bench
