#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "mdlhisto/bench.hpp"
#include "support/test_rng.hpp"

using namespace mdlhisto;
using testsupport::Rng;

TEST_CASE("test signal generation") {
    SUBCASE("length and determinism") {
        const auto a = bench::gen_test_signal(4000);
        const auto b = bench::gen_test_signal(4000);
        CHECK(a.size() == 4000);
        CHECK(a == b);
    }

    SUBCASE("square segment takes exactly two values") {
        const auto s = bench::gen_test_signal(4000);
        std::set<double> values(s.begin() + 2000, s.end());
        CHECK(values == std::set<double>{-100.0, 100.0});
    }

    SUBCASE("segment layout") {
        const auto s = bench::gen_test_signal(4000);
        CHECK(s[0] == 0.0);               // ramp starts at zero
        CHECK(s[999] == 100.0 * 999 / 1000.0);
        CHECK(s[1000] == 0.0);            // sinusoid starts at its zero crossing
        CHECK(std::abs(*std::max_element(s.begin() + 1000, s.begin() + 2000) - 100.0) <= 0.1);
    }

    SUBCASE("small lengths work") {
        CHECK(bench::gen_test_signal(4).size() == 4);
        CHECK(bench::gen_test_signal(8).size() == 8);
    }

    SUBCASE("bad lengths are rejected") {
        CHECK_THROWS_AS(bench::gen_test_signal(0), std::invalid_argument);
        CHECK_THROWS_AS(bench::gen_test_signal(6), std::invalid_argument);
        CHECK_THROWS_AS(bench::gen_test_signal(-4), std::invalid_argument);
    }
}

TEST_CASE("noise injection") {
    const auto clean = bench::gen_test_signal(4000);

    SUBCASE("none is the identity") {
        bench::NoiseSpec spec;
        spec.kind = bench::NoiseKind::None;
        CHECK(bench::add_noise(clean, spec) == clean);
    }

    SUBCASE("gaussian sample statistics") {
        bench::NoiseSpec spec;
        spec.kind = bench::NoiseKind::Gaussian;
        spec.sigma = 10.0;
        spec.seed = 7;
        const auto noisy = bench::add_noise(clean, spec);
        double mean = 0.0, var = 0.0;
        for (std::size_t i = 0; i < clean.size(); ++i) mean += noisy[i] - clean[i];
        mean /= static_cast<double>(clean.size());
        for (std::size_t i = 0; i < clean.size(); ++i) {
            const double d = noisy[i] - clean[i] - mean;
            var += d * d;
        }
        var /= static_cast<double>(clean.size() - 1);
        CHECK(std::abs(mean) <= 5.0 * 10.0 / std::sqrt(4000.0));
        CHECK(std::abs(std::sqrt(var) - 10.0) <= 0.5);
    }

    SUBCASE("gamma noise is zero-mean, matches the variance, and skews right") {
        bench::NoiseSpec spec;
        spec.kind = bench::NoiseKind::Gamma;
        spec.seed = 8;
        CHECK(spec.gamma_shape * spec.gamma_scale * spec.gamma_scale ==
              doctest::Approx(100.0).epsilon(1e-12));
        const auto noisy = bench::add_noise(clean, spec);
        std::vector<double> noise(clean.size());
        for (std::size_t i = 0; i < clean.size(); ++i) noise[i] = noisy[i] - clean[i];
        double mean = 0.0;
        for (double x : noise) mean += x;
        mean /= static_cast<double>(noise.size());
        double m2 = 0.0, m3 = 0.0;
        for (double x : noise) {
            m2 += (x - mean) * (x - mean);
            m3 += (x - mean) * (x - mean) * (x - mean);
        }
        m2 /= static_cast<double>(noise.size());
        m3 /= static_cast<double>(noise.size());
        CHECK(std::abs(mean) <= 5.0 * 10.0 / std::sqrt(4000.0));
        CHECK(m3 / std::pow(m2, 1.5) > 0.5);  // theoretical skewness is 2/sqrt(2)
    }

    SUBCASE("bad parameters are rejected") {
        bench::NoiseSpec spec;
        spec.sigma = -1.0;
        CHECK_THROWS_AS(bench::add_noise(clean, spec), std::invalid_argument);
        spec = {};
        spec.kind = bench::NoiseKind::Gamma;
        spec.gamma_shape = 0.0;
        CHECK_THROWS_AS(bench::add_noise(clean, spec), std::invalid_argument);
        spec.gamma_shape = 2.0;
        spec.gamma_scale = -1.0;
        CHECK_THROWS_AS(bench::add_noise(clean, spec), std::invalid_argument);
    }

    SUBCASE("draws are reproducible per seed and differ across seeds") {
        bench::NoiseSpec spec;
        spec.seed = 11;
        const auto a1 = bench::add_noise(clean, spec);
        const auto a2 = bench::add_noise(clean, spec);
        CHECK(a1 == a2);
        spec.seed = 12;
        CHECK(a1 != bench::add_noise(clean, spec));
    }
}

TEST_CASE("threshold map") {
    CHECK(bench::apply_threshold(3.0, 1.0, bench::ThresholdMode::Soft) == 2.0);
    CHECK(bench::apply_threshold(-0.5, 1.0, bench::ThresholdMode::Soft) == 0.0);
    CHECK(bench::apply_threshold(-3.0, 1.0, bench::ThresholdMode::Soft) == -2.0);
    CHECK(bench::apply_threshold(3.0, 1.0, bench::ThresholdMode::Hard) == 3.0);
    CHECK(bench::apply_threshold(0.5, 1.0, bench::ThresholdMode::Hard) == 0.0);
}

TEST_CASE("universal threshold baseline") {
    SUBCASE("noise-free smooth signal passes nearly unchanged") {
        std::vector<double> smooth(1024);
        for (std::size_t i = 0; i < smooth.size(); ++i)
            smooth[i] = 50.0 * std::sin(2.0 * 3.14159265358979 * 3.0 *
                                        static_cast<double>(i) / 1024.0);
        const auto out =
            bench::universal_threshold_denoise(smooth, bench::ThresholdMode::Soft, 5, 5);
        CHECK(bench::mae(out, smooth) <= 0.01 * 50.0);
    }

    SUBCASE("beats the noisy baseline on the benchmark signal") {
        const auto clean = bench::gen_test_signal(4000);
        bench::NoiseSpec spec;
        spec.seed = 5;
        const auto noisy = bench::add_noise(clean, spec);
        for (auto mode : {bench::ThresholdMode::Soft, bench::ThresholdMode::Hard}) {
            const auto out = bench::universal_threshold_denoise(noisy, mode, 5, 5);
            CHECK(bench::mae(out, clean) < bench::mae(noisy, clean));
        }
    }
}

TEST_CASE("error metrics") {
    const std::vector<double> a{0.0, 2.0}, b{1.0, 1.0};
    CHECK(bench::mae(a, a) == 0.0);
    CHECK(bench::mse(a, a) == 0.0);
    CHECK(bench::mae(a, b) == 1.0);
    CHECK(bench::mse(a, b) == 1.0);
    const std::vector<double> short_one{1.0};
    CHECK_THROWS_AS(bench::mae(a, short_one), std::invalid_argument);

    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto x = rng.signal(64), y = rng.signal(64);
        CHECK(bench::mae(x, y) <= std::sqrt(bench::mse(x, y)) + 1e-12);
    }
}

TEST_CASE("quantiles") {
    std::vector<double> v{4.0, 1.0, 3.0, 2.0};
    CHECK(bench::median(v) == 2.5);
    CHECK(bench::quantile(v, 0.0) == 1.0);
    CHECK(bench::quantile(v, 1.0) == 4.0);
    CHECK(bench::median(std::vector<double>{5.0}) == 5.0);
    CHECK_THROWS_AS(bench::median({}), std::invalid_argument);
}

TEST_CASE("benchmark harness") {
    SUBCASE("identity method reports the noisy baseline exactly") {
        bench::BenchOptions opt;
        opt.methods = {"identity"};
        opt.seeds = {42};
        opt.signal_length = 1024;
        const auto report = bench::run_benchmark(opt);
        REQUIRE(report.rows.size() == 1);

        const auto clean = bench::gen_test_signal(1024);
        bench::NoiseSpec spec = opt.noise;
        spec.seed = 42;
        const auto noisy = bench::add_noise(clean, spec);
        CHECK(report.rows[0].mae == bench::mae(noisy, clean));
    }

    SUBCASE("row count and reproducibility") {
        bench::BenchOptions opt;
        opt.methods = {"identity", "fixedform", "mdl-fixed"};
        opt.seeds = {1, 2};
        opt.signal_length = 512;
        const auto a = bench::run_benchmark(opt);
        const auto b = bench::run_benchmark(opt);
        CHECK(a.rows.size() == 6);
        REQUIRE(a.rows.size() == b.rows.size());
        for (std::size_t i = 0; i < a.rows.size(); ++i) {
            CHECK(a.rows[i].method == b.rows[i].method);
            CHECK(a.rows[i].seed == b.rows[i].seed);
            CHECK(a.rows[i].mae == b.rows[i].mae);
            CHECK(a.rows[i].mse == b.rows[i].mse);
        }
        CHECK(a.aggregates.size() == 3);
    }

    SUBCASE("unknown methods are rejected with the valid names") {
        bench::BenchOptions opt;
        opt.methods = {"nonesuch"};
        opt.seeds = {1};
        try {
            bench::run_benchmark(opt);
            FAIL("expected an exception");
        } catch (const std::invalid_argument& e) {
            const std::string msg = e.what();
            CHECK(msg.find("nonesuch") != std::string::npos);
            CHECK(msg.find("mdl-variable") != std::string::npos);
        }
    }

    SUBCASE("method failures are recorded and the run continues") {
        bench::BenchOptions opt;
        opt.methods = {"mdl-fixed", "identity"};
        opt.seeds = {1};
        opt.signal_length = 4000;
        opt.config.optimizer = denoise::Optimizer::Exhaustive;  // refuses 40 bins
        const auto report = bench::run_benchmark(opt);
        REQUIRE(report.rows.size() == 2);
        CHECK(report.rows[0].error.has_value());
        CHECK_FALSE(report.rows[1].error.has_value());
        CHECK(report.aggregates.size() == 1);  // only identity aggregates
    }

    SUBCASE("noisy MAE concentrates near sigma * sqrt(2/pi)") {
        bench::BenchOptions opt;
        opt.methods = {"identity"};
        for (std::uint64_t s = 1; s <= 5; ++s) opt.seeds.push_back(s);
        const auto report = bench::run_benchmark(opt);
        const double expect = 10.0 * std::sqrt(2.0 / 3.14159265358979);
        CHECK(std::abs(report.aggregates[0].median_mae - expect) <= 0.03 * expect);
    }
}
