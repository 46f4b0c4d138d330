#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mdlhisto/bench.hpp"
#include "mdlhisto/denoiser.hpp"
#include "mdlhisto/io.hpp"
#include "mdlhisto/selector.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mdlhisto;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string hex64(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// ---------------------------------------------------------------------------
// shared config flags

struct ConfigFlags {
    int wavelet = 5;
    int levels = 0;  // 0: per-command default (5 for 1D, 3 for 2D)
    int bins = 8;
    std::string delta = "auto";
    std::string hist;       // fixed | variable; empty follows the criterion
    std::string criterion;  // eq4 | eq7 | eq8; empty follows the histogram mode
    std::string optimizer = "greedy-mag";
    int refine = 2;
    int max_iters = 4;
    bool literal_eq7 = false;
    bool all_retained = false;
    std::vector<int> m_search;
    std::string config_file;

    CLI::Option* hist_opt = nullptr;
    CLI::Option* criterion_opt = nullptr;
    std::map<std::string, CLI::Option*> opts;

    void add_to(CLI::App* cmd) {
        opts["wavelet"] = cmd->add_option("--wavelet", wavelet, "Daubechies order (1..10)")
                              ->check(CLI::Range(1, 10));
        opts["levels"] = cmd->add_option("--levels", levels, "decomposition depth");
        opts["bins"] = cmd->add_option("--bins", bins, "initial bins per wavelet layer");
        opts["delta"] = cmd->add_option("--delta", delta,
                                        "quantization precision, or 'auto' (range/1024)");
        hist_opt = cmd->add_option("--hist", hist, "histogram mode: fixed | variable")
                       ->check(CLI::IsMember({"fixed", "variable"}));
        criterion_opt = cmd->add_option("--criterion", criterion,
                                        "code-length criterion: eq4 | eq7 | eq8")
                            ->check(CLI::IsMember({"eq4", "eq7", "eq8"}));
        opts["hist"] = hist_opt;
        opts["criterion"] = criterion_opt;
        opts["optimizer"] =
            cmd->add_option("--optimizer", optimizer,
                            "exhaustive | greedy-mag | greedy-lowfreq")
                ->check(CLI::IsMember({"exhaustive", "greedy-mag", "greedy-lowfreq"}));
        opts["refine"] = cmd->add_option("--refine", refine, "bin-splitting refinement rounds");
        opts["max_iters"] = cmd->add_option("--max-iters", max_iters, "greedy pass limit");
        opts["literal_eq7"] = cmd->add_flag("--literal-eq7", literal_eq7,
                                            "unweighted per-bin width cost");
        opts["all_retained"] =
            cmd->add_flag("--all-retained", all_retained, "debug: retain every bin");
        opts["m_search"] = cmd->add_option("--m-search", m_search,
                                           "residual bin counts to search")
                               ->delimiter(',');
        cmd->add_option("--config", config_file, "JSON file with the same keys");
    }

    void apply_config_file() {
        if (config_file.empty()) return;
        std::ifstream in(config_file);
        if (!in) throw std::runtime_error("cannot open config file " + config_file);
        json j = json::parse(in);
        auto fresh = [&](const char* key) {
            auto it = opts.find(key);
            return it == opts.end() || it->second->count() == 0;
        };
        for (const auto& [key, value] : j.items()) {
            if (key == "wavelet") {
                if (fresh("wavelet")) wavelet = value.get<int>();
            } else if (key == "levels") {
                if (fresh("levels")) levels = value.get<int>();
            } else if (key == "bins") {
                if (fresh("bins")) bins = value.get<int>();
            } else if (key == "delta") {
                if (fresh("delta"))
                    delta = value.is_string() ? value.get<std::string>()
                                              : io::format_double(value.get<double>());
            } else if (key == "hist") {
                if (fresh("hist")) hist = value.get<std::string>();
            } else if (key == "criterion") {
                if (fresh("criterion")) criterion = value.get<std::string>();
            } else if (key == "optimizer") {
                if (fresh("optimizer")) optimizer = value.get<std::string>();
            } else if (key == "refine") {
                if (fresh("refine")) refine = value.get<int>();
            } else if (key == "max_iters") {
                if (fresh("max_iters")) max_iters = value.get<int>();
            } else if (key == "literal_eq7") {
                if (fresh("literal_eq7")) literal_eq7 = value.get<bool>();
            } else if (key == "all_retained") {
                if (fresh("all_retained")) all_retained = value.get<bool>();
            } else if (key == "m_search") {
                if (fresh("m_search")) m_search = value.get<std::vector<int>>();
            } else {
                throw std::runtime_error("unknown config key '" + key + "'");
            }
        }
    }

    denoise::DenoiseConfig resolve(bool is_2d) {
        apply_config_file();
        if (criterion.empty()) criterion = (hist == "variable") ? "eq7" : "eq4";
        if (hist.empty()) hist = (criterion == "eq4") ? "fixed" : "variable";

        denoise::DenoiseConfig c;
        c.wavelet_order = wavelet;
        if (levels > 0) {
            c.levels = levels;
            c.levels_2d = levels;
        }
        c.bins_per_layer = bins;
        if (delta != "auto") {
            try {
                c.delta = std::stod(delta);
            } catch (const std::exception&) {
                throw std::runtime_error("--delta must be a number or 'auto'");
            }
            if (!(c.delta > 0)) throw std::runtime_error("--delta must be positive");
        }
        c.hist = hist == "fixed" ? selector::HistogramMode::FixedWidth
                                 : selector::HistogramMode::VariableWidth;
        c.criterion = criterion == "eq4"   ? selector::Criterion::LayeredFixed
                      : criterion == "eq7" ? selector::Criterion::GlobalVariable
                                           : selector::Criterion::GlobalVariableAlt;
        c.optimizer = optimizer == "exhaustive"  ? denoise::Optimizer::Exhaustive
                      : optimizer == "greedy-mag" ? denoise::Optimizer::GreedyMagnitude
                                                  : denoise::Optimizer::GreedyLowFreq;
        c.refine_rounds = refine;
        c.max_greedy_iters = max_iters;
        c.literal_width_cost = literal_eq7;
        c.all_retained = all_retained;
        if (!m_search.empty()) c.residual_bin_search = m_search;
        c.validate();
        (void)is_2d;
        return c;
    }
};

json config_to_json(const denoise::DenoiseConfig& c, int used_levels) {
    return json{{"wavelet", c.wavelet_order},
                {"levels", used_levels},
                {"bins", c.bins_per_layer},
                {"delta", c.delta > 0 ? json(c.delta) : json("auto")},
                {"hist", denoise::hist_mode_name(c.hist)},
                {"criterion", denoise::criterion_name(c.criterion)},
                {"optimizer", denoise::optimizer_name(c.optimizer)},
                {"refine", c.refine_rounds},
                {"max_iters", c.max_greedy_iters},
                {"literal_eq7", c.literal_width_cost},
                {"all_retained", c.all_retained},
                {"m_search", c.residual_bin_search}};
}

json codelen_to_json(const selector::CodeLenBreakdown& bd, int chosen_m) {
    return json{{"layer_bits", bd.layer_bits},
                {"residual_bits", bd.residual_bits},
                {"parameter_bits", bd.parameter_bits},
                {"total", bd.total},
                {"residual_bins_used", bd.residual_bins_used},
                {"chosen_residual_bins", chosen_m}};
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    const auto dots = text.find("..");
    if (dots != std::string::npos) {
        const auto lo = std::stoull(text.substr(0, dots));
        const auto hi = std::stoull(text.substr(dots + 2));
        if (hi < lo) throw std::runtime_error("seed range is empty");
        for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
        return seeds;
    }
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (!token.empty()) seeds.push_back(std::stoull(token));
    }
    if (seeds.empty()) throw std::runtime_error("no seeds given");
    return seeds;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (!token.empty()) out.push_back(token);
    }
    return out;
}

selector::Selection parse_selection(const std::string& text, const selector::LayerSet& ls) {
    selector::Selection sel = selector::Selection::none_of(ls);
    if (text.empty()) return sel;
    std::vector<std::string> groups;
    std::stringstream ss(text);
    std::string group;
    while (std::getline(ss, group, ';')) groups.push_back(group);
    if (groups.size() != ls.layers.size())
        throw std::runtime_error("--selection has " + std::to_string(groups.size()) +
                                 " layer groups, layer set has " +
                                 std::to_string(ls.layers.size()));
    for (std::size_t j = 0; j < groups.size(); ++j) {
        const auto& g = groups[j];
        if (g.empty() || g == "-") continue;
        if (g == "all") {
            for (std::size_t b = 0; b < ls.layers[j].hist.bin_count(); ++b)
                sel.retained[j].push_back(static_cast<int>(b));
            continue;
        }
        for (const auto& tok : split_list(g)) sel.retained[j].push_back(std::stoi(tok));
    }
    return sel;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                         start)
            .count();
    }
};

// ---------------------------------------------------------------------------
// subcommands

struct Denoise1dArgs {
    std::string input;
    std::string out_dir = ".";
    bool timing = false;
    ConfigFlags cfg;
};

int run_denoise1d(Denoise1dArgs& args) {
    const auto signal = io::read_csv_signal(args.input);
    auto config = args.cfg.resolve(false);
    Timer timer;
    const auto result = denoise::denoise1d(signal, config);

    fs::create_directories(args.out_dir);
    const fs::path out(args.out_dir);
    const auto denoised_path = out / "denoised.csv";
    const auto residual_path = out / "residual.csv";
    io::write_csv_signal(denoised_path.string(), result.denoised);
    io::write_csv_signal(residual_path.string(), result.residual);

    json report{{"tool", {{"name", "mdlhisto"}, {"version", kVersion}}},
                {"command", "denoise1d"},
                {"input",
                 {{"path", args.input},
                  {"samples", signal.size()},
                  {"checksum_fnv1a64", hex64(io::fnv1a64_file(args.input))}}},
                {"config", config_to_json(config, config.levels)},
                {"resolved_delta", result.resolved_delta},
                {"selection", result.selection.retained},
                {"retained_per_layer", result.retained_per_layer},
                {"codelen", codelen_to_json(result.breakdown, result.chosen_residual_bins)},
                {"refine_totals", result.refine_totals},
                {"outputs",
                 {{"denoised", denoised_path.string()}, {"residual", residual_path.string()}}}};
    if (args.timing) report["timing_ms"] = timer.ms();
    write_text(out / "report.json", report.dump(2) + "\n");

    std::cout << "denoise1d: " << signal.size() << " samples, total "
              << io::format_double(result.breakdown.total) << " bits, outputs in "
              << args.out_dir << "\n";
    if (args.timing) std::cerr << "timing_ms " << timer.ms() << "\n";
    return 0;
}

struct Denoise2dArgs {
    std::string input;
    std::string out_dir = ".";
    bool timing = false;
    ConfigFlags cfg;
};

int run_denoise2d(Denoise2dArgs& args) {
    const auto pgm = io::read_pgm(args.input);
    const auto grid = io::to_unit_grid(pgm);
    auto config = args.cfg.resolve(true);
    Timer timer;
    const auto result = denoise::denoise2d(grid, config);

    fs::create_directories(args.out_dir);
    const fs::path out(args.out_dir);
    const auto denoised_path = out / "denoised.pgm";
    const auto residual_path = out / "residual.pgm";
    io::write_pgm(denoised_path.string(), io::from_unit_grid(result.denoised, pgm.maxval));
    io::write_pgm(residual_path.string(), io::residual_to_pgm(result.residual, pgm.maxval));

    json report{{"tool", {{"name", "mdlhisto"}, {"version", kVersion}}},
                {"command", "denoise2d"},
                {"input",
                 {{"path", args.input},
                  {"shape", {pgm.rows, pgm.cols}},
                  {"maxval", pgm.maxval},
                  {"checksum_fnv1a64", hex64(io::fnv1a64_file(args.input))}}},
                {"config", config_to_json(config, config.levels_2d)},
                {"resolved_delta", result.resolved_delta},
                {"selection", result.selection.retained},
                {"retained_per_layer", result.retained_per_layer},
                {"codelen", codelen_to_json(result.breakdown, result.chosen_residual_bins)},
                {"refine_totals", result.refine_totals},
                {"outputs",
                 {{"denoised", denoised_path.string()}, {"residual", residual_path.string()}}}};
    if (args.timing) report["timing_ms"] = timer.ms();
    write_text(out / "report.json", report.dump(2) + "\n");

    std::cout << "denoise2d: " << pgm.rows << "x" << pgm.cols << " image, total "
              << io::format_double(result.breakdown.total) << " bits, outputs in "
              << args.out_dir << "\n";
    if (args.timing) std::cerr << "timing_ms " << timer.ms() << "\n";
    return 0;
}

struct BenchArgs {
    std::string out_dir = ".";
    std::string methods;
    std::string seeds;
    std::string noise = "gaussian";
    double sigma = 10.0;
    double gamma_shape = 2.0;
    double gamma_scale = 7.0710678118654755;
    int n = 4000;
    std::string preset;
    std::uint64_t seed = 0;
    bool timing = false;
    ConfigFlags cfg;
    CLI::Option *methods_opt = nullptr, *seeds_opt = nullptr, *noise_opt = nullptr,
                *sigma_opt = nullptr, *n_opt = nullptr, *seed_opt = nullptr;
};

int run_bench(BenchArgs& args) {
    bench::BenchOptions options;
    options.config = args.cfg.resolve(false);

    // presets fill anything not given explicitly
    if (!args.preset.empty()) {
        if (args.preset == "fig2a") {
            if (args.noise_opt->count() == 0) args.noise = "gaussian";
            if (args.sigma_opt->count() == 0) args.sigma = 10.0;
            if (args.seeds_opt->count() == 0) args.seeds = "1..10";
            if (args.methods_opt->count() == 0)
                args.methods = "identity,fixedform,fixedform-hard,mdl-fixed,mdl-variable";
        } else if (args.preset == "fig2b") {
            if (args.noise_opt->count() == 0) args.noise = "gamma";
            if (args.seeds_opt->count() == 0) args.seeds = "1..20";
            if (args.methods_opt->count() == 0)
                args.methods =
                    "identity,fixedform,mdl-fixed,mdl-variable,mdl-fixed-lowfreq,"
                    "mdl-variable-lowfreq";
        } else {
            throw std::runtime_error("unknown preset '" + args.preset + "'");
        }
        if (args.n_opt->count() == 0) args.n = 4000;
    }
    if (args.methods.empty()) args.methods = "identity,fixedform,mdl-fixed,mdl-variable";
    if (args.seeds.empty()) args.seeds = args.seed_opt->count() ? std::to_string(args.seed) : "1";

    options.methods = split_list(args.methods);
    options.seeds = parse_seeds(args.seeds);
    options.signal_length = args.n;
    options.record_timing = args.timing;
    if (args.noise == "gaussian") {
        options.noise.kind = bench::NoiseKind::Gaussian;
    } else if (args.noise == "gamma") {
        options.noise.kind = bench::NoiseKind::Gamma;
    } else if (args.noise == "none") {
        options.noise.kind = bench::NoiseKind::None;
    } else {
        throw std::runtime_error("unknown noise kind '" + args.noise + "'");
    }
    options.noise.sigma = args.sigma;
    options.noise.gamma_shape = args.gamma_shape;
    options.noise.gamma_scale = args.gamma_scale;

    const auto report = bench::run_benchmark(options);

    // flat CSV, one row per method x seed
    std::string csv = "method,seed,mae,mse,codelen_total,timing_ms,error\n";
    for (const auto& row : report.rows) {
        std::string err = row.error.value_or("");
        for (auto& ch : err)
            if (ch == ',' || ch == '\n') ch = ';';
        csv += row.method + "," + std::to_string(row.seed) + ",";
        csv += row.error ? "," : io::format_double(row.mae) + "," + io::format_double(row.mse);
        csv += ",";
        csv += row.codelen_total ? io::format_double(*row.codelen_total) : "";
        csv += ",";
        csv += row.timing_ms ? io::format_double(*row.timing_ms) : "";
        csv += "," + err + "\n";
    }

    json jrows = json::array();
    for (const auto& row : report.rows) {
        json r{{"method", row.method}, {"seed", row.seed}};
        if (row.error) {
            r["error"] = *row.error;
        } else {
            r["mae"] = row.mae;
            r["mse"] = row.mse;
        }
        if (row.codelen_total) r["codelen_total"] = *row.codelen_total;
        if (row.timing_ms) r["timing_ms"] = *row.timing_ms;
        jrows.push_back(std::move(r));
    }
    json jaggs = json::array();
    for (const auto& agg : report.aggregates)
        jaggs.push_back(json{{"method", agg.method},
                             {"median_mae", agg.median_mae},
                             {"iqr_mae", agg.iqr_mae},
                             {"median_mse", agg.median_mse}});
    json jnoise{{"kind", args.noise}};
    if (options.noise.kind == bench::NoiseKind::Gaussian) jnoise["sigma"] = options.noise.sigma;
    if (options.noise.kind == bench::NoiseKind::Gamma) {
        jnoise["shape"] = options.noise.gamma_shape;
        jnoise["scale"] = options.noise.gamma_scale;
    }
    json jreport{{"tool", {{"name", "mdlhisto"}, {"version", kVersion}}},
                 {"command", "bench"},
                 {"signal_length", report.signal_length},
                 {"noise", jnoise},
                 {"seeds", report.seeds},
                 {"methods", report.methods},
                 {"config", config_to_json(options.config, options.config.levels)},
                 {"rows", jrows},
                 {"aggregates", jaggs}};

    fs::create_directories(args.out_dir);
    const fs::path out(args.out_dir);
    write_text(out / "bench.csv", csv);
    write_text(out / "bench.json", jreport.dump(2) + "\n");

    std::printf("%-26s %12s %12s %14s\n", "method", "median_mae", "iqr_mae", "median_mse");
    for (const auto& agg : report.aggregates)
        std::printf("%-26s %12.5g %12.5g %14.6g\n", agg.method.c_str(), agg.median_mae,
                    agg.iqr_mae, agg.median_mse);
    return 0;
}

struct CodelenArgs {
    std::string input;
    std::string out_dir;
    std::string selection;
    bool raw = false;
    bool exhaustive = false;
    ConfigFlags cfg;
};

int run_codelen(CodelenArgs& args) {
    const auto values = io::read_csv_signal(args.input);
    auto config = args.cfg.resolve(false);

    std::vector<std::vector<double>> layer_coeffs;
    if (args.raw) {
        layer_coeffs.push_back(values);
    } else {
        const auto filter = wavelet::daubechies_filter(config.wavelet_order);
        const auto decomp = wavelet::dwt1d(values, filter, config.levels);
        layer_coeffs = decomp.details;
    }
    const auto ls = selector::make_layer_set(layer_coeffs, config.hist, config.bins_per_layer,
                                             config.delta);

    selector::SearchOptions opts;
    opts.criterion = config.criterion;
    opts.residual_bin_search = config.residual_bin_search;
    opts.max_iters = config.max_greedy_iters;
    opts.literal_width_cost = config.literal_width_cost;

    selector::Selection sel;
    selector::CodeLenBreakdown bd;
    int chosen_m = opts.residual_bin_search.front();
    if (args.exhaustive) {
        auto found = selector::optimize_exhaustive(ls, opts);
        sel = std::move(found.selection);
        bd = std::move(found.breakdown);
        chosen_m = found.chosen_residual_bins;
    } else {
        sel = parse_selection(args.selection, ls);
        double best = std::numeric_limits<double>::infinity();
        for (int m : opts.residual_bin_search) {
            auto cand = selector::evaluate_criterion(ls, sel, opts.criterion, m,
                                                     opts.literal_width_cost);
            if (cand.total < best) {
                best = cand.total;
                bd = cand;
                chosen_m = m;
            }
        }
    }

    json jlayers = json::array();
    for (const auto& layer : ls.layers)
        jlayers.push_back(json{{"count", layer.count()},
                               {"bins", layer.hist.bin_count()},
                               {"range", layer.range}});
    json report{{"tool", {{"name", "mdlhisto"}, {"version", kVersion}}},
                {"command", "codelen"},
                {"input",
                 {{"path", args.input},
                  {"samples", values.size()},
                  {"checksum_fnv1a64", hex64(io::fnv1a64_file(args.input))}}},
                {"config", config_to_json(config, args.raw ? 0 : config.levels)},
                {"raw_coefficients", args.raw},
                {"resolved_delta", ls.delta},
                {"layers", jlayers},
                {"selection", sel.retained},
                {"codelen", codelen_to_json(bd, chosen_m)}};

    std::cout << report.dump(2) << "\n";
    if (!args.out_dir.empty()) {
        fs::create_directories(args.out_dir);
        write_text(fs::path(args.out_dir) / "codelen.json", report.dump(2) + "\n");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MDL-histo: wavelet denoising by histogram code-length minimization"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    Denoise1dArgs d1;
    auto* cmd1 = app.add_subcommand("denoise1d", "denoise a CSV signal");
    cmd1->add_option("input", d1.input, "CSV input")->required();
    cmd1->add_option("--out", d1.out_dir, "output directory");
    cmd1->add_flag("--timing", d1.timing, "report wall time");
    d1.cfg.add_to(cmd1);

    Denoise2dArgs d2;
    auto* cmd2 = app.add_subcommand("denoise2d", "denoise a PGM image");
    cmd2->add_option("input", d2.input, "PGM input (P2 or P5)")->required();
    cmd2->add_option("--out", d2.out_dir, "output directory");
    cmd2->add_flag("--timing", d2.timing, "report wall time");
    d2.cfg.add_to(cmd2);
    d2.cfg.levels = 0;

    BenchArgs bn;
    auto* cmd3 = app.add_subcommand("bench", "run the synthetic-signal benchmark");
    cmd3->add_option("--out", bn.out_dir, "output directory");
    bn.methods_opt = cmd3->add_option("--methods", bn.methods, "comma-separated method list");
    bn.seeds_opt = cmd3->add_option("--seeds", bn.seeds, "'1,2,3' or '1..10'");
    bn.seed_opt = cmd3->add_option("--seed", bn.seed, "single seed shortcut");
    bn.noise_opt = cmd3->add_option("--noise", bn.noise, "gaussian | gamma | none")
                       ->check(CLI::IsMember({"gaussian", "gamma", "none"}));
    bn.sigma_opt = cmd3->add_option("--sigma", bn.sigma, "Gaussian standard deviation");
    cmd3->add_option("--gamma-shape", bn.gamma_shape, "gamma shape k");
    cmd3->add_option("--gamma-scale", bn.gamma_scale, "gamma scale theta");
    bn.n_opt = cmd3->add_option("--n", bn.n, "signal length");
    cmd3->add_option("--preset", bn.preset, "fig2a | fig2b")
        ->check(CLI::IsMember({"fig2a", "fig2b"}));
    cmd3->add_flag("--timing", bn.timing, "record per-run wall time");
    bn.cfg.add_to(cmd3);

    CodelenArgs cl;
    auto* cmd4 = app.add_subcommand("codelen", "print the code-length breakdown");
    cmd4->add_option("input", cl.input, "CSV input")->required();
    cmd4->add_option("--out", cl.out_dir, "also write codelen.json here");
    cmd4->add_option("--selection", cl.selection,
                     "retained bins per layer, e.g. '0,2;;all' (';'-separated layers)");
    cmd4->add_flag("--raw", cl.raw, "treat the input as one coefficient layer");
    cmd4->add_flag("--exhaustive", cl.exhaustive, "search all selections (small inputs)");
    cl.cfg.add_to(cmd4);

    try {
        app.parse(argc, argv);
        if (cmd1->parsed()) return run_denoise1d(d1);
        if (cmd2->parsed()) {
            if (d2.cfg.opts["levels"]->count() == 0) d2.cfg.levels = 3;
            return run_denoise2d(d2);
        }
        if (cmd3->parsed()) return run_bench(bn);
        if (cmd4->parsed()) return run_codelen(cl);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
