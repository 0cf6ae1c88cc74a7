// gmmrec: command-line harness for label recovery experiments.
//
// Exit codes: 0 success, 1 usage error, 2 runtime failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gmmrec/core_model.hpp"
#include "gmmrec/errors.hpp"
#include "gmmrec/estimators.hpp"
#include "gmmrec/experiments.hpp"
#include "gmmrec/io.hpp"
#include "gmmrec/risk.hpp"
#include "gmmrec/selftest.hpp"
#include "gmmrec/synth.hpp"

namespace fs = std::filesystem;
using namespace gmmrec;

namespace {

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
    std::vector<Method> out;
    for (const auto& n : names) out.push_back(parse_method(n));
    return out;
}

struct GenerateArgs {
    std::int64_t n = 200;
    std::int64_t p = 100;
    double sigma = 1.0;
    std::optional<double> delta;
    std::optional<double> a;
    std::optional<double> b;
    std::uint64_t seed = 1;
    std::string mode = "fixed_norm";
    double alpha = 1.0;
    std::string out;
};

int cmd_generate(const GenerateArgs& args) {
    ProblemConfig config;
    if (args.a || args.b) {
        if (!args.a || !args.b) throw CLI::ValidationError("--a and --b must be given together");
        if (args.delta) throw CLI::ValidationError("--delta conflicts with --a/--b");
        config = ab_to_config({*args.a, *args.b}, args.n, args.sigma);
    } else {
        if (!args.delta) throw CLI::ValidationError("one of --delta or --a/--b is required");
        config = ProblemConfig{args.n, args.p, args.sigma, *args.delta};
    }
    CenterMode mode;
    if (args.mode == "gaussian_prior") mode = CenterMode::gaussian_prior(args.alpha);
    else if (args.mode != "fixed_norm") throw CLI::ValidationError("--mode must be fixed_norm or gaussian_prior");
    const Dataset d = sample_dataset(config, mode, args.seed);
    write_dataset(d, args.out);
    std::cout << "wrote " << args.out << " (n=" << d.n() << ", p=" << d.p() << ", delta=" << d.config.delta
              << ", snr=" << (config.sigma > 0 ? snr(config) : 0.0) << ")\n";
    return 0;
}

struct EstimateArgs {
    std::string method = "spectral_lloyd";
    std::string dataset;
    std::optional<std::uint64_t> seed;
    bool json = false;
};

int cmd_estimate(const EstimateArgs& args) {
    const Method method = parse_method(args.method);
    const Dataset d = read_dataset(args.dataset);
    CounterRng rng(args.seed.value_or(d.seed));

    EstimateTrace trace;
    switch (method) {
        case Method::SpectralLloyd: trace = spectral_lloyd(d.y, rng); break;
        case Method::Spectral: trace = spectral_init(hollow(gram(d.y)), rng); break;
        case Method::RandomLloyd: trace = random_lloyd(d.y, rng); break;
        case Method::OracleSupervised: trace.labels = oracle_supervised(d.y, d.eta); break;
        case Method::OracleKnownCenter: trace.labels = oracle_known_center(d.y, d.theta); break;
    }
    const RiskReport r = hamming_risk(trace.labels, d.eta);

    if (args.json) {
        nlohmann::json j{{"method", args.method},
                         {"n", r.n},
                         {"hamming", r.hamming},
                         {"normalized", r.normalized},
                         {"miscls_frac", r.normalized},
                         {"risk_over_n", r.risk_over_n()},
                         {"exact", r.exact},
                         {"correlation", r.correlation},
                         {"iterations_run", trace.iterations_run},
                         {"converged_at", trace.converged_at ? nlohmann::json(*trace.converged_at) : nlohmann::json()},
                         {"eigen_gap_warning", trace.eigen_gap_warning}};
        std::cout << j.dump() << '\n';
    } else {
        std::cout << args.method << ": hamming=" << r.hamming << " miscls_frac=" << r.normalized
                  << " exact=" << (r.exact ? "yes" : "no") << " correlation=" << r.correlation
                  << " iterations=" << trace.iterations_run << '\n';
    }
    return 0;
}

struct GridArgs {
    std::string preset = "desk";
    std::string config;
    std::optional<std::uint64_t> seed;
    int workers = 1;
    std::string out = "out";
    bool resume = false;
    std::vector<std::string> methods;
};

GridSpec grid_spec_from(const GridArgs& args) {
    GridSpec spec;
    if (!args.config.empty()) {
        const RunSpec loaded = load_config(args.config);
        if (!std::holds_alternative<GridSpec>(loaded)) throw CLI::ValidationError("config is not a grid config");
        spec = std::get<GridSpec>(loaded);
        if (args.seed) spec.master_seed = *args.seed;
    } else if (args.preset == "desk") {
        spec = desk_preset(args.seed.value_or(1));
    } else if (args.preset == "paper") {
        spec = paper_preset(args.seed.value_or(1));
        std::cerr << "warning: the paper preset (n=500, 50x50 cells, 300 reps) needs about 50 core-hours; "
                     "use --workers and --resume\n";
    } else {
        throw CLI::ValidationError("--preset must be desk or paper");
    }
    if (!args.methods.empty()) spec.methods = parse_methods(args.methods);
    spec.validate();
    return spec;
}

GridResult run_or_resume(const GridSpec& spec, const GridArgs& args, const fs::path& checkpoint) {
    RunOptions options;
    options.workers = args.workers;
    options.checkpoint = checkpoint;
    if (args.resume && fs::exists(checkpoint)) {
        std::cerr << "resuming from " << checkpoint << '\n';
        return resume_grid(spec, checkpoint, options);
    }
    return run_grid(spec, options);
}

int cmd_phase_grid(const GridArgs& args) {
    const std::string started = utc_timestamp();
    const GridSpec spec = grid_spec_from(args);
    const fs::path out = args.out;
    fs::create_directories(out);
    const GridResult result = run_or_resume(spec, args, out / "checkpoint.jsonl");

    std::vector<std::string> outputs{"grid.csv"};
    write_grid_csv(result, out / "grid.csv");
    for (Method m : spec.methods) {
        const std::string name = "success_" + std::string(method_name(m)) + ".svg";
        render_heatmap_svg(success_map(result, m), HeatmapKind::SuccessRate, out / name, true,
                           "P(exact recovery), " + std::string(method_name(m)));
        outputs.push_back(name);
    }
    write_manifest(make_manifest(spec.canonical(), spec.master_seed, started, out, outputs), out / "manifest.json");
    std::cout << "wrote " << (out / "grid.csv").string() << " (" << spec.cell_count() << " cells, " << spec.reps
              << " reps)\n";
    return 0;
}

struct CompareArgs {
    GridArgs grid;
    std::string csv;
    std::string method1 = "spectral_lloyd";
    std::string method2 = "spectral";
};

int cmd_compare(const CompareArgs& args) {
    const std::string started = utc_timestamp();
    const fs::path out = args.grid.out;
    fs::create_directories(out);
    HeatMap first, second;
    std::string spec_text;
    std::uint64_t seed = 0;
    if (!args.csv.empty()) {
        const auto rows = read_grid_csv(args.csv);
        first = success_map_from_rows(rows, args.method1);
        second = success_map_from_rows(rows, args.method2);
        spec_text = "grid csv " + args.csv + "\n";
    } else {
        GridArgs grid = args.grid;
        grid.methods = {args.method1, args.method2};
        const GridSpec spec = grid_spec_from(grid);
        const GridResult result = run_or_resume(spec, grid, out / "checkpoint.jsonl");
        first = success_map(result, parse_method(args.method1));
        second = success_map(result, parse_method(args.method2));
        spec_text = spec.canonical();
        seed = spec.master_seed;
    }
    const HeatMap diff = diff_maps(first, second);
    write_diff_csv(diff, first, second, args.method1, args.method2, out / "diff.csv");
    render_heatmap_svg(diff, HeatmapKind::Difference, out / "diff.svg", true,
                       "P(exact) " + args.method1 + " - " + args.method2);
    write_manifest(make_manifest(spec_text, seed, started, out, {"diff.csv", "diff.svg"}), out / "manifest.json");
    double mean = 0.0;
    for (double v : diff.values.data()) mean += v;
    mean /= static_cast<double>(diff.values.data().size());
    std::cout << "mean difference " << args.method1 << " - " << args.method2 << " = " << mean << '\n';
    return 0;
}

struct CurveArgs {
    std::string config;
    std::int64_t n = 300;
    std::int64_t p = 600;
    double sigma = 1.0;
    std::vector<double> r{2.0, 4.0, 6.0};
    std::size_t reps = 200;
    std::vector<std::string> methods{"spectral_lloyd", "spectral"};
    std::uint64_t seed = 1;
    int workers = 1;
    std::string out = "out";
};

int cmd_curve(const CurveArgs& args) {
    const std::string started = utc_timestamp();
    CurveSpec spec;
    if (!args.config.empty()) {
        const RunSpec loaded = load_config(args.config);
        if (!std::holds_alternative<CurveSpec>(loaded)) throw CLI::ValidationError("config is not a curve config");
        spec = std::get<CurveSpec>(loaded);
    } else {
        spec.n = args.n;
        spec.p = args.p;
        spec.sigma = args.sigma;
        spec.r_grid = args.r;
        spec.reps = args.reps;
        spec.methods = parse_methods(args.methods);
        spec.master_seed = args.seed;
    }
    const auto rows = run_curve(spec, args.workers);
    const fs::path out = args.out;
    fs::create_directories(out);
    write_curve_csv(spec, rows, out / "curve.csv");
    write_manifest(make_manifest(spec.canonical(), spec.master_seed, started, out, {"curve.csv"}), out / "manifest.json");
    for (const auto& row : rows)
        std::cout << "r=" << row.r << " " << method_name(row.method) << " mean_miscls=" << row.mean_miscls << " +- "
                  << row.std_error << " (tail " << row.lower_bound << ")\n";
    return 0;
}

void add_grid_options(CLI::App* cmd, GridArgs& g) {
    cmd->add_option("--preset", g.preset, "desk or paper")->check(CLI::IsMember({"desk", "paper"}));
    cmd->add_option("--config", g.config, "key=value grid config file");
    cmd->add_option("--seed", g.seed, "master seed");
    cmd->add_option("--workers", g.workers, "worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--out", g.out, "output directory");
    cmd->add_flag("--resume", g.resume, "continue from <out>/checkpoint.jsonl if present");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Label recovery in two-component Gaussian mixtures"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "write a synthetic dataset file");
    generate->add_option("--n", gen.n, "observations")->check(CLI::Range(std::int64_t{2}, std::int64_t{1} << 31));
    generate->add_option("--p", gen.p, "dimension")->check(CLI::Range(std::int64_t{1}, std::int64_t{1} << 31));
    generate->add_option("--sigma", gen.sigma, "noise level");
    generate->add_option("--delta", gen.delta, "center norm");
    generate->add_option("--a", gen.a, "signal parameter a (with --b)");
    generate->add_option("--b", gen.b, "dimension parameter b (with --a)");
    generate->add_option("--seed", gen.seed, "generator seed");
    generate->add_option("--mode", gen.mode, "fixed_norm or gaussian_prior");
    generate->add_option("--alpha", gen.alpha, "prior scale for gaussian_prior");
    generate->add_option("--out", gen.out, "dataset path")->required();

    EstimateArgs est;
    auto* estimate = app.add_subcommand("estimate", "run one estimator on a dataset file");
    estimate->add_option("--method", est.method, "estimator name");
    estimate->add_option("--dataset", est.dataset, "dataset path")->required();
    estimate->add_option("--seed", est.seed, "solver seed (default: dataset seed)");
    estimate->add_flag("--json", est.json, "print the risk report as JSON");

    GridArgs grid;
    auto* phase = app.add_subcommand("phase-grid", "run an (a, b) phase-diagram grid");
    add_grid_options(phase, grid);
    phase->add_option("--methods", grid.methods, "override methods")->delimiter(',');

    CompareArgs cmp;
    auto* compare = app.add_subcommand("compare", "difference of success maps between two methods");
    add_grid_options(compare, cmp.grid);
    compare->add_option("--grid", cmp.csv, "existing grid.csv instead of a fresh run");
    compare->add_option("--method1", cmp.method1, "minuend method");
    compare->add_option("--method2", cmp.method2, "subtracted method");

    CurveArgs crv;
    auto* curve = app.add_subcommand("curve", "misclassification rate against target SNR");
    curve->add_option("--config", crv.config, "key=value curve config file");
    curve->add_option("--n", crv.n, "observations");
    curve->add_option("--p", crv.p, "dimension");
    curve->add_option("--sigma", crv.sigma, "noise level");
    curve->add_option("--r", crv.r, "target SNR values")->delimiter(',');
    curve->add_option("--reps", crv.reps, "replicates per SNR value");
    curve->add_option("--methods", crv.methods, "estimators to evaluate")->delimiter(',');
    curve->add_option("--seed", crv.seed, "master seed");
    curve->add_option("--workers", crv.workers, "worker threads")->check(CLI::PositiveNumber);
    curve->add_option("--out", crv.out, "output directory");

    std::uint64_t selftest_seed = 20240601;
    auto* selftest = app.add_subcommand("selftest", "run the randomized property checks");
    selftest->add_option("--seed", selftest_seed, "property-check seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*generate) return cmd_generate(gen);
        if (*estimate) return cmd_estimate(est);
        if (*phase) return cmd_phase_grid(grid);
        if (*compare) return cmd_compare(cmp);
        if (*curve) return cmd_curve(crv);
        if (*selftest) return run_selftest(std::cout, selftest_seed) ? 0 : 2;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const DomainError& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
