#include "gmmrec/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>

#include <json.hpp>
#include <omp.h>

#include "gmmrec/errors.hpp"
#include "gmmrec/format.hpp"
#include "gmmrec/synth.hpp"

namespace gmmrec {
namespace {

using nlohmann::json;

void check_grid(const std::vector<double>& g, const char* name) {
    if (g.empty()) throw DomainError(std::string(name) + " is empty");
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!(g[i] > 0.0) || !std::isfinite(g[i])) throw DomainError(std::string(name) + " values must be > 0");
        if (i > 0 && !(g[i] > g[i - 1])) throw DomainError(std::string(name) + " must be strictly increasing");
    }
}

void check_methods(const std::vector<Method>& methods) {
    if (methods.empty()) throw DomainError("no methods requested");
    for (std::size_t i = 0; i < methods.size(); ++i)
        for (std::size_t j = i + 1; j < methods.size(); ++j)
            if (methods[i] == methods[j]) throw DomainError("method listed twice: " + std::string(method_name(methods[i])));
}

std::string join_doubles(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += format_g17(v[i]);
    }
    return out;
}

std::string join_methods(const std::vector<Method>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += method_name(v[i]);
    }
    return out;
}

bool contains(std::span<const Method> methods, Method m) {
    return std::find(methods.begin(), methods.end(), m) != methods.end();
}

std::uint64_t checksum_matrix(const Matrix& y) {
    const auto bytes = y.data();
    return fnv1a64({reinterpret_cast<const char*>(bytes.data()), bytes.size_bytes()});
}

void accumulate(MethodTally& t, const std::optional<RiskReport>& report) {
    ++t.reps_done;
    if (!report) {
        ++t.solver_failures;
        t.sum_miscls += 0.5;
        return;
    }
    t.successes += report->exact ? 1 : 0;
    t.sum_miscls += report->normalized;
}

CellResult compute_cell(const GridSpec& spec, std::size_t a_index, std::size_t b_index) {
    const ProblemConfig config = ab_to_config({spec.a_grid[a_index], spec.b_grid[b_index]}, spec.n, spec.sigma);
    const std::size_t cell = spec.cell_index(a_index, b_index);
    CellResult out;
    out.tallies.resize(spec.methods.size());
    for (std::size_t rep = 0; rep < spec.reps; ++rep) {
        const RepOutcome outcome = evaluate_rep(config, spec.methods, derive_seed(spec.master_seed, cell, rep));
        for (std::size_t m = 0; m < spec.methods.size(); ++m) accumulate(out.tallies[m], outcome.per_method[m]);
    }
    out.completed = true;
    return out;
}

// Checkpoint layout, one JSON object per line:
//   {"kind":"header","spec_hash":"<16 hex>","spec":"<canonical spec>"}
//   {"spec_hash":..., "a_index":i, "b_index":j, "method":"...", "successes":s,
//    "reps_done":r, "sum_miscls":x, "solver_failures":f}
// A cell counts as completed once every method of the grid spec has a record.
class CheckpointWriter {
public:
    CheckpointWriter(const std::filesystem::path& path, const GridSpec& spec, bool append)
        : spec_(spec), hash_(hex64(spec.hash())) {
        out_.open(path, append ? std::ios::app : std::ios::trunc);
        if (!out_) throw CheckpointError(CheckpointError::Kind::Io, "cannot open checkpoint " + path.string());
        if (!append) {
            out_ << json{{"kind", "header"}, {"spec_hash", hash_}, {"spec", spec.canonical()}}.dump() << '\n';
            out_.flush();
        }
    }

    void write_cell(std::size_t a_index, std::size_t b_index, const CellResult& cell) {
        std::lock_guard lock(mutex_);
        for (std::size_t m = 0; m < spec_.methods.size(); ++m) {
            const MethodTally& t = cell.tallies[m];
            out_ << json{{"spec_hash", hash_},
                         {"a_index", a_index},
                         {"b_index", b_index},
                         {"method", method_name(spec_.methods[m])},
                         {"successes", t.successes},
                         {"reps_done", t.reps_done},
                         {"sum_miscls", t.sum_miscls},
                         {"solver_failures", t.solver_failures}}
                        .dump()
                 << '\n';
        }
        out_.flush();
        if (!out_) throw CheckpointError(CheckpointError::Kind::Io, "checkpoint write failed");
    }

private:
    GridSpec spec_;
    std::string hash_;
    std::ofstream out_;
    std::mutex mutex_;
};

GridSpec parse_canonical_grid(const std::string& text);

struct LoadedCheckpoint {
    GridSpec spec;
    GridResult partial;
};

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointError(CheckpointError::Kind::Io, "cannot open checkpoint " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string content = buffer.str();

    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < content.size()) {
        const std::size_t end = content.find('\n', start);
        if (end == std::string::npos) break;  // unterminated tail: interrupted write, ignored
        lines.push_back(content.substr(start, end - start));
        start = end + 1;
    }
    if (lines.empty()) throw CheckpointError(CheckpointError::Kind::Corrupt, "checkpoint has no header");

    auto corrupt = [&](std::size_t line, const std::string& why) {
        return CheckpointError(CheckpointError::Kind::Corrupt,
                               "checkpoint " + path.string() + " line " + std::to_string(line + 1) + ": " + why);
    };

    LoadedCheckpoint out;
    std::string hash;
    try {
        const json header = json::parse(lines[0]);
        if (header.at("kind") != "header") throw corrupt(0, "first record is not a header");
        hash = header.at("spec_hash").get<std::string>();
        out.spec = parse_canonical_grid(header.at("spec").get<std::string>());
    } catch (const CheckpointError&) {
        throw;
    } catch (const std::exception& e) {
        throw corrupt(0, e.what());
    }
    if (hex64(out.spec.hash()) != hash) throw corrupt(0, "stored spec does not match its hash");

    const GridSpec& spec = out.spec;
    out.partial.spec = spec;
    out.partial.cells.assign(spec.cell_count(), CellResult{false, std::vector<MethodTally>(spec.methods.size())});
    std::vector<std::vector<bool>> seen(spec.cell_count(), std::vector<bool>(spec.methods.size(), false));

    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty()) continue;
        try {
            const json rec = json::parse(lines[li]);
            if (rec.at("spec_hash").get<std::string>() != hash) throw corrupt(li, "record from a different spec");
            const auto ai = rec.at("a_index").get<std::size_t>();
            const auto bi = rec.at("b_index").get<std::size_t>();
            if (ai >= spec.a_grid.size() || bi >= spec.b_grid.size()) throw corrupt(li, "cell index out of range");
            const auto slot = spec.method_slot(parse_method(rec.at("method").get<std::string>()));
            if (!slot) throw corrupt(li, "method not part of the grid spec");
            MethodTally t;
            t.successes = rec.at("successes").get<std::size_t>();
            t.reps_done = rec.at("reps_done").get<std::size_t>();
            t.sum_miscls = rec.at("sum_miscls").get<double>();
            t.solver_failures = rec.value("solver_failures", std::size_t{0});
            if (t.successes > t.reps_done || t.reps_done != spec.reps) throw corrupt(li, "inconsistent tallies");
            const std::size_t cell = spec.cell_index(ai, bi);
            out.partial.cells[cell].tallies[*slot] = t;
            seen[cell][*slot] = true;
        } catch (const CheckpointError&) {
            throw;
        } catch (const std::exception& e) {
            throw corrupt(li, e.what());
        }
    }
    for (std::size_t c = 0; c < spec.cell_count(); ++c) {
        const bool all = std::all_of(seen[c].begin(), seen[c].end(), [](bool b) { return b; });
        if (all) {
            out.partial.cells[c].completed = true;
        } else {
            out.partial.cells[c] = CellResult{false, std::vector<MethodTally>(spec.methods.size())};
        }
    }
    return out;
}

GridResult execute(GridResult result, const RunOptions& options, CheckpointWriter* writer) {
    const GridSpec& spec = result.spec;
    std::vector<std::size_t> pending;
    for (std::size_t c = 0; c < spec.cell_count(); ++c)
        if (!result.cells[c].completed) pending.push_back(c);

    const std::size_t budget = options.stop_after_cells.value_or(pending.size());
    std::atomic<std::size_t> claimed{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const int workers = std::max(1, options.workers);
    const auto count = static_cast<std::ptrdiff_t>(pending.size());

#pragma omp parallel for num_threads(workers) schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        if (claimed.fetch_add(1) >= budget) continue;
        const std::size_t c = pending[static_cast<std::size_t>(i)];
        const std::size_t ai = c / spec.b_grid.size();
        const std::size_t bi = c % spec.b_grid.size();
        try {
            CellResult cell = compute_cell(spec, ai, bi);
            if (writer) writer->write_cell(ai, bi, cell);
            result.cells[c] = std::move(cell);
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return result;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

GridSpec parse_canonical_grid(const std::string& text) {
    GridSpec spec;
    const auto lines = split(text, '\n');
    if (lines.empty() || lines[0] != "gridspec v1") throw DomainError("not a canonical grid spec");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto eq = lines[i].find('=');
        if (eq == std::string::npos) throw DomainError("bad canonical line: " + lines[i]);
        const std::string key = lines[i].substr(0, eq);
        const std::string value = lines[i].substr(eq + 1);
        if (key == "n") spec.n = parse_int(value);
        else if (key == "sigma") spec.sigma = parse_double(value);
        else if (key == "a_grid" || key == "b_grid") {
            std::vector<double> g;
            for (const auto& part : split(value, ',')) g.push_back(parse_double(part));
            (key == "a_grid" ? spec.a_grid : spec.b_grid) = std::move(g);
        } else if (key == "reps") spec.reps = static_cast<std::size_t>(parse_uint(value));
        else if (key == "methods") {
            spec.methods.clear();
            for (const auto& part : split(value, ',')) spec.methods.push_back(parse_method(part));
        } else if (key == "seed") spec.master_seed = parse_uint(value);
        else throw DomainError("unknown canonical key: " + key);
    }
    spec.validate();
    return spec;
}

}  // namespace

void GridSpec::validate() const {
    if (n < 3) throw DomainError("GridSpec: n must be >= 3");
    if (!(sigma > 0.0)) throw DomainError("GridSpec: sigma must be > 0");
    check_grid(a_grid, "a_grid");
    check_grid(b_grid, "b_grid");
    if (reps < 1) throw DomainError("GridSpec: reps must be >= 1");
    check_methods(methods);
}

std::string GridSpec::canonical() const {
    std::string s = "gridspec v1\n";
    s += "n=" + std::to_string(n) + "\n";
    s += "sigma=" + format_g17(sigma) + "\n";
    s += "a_grid=" + join_doubles(a_grid) + "\n";
    s += "b_grid=" + join_doubles(b_grid) + "\n";
    s += "reps=" + std::to_string(reps) + "\n";
    s += "methods=" + join_methods(methods) + "\n";
    s += "seed=" + std::to_string(master_seed) + "\n";
    return s;
}

std::uint64_t GridSpec::hash() const {
    return fnv1a64(canonical());
}

std::optional<std::size_t> GridSpec::method_slot(Method m) const {
    const auto it = std::find(methods.begin(), methods.end(), m);
    if (it == methods.end()) return std::nullopt;
    return static_cast<std::size_t>(it - methods.begin());
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    if (n == 0) throw DomainError("linspace: need at least one point");
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    const double step = (hi - lo) / static_cast<double>(n - 1);
    // Explicit fma: identical whether the compiler folds the call or not.
    for (std::size_t i = 0; i < n; ++i) out[i] = std::fma(step, static_cast<double>(i), lo);
    out.back() = hi;
    return out;
}

GridSpec desk_preset(std::uint64_t seed) {
    GridSpec spec;
    spec.n = 200;
    spec.sigma = 1.0;
    spec.a_grid = linspace(1.1, 11.0, 15);
    spec.b_grid = linspace(0.1, 5.0, 15);
    spec.reps = 60;
    spec.methods = {Method::SpectralLloyd, Method::Spectral};
    spec.master_seed = seed;
    return spec;
}

GridSpec paper_preset(std::uint64_t seed) {
    GridSpec spec;
    spec.n = 500;
    spec.sigma = 1.0;
    spec.a_grid = linspace(1.1, 11.0, 50);
    spec.b_grid = linspace(0.1, 5.0, 50);
    spec.reps = 300;
    spec.methods = {Method::SpectralLloyd, Method::Spectral, Method::RandomLloyd};
    spec.master_seed = seed;
    return spec;
}

const MethodTally& GridResult::tally(std::size_t a_index, std::size_t b_index, Method m) const {
    const auto slot = spec.method_slot(m);
    if (!slot) throw DomainError("method " + std::string(method_name(m)) + " is not part of this run");
    return cell(a_index, b_index).tallies.at(*slot);
}

bool GridResult::complete() const noexcept {
    return std::all_of(cells.begin(), cells.end(), [](const CellResult& c) { return c.completed; });
}

std::size_t GridResult::completed_cells() const noexcept {
    return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](const CellResult& c) { return c.completed; }));
}

RepOutcome evaluate_rep(const ProblemConfig& config, std::span<const Method> methods, std::uint64_t rep_seed,
                        bool record_checksum) {
    const Dataset data = sample_dataset(config, CenterMode::fixed_norm(), rep_seed);
    RepOutcome out;
    out.per_method.resize(methods.size());
    if (record_checksum) out.dataset_checksum = checksum_matrix(data.y);

    const bool wants_spectral = contains(methods, Method::SpectralLloyd) || contains(methods, Method::Spectral);
    const bool wants_gram = wants_spectral || contains(methods, Method::RandomLloyd);

    HollowGram h;
    if (wants_gram) h = hollow(gram(data.y));

    std::optional<EstimateTrace> init;
    if (wants_spectral) {
        CounterRng solver_rng(derive_seed(rep_seed, 1, 0));
        try {
            init = spectral_init(h, solver_rng);
        } catch (const ConvergenceError&) {
            init.reset();
        }
    }

    for (std::size_t m = 0; m < methods.size(); ++m) {
        switch (methods[m]) {
            case Method::Spectral:
                if (init) out.per_method[m] = hamming_risk(init->labels, data.eta);
                break;
            case Method::SpectralLloyd:
                if (init) {
                    const auto refined = lloyd_steps(h, init->labels, default_iter_count(h.order()));
                    out.per_method[m] = hamming_risk(refined.labels, data.eta);
                }
                break;
            case Method::RandomLloyd: {
                CounterRng start_rng(derive_seed(rep_seed, 2, 0));
                out.per_method[m] = hamming_risk(random_lloyd(h, start_rng).labels, data.eta);
                break;
            }
            case Method::OracleSupervised:
                out.per_method[m] = hamming_risk(oracle_supervised(data.y, data.eta), data.eta);
                break;
            case Method::OracleKnownCenter:
                out.per_method[m] = hamming_risk(oracle_known_center(data.y, data.theta), data.eta);
                break;
        }
    }
    return out;
}

GridResult run_grid(const GridSpec& spec, const RunOptions& options) {
    spec.validate();
    if (options.workers < 1) throw DomainError("run_grid: workers must be >= 1");
    GridResult result;
    result.spec = spec;
    result.cells.assign(spec.cell_count(), CellResult{false, std::vector<MethodTally>(spec.methods.size())});
    std::optional<CheckpointWriter> writer;
    if (options.checkpoint) writer.emplace(*options.checkpoint, result.spec, false);
    return execute(std::move(result), options, writer ? &*writer : nullptr);
}

GridResult resume_grid(const std::filesystem::path& checkpoint, const RunOptions& options) {
    if (options.workers < 1) throw DomainError("resume_grid: workers must be >= 1");
    LoadedCheckpoint loaded = load_checkpoint(checkpoint);
    if (loaded.partial.complete()) return std::move(loaded.partial);
    CheckpointWriter writer(checkpoint, loaded.partial.spec, true);
    return execute(std::move(loaded.partial), options, &writer);
}

GridResult resume_grid(const GridSpec& spec, const std::filesystem::path& checkpoint, const RunOptions& options) {
    spec.validate();
    {
        const LoadedCheckpoint loaded = load_checkpoint(checkpoint);
        if (loaded.spec.hash() != spec.hash() || !(loaded.spec == spec))
            throw CheckpointError(CheckpointError::Kind::SpecMismatch,
                                  "checkpoint spec hash " + hex64(loaded.spec.hash()) + " does not match " +
                                      hex64(spec.hash()));
    }
    return resume_grid(checkpoint, options);
}

HeatMap success_map(const GridResult& result, Method method) {
    const auto slot = result.spec.method_slot(method);
    if (!slot) throw DomainError("method " + std::string(method_name(method)) + " is not part of this run");
    HeatMap map{result.spec.a_grid, result.spec.b_grid, Matrix(result.spec.a_grid.size(), result.spec.b_grid.size())};
    for (std::size_t ai = 0; ai < map.a_grid.size(); ++ai)
        for (std::size_t bi = 0; bi < map.b_grid.size(); ++bi)
            map.values(ai, bi) = result.cell(ai, bi).tallies[*slot].success_rate();
    return map;
}

HeatMap diff_maps(const HeatMap& first, const HeatMap& second) {
    if (first.a_grid != second.a_grid || first.b_grid != second.b_grid)
        throw DomainError("diff_maps: maps are on different grids");
    HeatMap out{first.a_grid, first.b_grid, Matrix(first.a_grid.size(), first.b_grid.size())};
    for (std::size_t ai = 0; ai < out.a_grid.size(); ++ai)
        for (std::size_t bi = 0; bi < out.b_grid.size(); ++bi)
            out.values(ai, bi) = first.values(ai, bi) - second.values(ai, bi);
    return out;
}

HeatMap diff_grids(const GridResult& result, Method method1, Method method2) {
    return diff_maps(success_map(result, method1), success_map(result, method2));
}

double success_transform(double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("success_transform: x must lie in [0, 1]");
    return std::pow(10.0, -3.0 * (1.0 - x));
}

void CurveSpec::validate() const {
    if (n < 2) throw DomainError("CurveSpec: n must be >= 2");
    if (p < 1) throw DomainError("CurveSpec: p must be >= 1");
    if (!(sigma > 0.0)) throw DomainError("CurveSpec: sigma must be > 0");
    check_grid(r_grid, "r_grid");
    if (reps < 1) throw DomainError("CurveSpec: reps must be >= 1");
    check_methods(methods);
}

std::string CurveSpec::canonical() const {
    std::string s = "curvespec v1\n";
    s += "n=" + std::to_string(n) + "\n";
    s += "p=" + std::to_string(p) + "\n";
    s += "sigma=" + format_g17(sigma) + "\n";
    s += "r_grid=" + join_doubles(r_grid) + "\n";
    s += "reps=" + std::to_string(reps) + "\n";
    s += "methods=" + join_methods(methods) + "\n";
    s += "seed=" + std::to_string(master_seed) + "\n";
    return s;
}

std::vector<CurvePoint> run_curve(const CurveSpec& spec, int workers) {
    spec.validate();
    if (workers < 1) throw DomainError("run_curve: workers must be >= 1");
    const std::size_t points = spec.r_grid.size();
    const std::size_t units = points * spec.reps;
    std::vector<RepOutcome> outcomes(units);
    std::vector<ProblemConfig> configs(points);
    for (std::size_t i = 0; i < points; ++i)
        configs[i] = ProblemConfig{spec.n, spec.p, spec.sigma, delta_for_snr(spec.r_grid[i], spec.n, spec.p, spec.sigma)};

    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto count = static_cast<std::ptrdiff_t>(units);
#pragma omp parallel for num_threads(workers) schedule(dynamic, 1)
    for (std::ptrdiff_t u = 0; u < count; ++u) {
        const std::size_t i = static_cast<std::size_t>(u) / spec.reps;
        const std::size_t rep = static_cast<std::size_t>(u) % spec.reps;
        try {
            outcomes[static_cast<std::size_t>(u)] =
                evaluate_rep(configs[i], spec.methods, derive_seed(spec.master_seed, i, rep));
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<CurvePoint> rows;
    for (std::size_t i = 0; i < points; ++i) {
        for (std::size_t m = 0; m < spec.methods.size(); ++m) {
            CurvePoint pt;
            pt.r = spec.r_grid[i];
            pt.delta = configs[i].delta;
            pt.method = spec.methods[m];
            pt.reps = spec.reps;
            pt.lower_bound = gaussian_tail(pt.r);
            double sum = 0.0;
            double sum_sq = 0.0;
            for (std::size_t rep = 0; rep < spec.reps; ++rep) {
                const auto& report = outcomes[i * spec.reps + rep].per_method[m];
                const double v = report ? report->normalized : 0.5;
                pt.successes += report && report->exact ? 1 : 0;
                sum += v;
                sum_sq += v * v;
            }
            const auto reps = static_cast<double>(spec.reps);
            pt.mean_miscls = sum / reps;
            const double var = spec.reps > 1 ? std::max(0.0, (sum_sq - reps * pt.mean_miscls * pt.mean_miscls) / (reps - 1.0)) : 0.0;
            pt.std_error = std::sqrt(var / reps);
            pt.ci_low = std::max(0.0, pt.mean_miscls - 1.96 * pt.std_error);
            pt.ci_high = std::min(0.5, pt.mean_miscls + 1.96 * pt.std_error);
            rows.push_back(pt);
        }
    }
    return rows;
}

}  // namespace gmmrec
