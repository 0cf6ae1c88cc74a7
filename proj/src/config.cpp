#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "gmmrec/errors.hpp"
#include "gmmrec/format.hpp"
#include "gmmrec/io.hpp"

namespace gmmrec {
namespace {

struct Entry {
    std::string value;
    int line = 0;
};

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

class Entries {
public:
    explicit Entries(std::map<std::string, Entry> e) : e_(std::move(e)) {}

    bool has(const std::string& key) const { return e_.count(key) != 0; }
    int line(const std::string& key) const { return has(key) ? e_.at(key).line : 0; }

    const Entry& require(const std::string& key) const {
        const auto it = e_.find(key);
        if (it == e_.end()) throw ConfigError("missing required key '" + key + "'", 0);
        return it->second;
    }

    template <typename F>
    auto convert(const std::string& key, F&& parse) const {
        const Entry& entry = require(key);
        try {
            return parse(entry.value);
        } catch (const DomainError& ex) {
            throw ConfigError(key + ": " + ex.what(), entry.line);
        }
    }

    double real(const std::string& key, double fallback) const {
        return has(key) ? convert(key, [](const std::string& v) { return parse_double(v); }) : fallback;
    }
    double real(const std::string& key) const {
        return convert(key, [](const std::string& v) { return parse_double(v); });
    }
    std::int64_t integer(const std::string& key) const {
        return convert(key, [](const std::string& v) { return parse_int(v); });
    }
    std::uint64_t uinteger(const std::string& key, std::uint64_t fallback) const {
        return has(key) ? convert(key, [](const std::string& v) { return parse_uint(v); }) : fallback;
    }

    std::vector<double> reals(const std::string& key) const {
        return convert(key, [](const std::string& v) {
            std::vector<double> out;
            std::istringstream in(v);
            std::string part;
            while (std::getline(in, part, ',')) out.push_back(parse_double(part));
            return out;
        });
    }

    std::vector<Method> methods() const {
        if (!has("methods")) return {Method::SpectralLloyd, Method::Spectral};
        return convert("methods", [](const std::string& v) {
            std::vector<Method> out;
            std::istringstream in(v);
            std::string part;
            while (std::getline(in, part, ',')) out.push_back(parse_method(trim(part)));
            return out;
        });
    }

private:
    std::map<std::string, Entry> e_;
};

std::vector<double> axis(const Entries& e, const std::string& prefix) {
    const double lo = e.real(prefix + "_min");
    const double hi = e.real(prefix + "_max");
    const std::int64_t points = e.integer(prefix + "_points");
    if (points < 1) throw ConfigError(prefix + "_points must be >= 1", e.line(prefix + "_points"));
    if (lo > hi) throw ConfigError(prefix + "_min must not exceed " + prefix + "_max", e.line(prefix + "_min"));
    if (points > 1 && lo == hi)
        throw ConfigError(prefix + "_min equals " + prefix + "_max with more than one point", e.line(prefix + "_min"));
    return linspace(lo, hi, static_cast<std::size_t>(points));
}

template <typename Spec>
Spec validated(Spec spec) {
    try {
        spec.validate();
    } catch (const DomainError& ex) {
        throw ConfigError(ex.what(), 0);
    }
    return spec;
}

}  // namespace

RunSpec parse_config(const std::string& text) {
    static const std::set<std::string> grid_keys{"kind",   "n",     "sigma",    "a_min", "a_max",   "a_points",
                                                 "b_min",  "b_max", "b_points", "reps",  "methods", "seed"};
    static const std::set<std::string> curve_keys{"kind", "n", "p", "sigma", "r_values", "reps", "methods", "seed"};

    std::map<std::string, Entry> raw;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key=value", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("empty key", line_no);
        if (raw.count(key)) throw ConfigError("duplicate key '" + key + "'", line_no);
        raw[key] = Entry{value, line_no};
    }

    const std::string kind = raw.count("kind") ? raw["kind"].value : "grid";
    if (kind != "grid" && kind != "curve") throw ConfigError("kind must be 'grid' or 'curve'", raw["kind"].line);
    const auto& allowed = kind == "grid" ? grid_keys : curve_keys;
    for (const auto& [key, entry] : raw)
        if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' for kind=" + kind, entry.line);

    const Entries e(std::move(raw));
    if (kind == "grid") {
        GridSpec spec;
        spec.n = e.integer("n");
        spec.sigma = e.real("sigma", 1.0);
        spec.a_grid = axis(e, "a");
        spec.b_grid = axis(e, "b");
        const std::int64_t reps = e.integer("reps");
        if (reps < 1) throw ConfigError("reps must be >= 1", e.line("reps"));
        spec.reps = static_cast<std::size_t>(reps);
        spec.methods = e.methods();
        spec.master_seed = e.uinteger("seed", 0);
        return validated(std::move(spec));
    }

    CurveSpec spec;
    spec.n = e.integer("n");
    spec.p = e.integer("p");
    spec.sigma = e.real("sigma", 1.0);
    spec.r_grid = e.reals("r_values");
    const std::int64_t reps = e.integer("reps");
    if (reps < 1) throw ConfigError("reps must be >= 1", e.line("reps"));
    spec.reps = static_cast<std::size_t>(reps);
    spec.methods = e.methods();
    spec.master_seed = e.uinteger("seed", 0);
    return validated(std::move(spec));
}

RunSpec load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

}  // namespace gmmrec
