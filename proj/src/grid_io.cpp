#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "gmmrec/errors.hpp"
#include "gmmrec/format.hpp"
#include "gmmrec/io.hpp"

namespace gmmrec {
namespace {

void write_text(const std::string& text, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw IoError("write to " + path.string() + " failed");
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

std::vector<GridRow> grid_rows(const GridResult& result) {
    if (!result.complete()) throw DomainError("grid_rows: result has incomplete cells");
    const GridSpec& spec = result.spec;
    std::vector<GridRow> rows;
    rows.reserve(spec.cell_count() * spec.methods.size());
    for (std::size_t ai = 0; ai < spec.a_grid.size(); ++ai) {
        for (std::size_t bi = 0; bi < spec.b_grid.size(); ++bi) {
            const ProblemConfig config = ab_to_config({spec.a_grid[ai], spec.b_grid[bi]}, spec.n, spec.sigma);
            for (std::size_t m = 0; m < spec.methods.size(); ++m) {
                const MethodTally& t = result.cell(ai, bi).tallies[m];
                GridRow row;
                row.a = spec.a_grid[ai];
                row.b = spec.b_grid[bi];
                row.delta = config.delta;
                row.p = config.p;
                row.method = std::string(method_name(spec.methods[m]));
                row.reps = t.reps_done;
                row.successes = t.successes;
                row.success_rate = t.success_rate();
                row.mean_miscls_frac = t.mean_miscls();
                row.transformed_rate = success_transform(row.success_rate);
                rows.push_back(std::move(row));
            }
        }
    }
    std::stable_sort(rows.begin(), rows.end(), [](const GridRow& x, const GridRow& y) {
        if (x.a != y.a) return x.a < y.a;
        if (x.b != y.b) return x.b < y.b;
        return x.method < y.method;
    });
    return rows;
}

std::string grid_csv_text(const GridResult& result) {
    std::string out = std::string(kGridCsvHeader) + "\n";
    for (const GridRow& r : grid_rows(result)) {
        out += format_g17(r.a) + ',' + format_g17(r.b) + ',' + format_g17(r.delta) + ',' + std::to_string(r.p) + ',' +
               r.method + ',' + std::to_string(r.reps) + ',' + std::to_string(r.successes) + ',' +
               format_g17(r.success_rate) + ',' + format_g17(r.mean_miscls_frac) + ',' +
               format_g17(r.transformed_rate) + '\n';
    }
    return out;
}

void write_grid_csv(const GridResult& result, const std::filesystem::path& path) {
    write_text(grid_csv_text(result), path);
}

std::vector<GridRow> parse_grid_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kGridCsvHeader) throw IoError("grid CSV: missing or unexpected header");
    std::vector<GridRow> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 10) throw IoError("grid CSV line " + std::to_string(line_no) + ": expected 10 fields");
        try {
            GridRow r;
            r.a = parse_double(f[0]);
            r.b = parse_double(f[1]);
            r.delta = parse_double(f[2]);
            r.p = parse_int(f[3]);
            r.method = f[4];
            r.reps = static_cast<std::size_t>(parse_uint(f[5]));
            r.successes = static_cast<std::size_t>(parse_uint(f[6]));
            r.success_rate = parse_double(f[7]);
            r.mean_miscls_frac = parse_double(f[8]);
            r.transformed_rate = parse_double(f[9]);
            rows.push_back(std::move(r));
        } catch (const DomainError& e) {
            throw IoError("grid CSV line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return rows;
}

std::vector<GridRow> read_grid_csv(const std::filesystem::path& path) {
    return parse_grid_csv(read_text(path));
}

HeatMap success_map_from_rows(const std::vector<GridRow>& rows, const std::string& method) {
    std::vector<double> a_values;
    std::vector<double> b_values;
    std::map<std::pair<double, double>, double> rate;
    for (const GridRow& r : rows) {
        if (r.method != method) continue;
        a_values.push_back(r.a);
        b_values.push_back(r.b);
        rate[{r.a, r.b}] = r.success_rate;
    }
    if (rate.empty()) throw DomainError("no rows for method '" + method + "'");
    auto unique_sorted = [](std::vector<double>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    unique_sorted(a_values);
    unique_sorted(b_values);
    HeatMap map{a_values, b_values, Matrix(a_values.size(), b_values.size())};
    for (std::size_t ai = 0; ai < a_values.size(); ++ai) {
        for (std::size_t bi = 0; bi < b_values.size(); ++bi) {
            const auto it = rate.find({a_values[ai], b_values[bi]});
            if (it == rate.end()) throw DomainError("grid CSV is missing a cell for method '" + method + "'");
            map.values(ai, bi) = it->second;
        }
    }
    return map;
}

void write_diff_csv(const HeatMap& diff, const HeatMap& first, const HeatMap& second, const std::string& method1,
                    const std::string& method2, const std::filesystem::path& path) {
    std::string out = "a,b,method1,method2,rate1,rate2,difference\n";
    for (std::size_t ai = 0; ai < diff.a_grid.size(); ++ai)
        for (std::size_t bi = 0; bi < diff.b_grid.size(); ++bi)
            out += format_g17(diff.a_grid[ai]) + ',' + format_g17(diff.b_grid[bi]) + ',' + method1 + ',' + method2 +
                   ',' + format_g17(first.values(ai, bi)) + ',' + format_g17(second.values(ai, bi)) + ',' +
                   format_g17(diff.values(ai, bi)) + '\n';
    write_text(out, path);
}

std::string curve_csv_text(const CurveSpec& spec, const std::vector<CurvePoint>& rows) {
    std::string out =
        "r,delta,p,n,method,reps,successes,mean_miscls_frac,risk_over_n,std_error,ci_low,ci_high,lower_bound\n";
    for (const CurvePoint& r : rows)
        out += format_g17(r.r) + ',' + format_g17(r.delta) + ',' + std::to_string(spec.p) + ',' +
               std::to_string(spec.n) + ',' + std::string(method_name(r.method)) + ',' + std::to_string(r.reps) + ',' +
               std::to_string(r.successes) + ',' + format_g17(r.mean_miscls) + ',' + format_g17(2.0 * r.mean_miscls) +
               ',' + format_g17(r.std_error) + ',' + format_g17(r.ci_low) + ',' + format_g17(r.ci_high) + ',' +
               format_g17(r.lower_bound) + '\n';
    return out;
}

void write_curve_csv(const CurveSpec& spec, const std::vector<CurvePoint>& rows, const std::filesystem::path& path) {
    write_text(curve_csv_text(spec, rows), path);
}

}  // namespace gmmrec
