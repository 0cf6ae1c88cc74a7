#pragma once

// File formats: dataset binary, result CSVs, SVG heatmaps, plain-text run
// configs and the run manifest.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gmmrec/experiments.hpp"
#include "gmmrec/synth.hpp"

namespace gmmrec {

// ---------------------------------------------------------------------------
// Dataset binary format (all integers and floats little-endian):
//
//   offset 0   8 bytes   magic "GMM2SEED"
//   offset 8   4 bytes   uint32 header length L
//   offset 12  L bytes   header text, one key=value per line, in this order:
//                          n=<int> p=<int> sigma=<%.17g> delta=<%.17g>
//                          seed=<uint64> mode=fixed_norm | gaussian_prior:<%.17g alpha>
//   then       8p bytes  theta, float64
//   then       n bytes   eta, int8 (+1 / -1)
//   then       8pn bytes Y, float64, row-major p x n
// ---------------------------------------------------------------------------

class DatasetFormatError : public std::runtime_error {
public:
    enum class Code { Io = 1, BadMagic = 2, Truncated = 3, HeaderParse = 4, Validation = 5 };

    DatasetFormatError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Code code() const noexcept { return code_; }

private:
    Code code_;
};

inline constexpr char kDatasetMagic[8] = {'G', 'M', 'M', '2', 'S', 'E', 'E', 'D'};

void write_dataset(const Dataset& data, const std::filesystem::path& path);
Dataset read_dataset(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Grid CSV.
// ---------------------------------------------------------------------------

/// One CSV row; the in-memory image of a line of write_grid_csv output.
struct GridRow {
    double a = 0.0;
    double b = 0.0;
    double delta = 0.0;
    std::int64_t p = 0;
    std::string method;
    std::size_t reps = 0;
    std::size_t successes = 0;
    double success_rate = 0.0;
    double mean_miscls_frac = 0.0;
    double transformed_rate = 0.0;

    bool operator==(const GridRow&) const = default;
};

inline constexpr const char* kGridCsvHeader =
    "a,b,delta,p,method,reps,successes,success_rate,mean_miscls_frac,transformed_rate";

/// Rows of a completed result, sorted by (a, b, method name).
std::vector<GridRow> grid_rows(const GridResult& result);

/// Throws DomainError if the result is incomplete, IoError on write failure.
void write_grid_csv(const GridResult& result, const std::filesystem::path& path);
std::string grid_csv_text(const GridResult& result);
std::vector<GridRow> parse_grid_csv(const std::string& text);
std::vector<GridRow> read_grid_csv(const std::filesystem::path& path);

/// Success-rate map of one method from CSV rows.
HeatMap success_map_from_rows(const std::vector<GridRow>& rows, const std::string& method);

/// a,b,method1,method2,rate1,rate2,difference
void write_diff_csv(const HeatMap& diff, const HeatMap& first, const HeatMap& second, const std::string& method1,
                    const std::string& method2, const std::filesystem::path& path);

/// r,delta,p,n,method,reps,successes,mean_miscls_frac,risk_over_n,std_error,ci_low,ci_high,lower_bound
void write_curve_csv(const CurveSpec& spec, const std::vector<CurvePoint>& rows, const std::filesystem::path& path);
std::string curve_csv_text(const CurveSpec& spec, const std::vector<CurvePoint>& rows);

// ---------------------------------------------------------------------------
// SVG heatmaps.
//
// Sequential map (success rates): the cell value x is passed through
// success_transform, the result y in [0.001, 1] is rescaled to
// u = (y - 0.001) / 0.999, and u is interpolated linearly in RGB between the stops
//   u=0.00 #440154, 0.25 #3b528b, 0.50 #21918c, 0.75 #5ec962, 1.00 #fde725.
// Diverging map (differences d in [-1, 1]): linear in RGB between
//   d=-1 #2166ac, d=0 #ffffff, d=+1 #b2182b.
// ---------------------------------------------------------------------------

enum class HeatmapKind { SuccessRate, Difference };

struct Rgb {
    int r = 0;
    int g = 0;
    int b = 0;
    bool operator==(const Rgb&) const = default;
};

Rgb sequential_color(double success_rate);
Rgb diverging_color(double difference);
std::string to_hex(Rgb c);

/// Endpoints (b, a) of the threshold line a = 1 + 2b over the b-range of the
/// grid, clipped to the a-range. Empty if the line misses the grid.
std::optional<std::pair<std::pair<double, double>, std::pair<double, double>>> threshold_segment(
    const std::vector<double>& a_grid, const std::vector<double>& b_grid);

std::string heatmap_svg(const HeatMap& map, HeatmapKind kind, bool overlay_threshold, const std::string& title);
void render_heatmap_svg(const HeatMap& map, HeatmapKind kind, const std::filesystem::path& path,
                        bool overlay_threshold, const std::string& title = {});

// ---------------------------------------------------------------------------
// Run configs: plain text, one key=value per line, '#' starts a comment.
//
// Grid keys (kind=grid, the default): n, sigma, a_min, a_max, a_points,
//   b_min, b_max, b_points, reps, methods, seed.
// Curve keys (kind=curve): n, p, sigma, r_values (comma list), reps, methods, seed.
// Required: n, the grid bounds/points or r_values, reps. Defaults: sigma=1,
// seed=0, methods=spectral_lloyd,spectral. Unknown keys are errors.
// ---------------------------------------------------------------------------

using RunSpec = std::variant<GridSpec, CurveSpec>;

/// Throws ConfigError carrying the offending line number.
RunSpec parse_config(const std::string& text);
RunSpec load_config(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Run manifest (JSON).
// ---------------------------------------------------------------------------

struct ManifestOutput {
    std::string name;
    std::string blob_sha1;  ///< git blob id: sha1("blob <size>\0" + bytes)
};

struct RunManifest {
    std::string tool_version;
    std::string spec;  ///< canonical spec text
    std::uint64_t master_seed = 0;
    std::string started;
    std::string finished;
    std::vector<ManifestOutput> outputs;
    /// sha1 over "<name> <blob_sha1>\n" for each output in order.
    std::string content_hash;
};

std::string git_blob_sha1(const std::string& bytes);
std::string utc_timestamp();
/// Hashes the files in `outputs` (relative to dir) and fills outputs/content_hash.
RunManifest make_manifest(const std::string& spec, std::uint64_t seed, const std::string& started,
                          const std::filesystem::path& dir, const std::vector<std::string>& outputs);
std::string manifest_json(const RunManifest& manifest);
void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);

inline constexpr const char* kToolVersion = "0.3.0";

}  // namespace gmmrec
