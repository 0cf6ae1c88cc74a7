#pragma once

// Monte-Carlo experiment engine: (a, b) phase-diagram grids, method
// comparisons and risk-vs-SNR curves.
//
// Seeding. Rep r of grid cell c (c = a_index * |b_grid| + b_index) draws its
// dataset from derive_seed(master, c, r). Inside a rep, the power-iteration
// start vector uses derive_seed(rep_seed, 1, 0) and the random Lloyd start
// uses derive_seed(rep_seed, 2, 0). Every requested method sees the same
// dataset. Results therefore do not depend on worker count, scheduling, or
// interruption.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gmmrec/core_model.hpp"
#include "gmmrec/estimators.hpp"
#include "gmmrec/matrix.hpp"
#include "gmmrec/risk.hpp"

namespace gmmrec {

struct GridSpec {
    std::int64_t n = 200;
    double sigma = 1.0;
    std::vector<double> a_grid;
    std::vector<double> b_grid;
    std::size_t reps = 60;
    std::vector<Method> methods;
    std::uint64_t master_seed = 0;

    /// Grids nonempty and strictly increasing, reps >= 1, methods nonempty and distinct.
    void validate() const;

    /// Text form hashed into checkpoints; doubles use 17 significant digits.
    std::string canonical() const;
    /// FNV-1a 64 of canonical().
    std::uint64_t hash() const;

    std::size_t cell_count() const noexcept { return a_grid.size() * b_grid.size(); }
    std::size_t cell_index(std::size_t a_index, std::size_t b_index) const noexcept {
        return a_index * b_grid.size() + b_index;
    }
    std::optional<std::size_t> method_slot(Method m) const;

    bool operator==(const GridSpec&) const = default;
};

/// n points from lo to hi inclusive (n = 1 gives {lo}).
std::vector<double> linspace(double lo, double hi, std::size_t n);

/// n = 200, 15 x 15 grid over a in [1.1, 11], b in [0.1, 5], 60 reps, spectral_lloyd and spectral.
GridSpec desk_preset(std::uint64_t seed);
/// n = 500, 50 x 50 grid over the same ranges, 300 reps, spectral_lloyd, spectral, random_lloyd.
GridSpec paper_preset(std::uint64_t seed);

struct MethodTally {
    std::size_t successes = 0;
    std::size_t reps_done = 0;
    std::size_t solver_failures = 0;
    /// Sum of misclassified fractions over reps, in rep order.
    double sum_miscls = 0.0;

    double success_rate() const noexcept {
        return reps_done == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(reps_done);
    }
    double mean_miscls() const noexcept { return reps_done == 0 ? 0.0 : sum_miscls / static_cast<double>(reps_done); }

    bool operator==(const MethodTally&) const = default;
};

struct CellResult {
    bool completed = false;
    std::vector<MethodTally> tallies;  ///< parallel to GridSpec::methods

    bool operator==(const CellResult&) const = default;
};

struct GridResult {
    GridSpec spec;
    std::vector<CellResult> cells;  ///< indexed by GridSpec::cell_index

    const CellResult& cell(std::size_t a_index, std::size_t b_index) const {
        return cells.at(spec.cell_index(a_index, b_index));
    }
    const MethodTally& tally(std::size_t a_index, std::size_t b_index, Method m) const;
    bool complete() const noexcept;
    std::size_t completed_cells() const noexcept;

    bool operator==(const GridResult&) const = default;
};

struct RunOptions {
    int workers = 1;
    /// Checkpoint file (JSON lines). A fresh run truncates it; a resume appends.
    std::optional<std::filesystem::path> checkpoint;
    /// Stop after this many newly completed cells (simulated interruption).
    std::optional<std::size_t> stop_after_cells;
};

/// Outcome of one rep: per requested method, the risk or nullopt if the
/// eigensolver failed (scored as non-recovery with misclassified fraction 1/2).
struct RepOutcome {
    std::vector<std::optional<RiskReport>> per_method;
    /// FNV-1a of the dataset bytes when requested, else 0.
    std::uint64_t dataset_checksum = 0;
};

RepOutcome evaluate_rep(const ProblemConfig& config, std::span<const Method> methods, std::uint64_t rep_seed,
                        bool record_checksum = false);

GridResult run_grid(const GridSpec& spec, const RunOptions& options = {});

/// Continues the run stored in `checkpoint`, computing only missing cells.
/// Throws CheckpointError(Corrupt) on malformed records or if the stored spec
/// no longer matches its recorded hash.
GridResult resume_grid(const std::filesystem::path& checkpoint, const RunOptions& options = {});

/// As above, but additionally requires the checkpoint to belong to `spec`
/// (CheckpointError(SpecMismatch) otherwise).
GridResult resume_grid(const GridSpec& spec, const std::filesystem::path& checkpoint, const RunOptions& options = {});

/// Per-cell values over the (a, b) grid; values(a_index, b_index).
struct HeatMap {
    std::vector<double> a_grid;
    std::vector<double> b_grid;
    Matrix values;
};

HeatMap success_map(const GridResult& result, Method method);

/// success_rate(method1) - success_rate(method2) per cell, in [-1, 1].
/// Throws DomainError if either method is not part of the run.
HeatMap diff_grids(const GridResult& result, Method method1, Method method2);
/// Same for two separately stored maps on one grid (DomainError on grid mismatch).
HeatMap diff_maps(const HeatMap& first, const HeatMap& second);

/// Display scaling x -> 10^(-3 (1 - x)) on [0, 1]; DomainError outside.
double success_transform(double x);

struct CurveSpec {
    std::int64_t n = 300;
    std::int64_t p = 600;
    double sigma = 1.0;
    std::vector<double> r_grid;
    std::size_t reps = 200;
    std::vector<Method> methods;
    std::uint64_t master_seed = 0;

    void validate() const;
    std::string canonical() const;
};

struct CurvePoint {
    double r = 0.0;
    double delta = 0.0;
    Method method = Method::SpectralLloyd;
    std::size_t reps = 0;
    std::size_t successes = 0;
    double mean_miscls = 0.0;
    double std_error = 0.0;  ///< sample standard deviation / sqrt(reps)
    double ci_low = 0.0;     ///< mean -/+ 1.96 std_error, clipped to [0, 1/2]
    double ci_high = 0.0;
    double lower_bound = 0.0;  ///< gaussian_tail(r)
};

/// Rows ordered by r, then by the order of spec.methods. Rep r of SNR index i
/// uses derive_seed(master, i, r).
std::vector<CurvePoint> run_curve(const CurveSpec& spec, int workers = 1);

}  // namespace gmmrec
