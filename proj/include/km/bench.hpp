#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "km/core.hpp"

namespace km {

enum class Algorithm { km, ikm, dkm };

Algorithm algorithm_from_name(const std::string& name);
const char* algorithm_name(Algorithm alg);

/// Multi-trial record for one (algorithm, K): mean and best final distortion
/// plus per-trial wall times. Deterministic algorithms collapse to a single
/// clustering run; only the timing is repeated.
struct TrialStats {
    std::string algorithm;
    std::size_t K = 0;
    std::size_t trials = 0;
    double i_avg = 0.0;
    double i_min_local = 0.0;
    std::vector<double> times_ms;
    std::size_t learn_call_count = 0;
};

struct TrialConfig {
    std::size_t trials = 100;
    std::uint64_t base_seed = 0;
    int timing_repeats = 5;  // wall-time repeats for the deterministic algorithms
    TerminationConfig termination;
    int threads = 1;
};

/// Runs `trials` clusterings at the given K. km seeds trial t with
/// base_seed + t; ikm/dkm run once and report that distortion for every
/// trial, with timing_repeats repeated timings.
TrialStats run_trials(Algorithm alg, PointsView data, std::size_t K, const TrialConfig& config);

/// One K of the ratio table: i_min_global is the best distortion any
/// compared algorithm reached at this K, each ratio is i_avg over it.
struct RatioRow {
    std::size_t K = 0;
    double i_min_global = 0.0;
    std::vector<std::pair<std::string, double>> ratios;
};

/// Per-algorithm stats over a shared K grid in, one RatioRow per K out.
/// Mismatched grids are an error.
std::vector<RatioRow> ratio_table(const std::vector<std::vector<TrialStats>>& per_algorithm);

struct SpeedupRow {
    int workers = 0;
    double median_ms = 0.0;
    double speedup = 0.0;
};

struct SpeedupConfig {
    std::size_t K = 10;
    std::size_t kt = 10;
    std::size_t L = 0;
    std::vector<int> worker_counts{1, 2, 4, 8};
    int repeats = 5;
    TerminationConfig termination;
};

/// Times run_par2pk per worker count (median of `repeats`) and reports
/// speedup(w) = median(1) / median(w). worker_counts must include 1.
std::vector<SpeedupRow> speedup_experiment(PointsView data, const SpeedupConfig& config);

/// Published reference speedup ratios for the original 8-node evaluation of
/// this pipeline, printed next to measured values.
struct ReferenceSpeedup {
    const char* dataset;
    int workers;
    double ratio;
};
inline constexpr ReferenceSpeedup kReferenceSpeedups[] = {
    {"ref-87.6MB", 1, 1.0},  {"ref-87.6MB", 2, 1.95}, {"ref-87.6MB", 4, 3.75},
    {"ref-87.6MB", 8, 6.98}, {"ref-1.23GB", 1, 1.0},  {"ref-1.23GB", 2, 1.99},
    {"ref-1.23GB", 4, 3.96}, {"ref-1.23GB", 8, 7.77},
};

// CSV emission; headers are part of the interface.
//   ratios.csv  -> dataset,K,algorithm,i_avg,i_min_global,ratio
//   times.csv   -> dataset,K,algorithm,median_ms,learn_calls
//   speedup.csv -> dataset,workers,median_ms,speedup
void write_ratios_csv(const std::string& path, const std::string& dataset,
                      const std::vector<std::vector<TrialStats>>& per_algorithm);
void write_times_csv(const std::string& path, const std::string& dataset,
                     const std::vector<std::vector<TrialStats>>& per_algorithm);
void write_speedup_csv(const std::string& path, const std::string& dataset,
                       const std::vector<SpeedupRow>& rows, bool include_reference);

double median(std::vector<double> values);

}  // namespace km
