#include "km/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <stdexcept>

#include "km/dkm.hpp"
#include "km/fsutil.hpp"
#include "km/ikm.hpp"
#include "km/lloyd.hpp"
#include "km/twophase.hpp"

namespace km {
namespace {

void append_double(std::string& out, double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, ptr);
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

}  // namespace

Algorithm algorithm_from_name(const std::string& name) {
    if (name == "km") return Algorithm::km;
    if (name == "ikm") return Algorithm::ikm;
    if (name == "dkm") return Algorithm::dkm;
    throw std::invalid_argument("unknown algorithm: " + name);
}

const char* algorithm_name(Algorithm alg) {
    switch (alg) {
        case Algorithm::km: return "km";
        case Algorithm::ikm: return "ikm";
        case Algorithm::dkm: return "dkm";
    }
    return "?";
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median of nothing");
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) return values[mid];
    return 0.5 * (values[mid - 1] + values[mid]);
}

TrialStats run_trials(Algorithm alg, PointsView data, std::size_t K, const TrialConfig& config) {
    if (config.trials < 1) throw std::invalid_argument("run_trials: trials must be >= 1");
    TrialStats stats;
    stats.algorithm = algorithm_name(alg);
    stats.K = K;
    stats.trials = config.trials;

    if (alg == Algorithm::km) {
        double sum = 0.0;
        double best = 0.0;
        for (std::size_t t = 0; t < config.trials; ++t) {
            const auto start = std::chrono::steady_clock::now();
            const RunResult run =
                run_km(data, K, config.termination, config.base_seed + t, config.threads);
            stats.times_ms.push_back(elapsed_ms(start));
            const double d = run.report.final_distortion;
            sum += d;
            best = t == 0 ? d : std::min(best, d);
            stats.learn_call_count = run.report.learn_calls.size();
        }
        stats.i_avg = sum / static_cast<double>(config.trials);
        stats.i_min_local = best;
        return stats;
    }

    // deterministic: one clustering, repeated timings
    const int repeats = std::max(1, config.timing_repeats);
    RunResult run;
    for (int r = 0; r < repeats; ++r) {
        const auto start = std::chrono::steady_clock::now();
        run = alg == Algorithm::ikm ? run_ikm(data, K, config.termination, config.threads)
                                    : run_dkm(data, K, config.termination, config.threads);
        stats.times_ms.push_back(elapsed_ms(start));
    }
    stats.i_avg = run.report.final_distortion;
    stats.i_min_local = run.report.final_distortion;
    stats.learn_call_count = run.report.learn_calls.size();
    return stats;
}

std::vector<RatioRow> ratio_table(const std::vector<std::vector<TrialStats>>& per_algorithm) {
    if (per_algorithm.empty()) throw std::invalid_argument("ratio_table: no stats");
    const std::size_t rows = per_algorithm.front().size();
    for (const auto& series : per_algorithm) {
        if (series.size() != rows) throw std::invalid_argument("ratio_table: mismatched K grids");
        for (std::size_t r = 0; r < rows; ++r) {
            if (series[r].K != per_algorithm.front()[r].K)
                throw std::invalid_argument("ratio_table: mismatched K grids");
        }
    }
    std::vector<RatioRow> table;
    table.reserve(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        RatioRow row;
        row.K = per_algorithm.front()[r].K;
        row.i_min_global = per_algorithm.front()[r].i_min_local;
        for (const auto& series : per_algorithm)
            row.i_min_global = std::min(row.i_min_global, series[r].i_min_local);
        for (const auto& series : per_algorithm)
            row.ratios.emplace_back(series[r].algorithm, series[r].i_avg / row.i_min_global);
        table.push_back(std::move(row));
    }
    return table;
}

std::vector<SpeedupRow> speedup_experiment(PointsView data, const SpeedupConfig& config) {
    if (std::find(config.worker_counts.begin(), config.worker_counts.end(), 1) ==
        config.worker_counts.end())
        throw std::invalid_argument("speedup_experiment: worker_counts must include 1");
    if (config.repeats < 1) throw std::invalid_argument("speedup_experiment: repeats must be >= 1");

    std::vector<SpeedupRow> rows;
    double base_ms = 0.0;
    for (const int workers : config.worker_counts) {
        std::vector<double> times;
        for (int r = 0; r < config.repeats; ++r) {
            const RunResult run =
                run_par2pk(data, config.K, config.kt, config.L, workers, config.termination);
            times.push_back(run.report.wall_ms);
        }
        SpeedupRow row;
        row.workers = workers;
        row.median_ms = median(std::move(times));
        if (workers == 1) base_ms = row.median_ms;
        rows.push_back(row);
    }
    for (SpeedupRow& row : rows) row.speedup = base_ms / row.median_ms;
    return rows;
}

void write_ratios_csv(const std::string& path, const std::string& dataset,
                      const std::vector<std::vector<TrialStats>>& per_algorithm) {
    const std::vector<RatioRow> table = ratio_table(per_algorithm);
    AtomicFile file(path);
    std::string buf = "dataset,K,algorithm,i_avg,i_min_global,ratio\n";
    for (std::size_t a = 0; a < per_algorithm.size(); ++a) {
        for (std::size_t r = 0; r < table.size(); ++r) {
            buf += dataset;
            buf += ',';
            buf += std::to_string(table[r].K);
            buf += ',';
            buf += table[r].ratios[a].first;
            buf += ',';
            append_double(buf, per_algorithm[a][r].i_avg);
            buf += ',';
            append_double(buf, table[r].i_min_global);
            buf += ',';
            append_double(buf, table[r].ratios[a].second);
            buf += '\n';
        }
    }
    file.stream() << buf;
    file.commit();
}

void write_times_csv(const std::string& path, const std::string& dataset,
                     const std::vector<std::vector<TrialStats>>& per_algorithm) {
    AtomicFile file(path);
    std::string buf = "dataset,K,algorithm,median_ms,learn_calls\n";
    for (const auto& series : per_algorithm) {
        for (const TrialStats& stats : series) {
            buf += dataset;
            buf += ',';
            buf += std::to_string(stats.K);
            buf += ',';
            buf += stats.algorithm;
            buf += ',';
            append_double(buf, median(stats.times_ms));
            buf += ',';
            buf += std::to_string(stats.learn_call_count);
            buf += '\n';
        }
    }
    file.stream() << buf;
    file.commit();
}

void write_speedup_csv(const std::string& path, const std::string& dataset,
                       const std::vector<SpeedupRow>& rows, bool include_reference) {
    AtomicFile file(path);
    std::string buf = "dataset,workers,median_ms,speedup\n";
    for (const SpeedupRow& row : rows) {
        buf += dataset;
        buf += ',';
        buf += std::to_string(row.workers);
        buf += ',';
        append_double(buf, row.median_ms);
        buf += ',';
        append_double(buf, row.speedup);
        buf += '\n';
    }
    if (include_reference) {
        for (const ReferenceSpeedup& ref : kReferenceSpeedups) {
            buf += ref.dataset;
            buf += ',';
            buf += std::to_string(ref.workers);
            buf += ",,";  // no measured time for reference rows
            append_double(buf, ref.ratio);
            buf += '\n';
        }
    }
    file.stream() << buf;
    file.commit();
}

}  // namespace km
