#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "km/bench.hpp"
#include "km/dkm.hpp"
#include "km/fsutil.hpp"
#include "km/ikm.hpp"
#include "km/ingest.hpp"
#include "km/lloyd.hpp"
#include "km/twophase.hpp"

namespace {

using km::Dataset;

struct CommonOpts {
    std::string input;
    std::string delimiter = ",";
    bool has_header = false;
    std::vector<std::string> drop_columns;
    long long attribute_limit = 0;  // 0: keep all
    int max_iters = 20;
    double epsilon = 1e-7;

    km::CsvOptions csv() const {
        km::CsvOptions opts;
        if (delimiter.size() != 1)
            throw std::invalid_argument("--delimiter must be a single character");
        opts.delimiter = delimiter[0];
        opts.has_header = has_header;
        opts.drop_columns = drop_columns;
        if (attribute_limit > 0) opts.attribute_limit = static_cast<std::size_t>(attribute_limit);
        return opts;
    }
    km::TerminationConfig termination() const { return {max_iters, epsilon}; }
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--input", opts.input, "input CSV file")->required();
    cmd->add_option("--delimiter", opts.delimiter, "field delimiter (default ,)");
    cmd->add_flag("--has-header", opts.has_header, "first row is a header");
    cmd->add_option("--drop-columns", opts.drop_columns,
                    "columns to drop, by header name or 0-based index")
        ->delimiter(',');
    cmd->add_option("--attribute-limit", opts.attribute_limit,
                    "keep only the first N retained columns");
    cmd->add_option("--max-iters", opts.max_iters, "learning iteration cap")->capture_default_str();
    cmd->add_option("--epsilon", opts.epsilon, "center displacement stop threshold")->capture_default_str();
}

std::string dataset_name(const std::string& input) {
    return std::filesystem::path(input).stem().string();
}

std::size_t resolve_segment_length(std::size_t n, long long segment_len, long long segments) {
    if (segment_len > 0 && segments > 0)
        throw std::invalid_argument("--segment-len and --segments are mutually exclusive");
    if (segment_len > 0) return static_cast<std::size_t>(segment_len);
    if (segments > 0) {
        const auto s = static_cast<std::size_t>(segments);
        return (n + s - 1) / s;
    }
    throw std::invalid_argument("two-phase runs need --segment-len or --segments");
}

nlohmann::ordered_json result_json(const std::string& algorithm, std::size_t k,
                                   std::optional<std::size_t> kt, const km::RunResult& result,
                                   double distortion) {
    nlohmann::ordered_json j;
    j["algorithm"] = algorithm;
    j["k"] = k;
    if (kt) j["kt"] = *kt;
    nlohmann::ordered_json centers = nlohmann::ordered_json::array();
    for (std::size_t c = 0; c < result.clusters.k(); ++c) {
        const auto span = result.clusters.center(c);
        centers.push_back(std::vector<double>(span.begin(), span.end()));
    }
    j["centers"] = std::move(centers);
    j["weights"] = result.clusters.weights;
    j["distortion"] = distortion;
    nlohmann::ordered_json calls = nlohmann::ordered_json::array();
    for (const km::LearnCall& call : result.report.learn_calls)
        calls.push_back({{"kc", call.kc}, {"iters", call.iterations}});
    j["learn_calls"] = std::move(calls);
    j["wall_ms"] = result.report.wall_ms;
    return j;
}

int cmd_cluster(const CommonOpts& common, const std::string& algorithm, std::size_t k,
                long long kt_flag, long long segment_len, long long segments, int workers,
                std::uint64_t seed, bool stream, const std::string& out_path) {
    const km::TerminationConfig term = common.termination();
    km::RunResult result;
    double distortion = 0.0;
    std::optional<std::size_t> kt_out;

    if (algorithm == "km" || algorithm == "ikm" || algorithm == "dkm") {
        const Dataset data = km::load_csv(common.input, common.csv());
        if (algorithm == "km")
            result = km::run_km(data.view(), k, term, seed);
        else if (algorithm == "ikm")
            result = km::run_ikm(data.view(), k, term);
        else
            result = km::run_dkm(data.view(), k, term);
        distortion = km::total_distortion(data.view(), result.clusters);
    } else if (algorithm == "2pk" || algorithm == "par2pk") {
        const std::size_t kt = kt_flag > 0 ? static_cast<std::size_t>(kt_flag) : k;
        kt_out = kt;
        const bool parallel = algorithm == "par2pk";
        if (stream) {
            if (segment_len <= 0)
                throw std::invalid_argument("--stream requires --segment-len");
            km::CsvSegmentSource source(common.input, common.csv(),
                                        static_cast<std::size_t>(segment_len), kt);
            result = parallel ? km::run_par2pk(source, k, kt, workers, term)
                              : km::run_2pk_sequential(source, k, kt, term);
            distortion = result.report.final_distortion;
        } else {
            const Dataset data = km::load_csv(common.input, common.csv());
            const std::size_t L = resolve_segment_length(data.size(), segment_len, segments);
            result = parallel ? km::run_par2pk(data.view(), k, kt, L, workers, term)
                              : km::run_2pk_sequential(data.view(), k, kt, L, term);
            distortion = km::total_distortion(data.view(), result.clusters);
        }
    } else {
        throw std::invalid_argument("unknown algorithm: " + algorithm);
    }

    km::AtomicFile file(out_path);
    file.stream() << result_json(algorithm, k, kt_out, result, distortion).dump(2) << '\n';
    file.commit();
    std::printf("%s k=%zu distortion=%.17g wall_ms=%.3f -> %s\n", algorithm.c_str(), k,
                distortion, result.report.wall_ms, out_path.c_str());
    return 0;
}

int cmd_bench(const CommonOpts& common, std::size_t k_min, std::size_t k_max, std::size_t trials,
              const std::vector<std::string>& algorithms, std::uint64_t seed,
              const std::string& out_dir) {
    if (k_min < 1 || k_max < k_min) throw std::invalid_argument("bad K range");
    const Dataset data = km::load_csv(common.input, common.csv());

    km::TrialConfig config;
    config.trials = trials;
    config.base_seed = seed;
    config.termination = common.termination();

    std::vector<std::vector<km::TrialStats>> per_algorithm;
    for (const std::string& name : algorithms) {
        const km::Algorithm alg = km::algorithm_from_name(name);
        std::vector<km::TrialStats> series;
        for (std::size_t k = k_min; k <= k_max; ++k)
            series.push_back(km::run_trials(alg, data.view(), k, config));
        per_algorithm.push_back(std::move(series));
        std::printf("%s: K=%zu..%zu done\n", name.c_str(), k_min, k_max);
    }

    std::filesystem::create_directories(out_dir);
    const std::string name = dataset_name(common.input);
    const std::string ratios = (std::filesystem::path(out_dir) / "ratios.csv").string();
    const std::string times = (std::filesystem::path(out_dir) / "times.csv").string();
    km::write_ratios_csv(ratios, name, per_algorithm);
    km::write_times_csv(times, name, per_algorithm);
    std::printf("wrote %s and %s\n", ratios.c_str(), times.c_str());
    return 0;
}

int cmd_enlarge(const CommonOpts& common, std::size_t factor, double noise_scale,
                std::uint64_t seed, const std::string& out_path) {
    const std::size_t rows = km::enlarge_csv(common.input, out_path, factor, noise_scale, seed,
                                             common.csv());
    std::printf("%zu\n", rows);
    return 0;
}

int cmd_speedup(const CommonOpts& common, std::size_t k, long long kt_flag, long long segment_len,
                long long segments, const std::vector<int>& workers_list, int repeats,
                const std::string& out_path) {
    const Dataset data = km::load_csv(common.input, common.csv());
    km::SpeedupConfig config;
    config.K = k;
    config.kt = kt_flag > 0 ? static_cast<std::size_t>(kt_flag) : k;
    config.L = resolve_segment_length(data.size(), segment_len, segments);
    config.worker_counts = workers_list;
    config.repeats = repeats;
    config.termination = common.termination();

    const std::vector<km::SpeedupRow> rows = km::speedup_experiment(data.view(), config);
    km::write_speedup_csv(out_path, dataset_name(common.input), rows, true);

    std::printf("%-8s %12s %10s\n", "workers", "median_ms", "speedup");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::printf("%-8d %12.2f %10.3f\n", rows[i].workers, rows[i].median_ms, rows[i].speedup);
        if (i > 0 && rows[i].workers > rows[i - 1].workers &&
            rows[i].speedup < rows[i - 1].speedup)
            std::printf("note: speedup dropped from %d to %d workers (noisy or oversubscribed "
                        "machine?)\n",
                        rows[i - 1].workers, rows[i].workers);
    }
    std::printf("reference ratios (8-node Hadoop evaluation):\n");
    for (const km::ReferenceSpeedup& ref : km::kReferenceSpeedups)
        std::printf("%-12s workers=%d speedup=%.2f\n", ref.dataset, ref.workers, ref.ratio);
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"k-means clustering toolkit: plain, incremental, divisive and two-phase"};
    app.require_subcommand(1);

    // cluster
    auto* cluster = app.add_subcommand("cluster", "run one clustering and write a JSON result");
    CommonOpts cl_common;
    std::string cl_algorithm;
    std::size_t cl_k = 0;
    long long cl_kt = 0, cl_seglen = 0, cl_segments = 0;
    int cl_workers = 1;
    std::uint64_t cl_seed = 0;
    bool cl_stream = false;
    std::string cl_out;
    add_common(cluster, cl_common);
    cluster->add_option("--algorithm", cl_algorithm, "km|ikm|dkm|2pk|par2pk")
        ->required()
        ->check(CLI::IsMember({"km", "ikm", "dkm", "2pk", "par2pk"}));
    cluster->add_option("--k", cl_k, "number of clusters")->required();
    cluster->add_option("--kt", cl_kt, "per-segment cluster count (two-phase; default k)");
    cluster->add_option("--segment-len", cl_seglen, "objects per segment (two-phase)");
    cluster->add_option("--segments", cl_segments, "number of segments (two-phase)");
    cluster->add_option("--workers", cl_workers, "mapper pool size (par2pk)")->capture_default_str();
    cluster->add_option("--seed", cl_seed, "seed for km initialization")->capture_default_str();
    cluster->add_flag("--stream", cl_stream,
                      "stream segments from the file instead of loading it (two-phase)");
    cluster->add_option("--out", cl_out, "output JSON path")->required();

    // bench
    auto* bench = app.add_subcommand("bench", "multi-trial distortion-ratio and timing tables");
    CommonOpts be_common;
    std::size_t be_kmin = 2, be_kmax = 20, be_trials = 100;
    std::vector<std::string> be_algorithms{"km", "ikm", "dkm"};
    std::uint64_t be_seed = 0;
    std::string be_outdir;
    add_common(bench, be_common);
    bench->add_option("--k-min", be_kmin, "smallest K")->capture_default_str();
    bench->add_option("--k-max", be_kmax, "largest K")->capture_default_str();
    bench->add_option("--trials", be_trials, "trials per K (seeded km reruns)")->capture_default_str();
    bench->add_option("--algorithms", be_algorithms, "subset of km,ikm,dkm")->delimiter(',');
    bench->add_option("--seed", be_seed, "base seed for km trials")->capture_default_str();
    bench->add_option("--out-dir", be_outdir, "directory for ratios.csv and times.csv")
        ->required();

    // enlarge
    auto* enlarge = app.add_subcommand("enlarge", "replicate a dataset with seeded noise");
    CommonOpts en_common;
    std::size_t en_factor = 1;
    double en_noise = 0.05;
    std::uint64_t en_seed = 0;
    std::string en_out;
    add_common(enlarge, en_common);
    enlarge->add_option("--factor", en_factor, "total copies of each row")->required();
    enlarge->add_option("--noise-scale", en_noise,
                        "noise stddev as a fraction of each attribute's stddev")
        ->capture_default_str();
    enlarge->add_option("--seed", en_seed, "noise seed")->capture_default_str();
    enlarge->add_option("--out", en_out, "output CSV path")->required();

    // speedup
    auto* speedup = app.add_subcommand("speedup", "worker-count scaling of the parallel pipeline");
    CommonOpts sp_common;
    std::size_t sp_k = 10;
    long long sp_kt = 0, sp_seglen = 0, sp_segments = 0;
    std::vector<int> sp_workers{1, 2, 4, 8};
    int sp_repeats = 5;
    std::string sp_out;
    add_common(speedup, sp_common);
    speedup->add_option("--k", sp_k, "number of clusters")->capture_default_str();
    speedup->add_option("--kt", sp_kt, "per-segment cluster count (default k)");
    speedup->add_option("--segment-len", sp_seglen, "objects per segment");
    speedup->add_option("--segments", sp_segments, "number of segments");
    speedup->add_option("--workers-list", sp_workers, "worker counts to time")->delimiter(',');
    speedup->add_option("--repeats", sp_repeats, "timing repeats per worker count")->capture_default_str();
    speedup->add_option("--out", sp_out, "output speedup.csv path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cluster->parsed())
            return cmd_cluster(cl_common, cl_algorithm, cl_k, cl_kt, cl_seglen, cl_segments,
                               cl_workers, cl_seed, cl_stream, cl_out);
        if (bench->parsed())
            return cmd_bench(be_common, be_kmin, be_kmax, be_trials, be_algorithms, be_seed,
                             be_outdir);
        if (enlarge->parsed()) return cmd_enlarge(en_common, en_factor, en_noise, en_seed, en_out);
        if (speedup->parsed())
            return cmd_speedup(sp_common, sp_k, sp_kt, sp_seglen, sp_segments, sp_workers,
                               sp_repeats, sp_out);
    } catch (const km::SegmentError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.infeasible() ? 4 : 3;
    } catch (const km::InfeasibleKError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const km::CsvError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
