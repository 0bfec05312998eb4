#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "km/bench.hpp"
#include "km/lloyd.hpp"
#include "km/synth.hpp"
#include "test_util.hpp"

using namespace km;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_SUITE("bench") {

TEST_CASE("median of odd and even counts") {
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
    CHECK_THROWS_AS(median({}), std::invalid_argument);
}

TEST_CASE("run_trials collapses deterministic algorithms") {
    const Dataset data = synth::make_blobs(60, 2, 4, 0.5, 6.0, 19);
    TrialConfig config;
    config.trials = 100;
    config.timing_repeats = 5;
    const TrialStats stats = run_trials(Algorithm::ikm, data.view(), 4, config);
    CHECK(stats.i_avg == stats.i_min_local);  // zero variance across trials
    CHECK(stats.trials == 100);
    CHECK(stats.times_ms.size() == 5);
    CHECK(stats.learn_call_count == 4);
    const TrialStats dkm_stats = run_trials(Algorithm::dkm, data.view(), 4, config);
    CHECK(dkm_stats.i_avg == dkm_stats.i_min_local);
}

TEST_CASE("km trials on the square corners can reach the optimum") {
    auto data = kmtest::dataset({{0, 0}, {0, 1}, {10, 0}, {10, 1}});
    TrialConfig config;
    config.trials = 20;
    config.base_seed = 0;
    const TrialStats stats = run_trials(Algorithm::km, data.view(), 2, config);
    CHECK(stats.i_min_local == 1.0);
    CHECK(stats.i_avg >= stats.i_min_local);
    CHECK(stats.times_ms.size() == 20);
}

TEST_CASE("km random restarts hit distinct local optima on a 3-blob line") {
    auto data = kmtest::dataset({{0.0}, {0.1}, {5.0}, {5.1}, {10.0}, {10.1}});
    // oracle over every distinct 3-subset of points as the initialization:
    // collect the set of converged distortions
    std::vector<double> finals;
    for (std::size_t a = 0; a < 6; ++a)
        for (std::size_t b = a + 1; b < 6; ++b)
            for (std::size_t c = b + 1; c < 6; ++c) {
                std::vector<double> init{data.point(a)[0], data.point(b)[0], data.point(c)[0]};
                const LearnOutcome out = kmeans_learn(
                    data.view(), ClusterSet::from_centers(init, 1), TerminationConfig{});
                finals.push_back(out.clusters.total_distortion());
            }
        const double best = *std::min_element(finals.begin(), finals.end());
    const double worst = *std::max_element(finals.begin(), finals.end());
    CHECK(best == doctest::Approx(0.015));  // three tight pairs
    CHECK(worst > best + 1e-6);             // local optima exist

    TrialConfig config;
    config.trials = 100;
    const TrialStats stats = run_trials(Algorithm::km, data.view(), 3, config);
    CHECK(stats.i_avg > stats.i_min_local);
}

TEST_CASE("ratio_table computes per-K global minima") {
    TrialStats a;
    a.algorithm = "km";
    a.K = 2;
    a.trials = 10;
    a.i_avg = 2.0;
    a.i_min_local = 1.5;
    TrialStats b;
    b.algorithm = "ikm";
    b.K = 2;
    b.trials = 10;
    b.i_avg = 1.0;
    b.i_min_local = 1.0;
    const auto table = ratio_table({{a}, {b}});
    REQUIRE(table.size() == 1);
    CHECK(table[0].i_min_global == 1.0);
    CHECK(table[0].ratios[0].second == 2.0);
    CHECK(table[0].ratios[1].second == 1.0);

    TrialStats c = b;
    c.K = 3;
    CHECK_THROWS_AS(ratio_table({{a}, {c}}), std::invalid_argument);
    CHECK_THROWS_AS(ratio_table({{a}, {b, c}}), std::invalid_argument);
}

TEST_CASE("ratios are exactly 1 for a single deterministic algorithm") {
    const Dataset data = synth::make_blobs(50, 2, 3, 0.4, 5.0, 23);
    TrialConfig config;
    config.trials = 3;
    std::vector<TrialStats> series;
    for (std::size_t k = 2; k <= 4; ++k)
        series.push_back(run_trials(Algorithm::ikm, data.view(), k, config));
    for (const RatioRow& row : ratio_table({series})) {
        CHECK(row.ratios[0].second == 1.0);
        CHECK(row.ratios[0].second >= 1.0 - 1e-12);
    }
}

TEST_CASE("csv writers emit the pinned headers") {
    const Dataset data = synth::make_blobs(40, 2, 3, 0.4, 5.0, 31);
    TrialConfig config;
    config.trials = 2;
    config.timing_repeats = 2;
    std::vector<std::vector<TrialStats>> per_alg;
    for (const Algorithm alg : {Algorithm::km, Algorithm::ikm}) {
        std::vector<TrialStats> series;
        for (std::size_t k = 2; k <= 3; ++k)
            series.push_back(run_trials(alg, data.view(), k, config));
        per_alg.push_back(std::move(series));
    }
    const auto dir = std::filesystem::temp_directory_path();
    const std::string ratios = (dir / "km_t_ratios.csv").string();
    const std::string times = (dir / "km_t_times.csv").string();
    write_ratios_csv(ratios, "blob40", per_alg);
    write_times_csv(times, "blob40", per_alg);

    const std::string rtext = slurp(ratios);
    CHECK(rtext.rfind("dataset,K,algorithm,i_avg,i_min_global,ratio\n", 0) == 0);
    CHECK(std::count(rtext.begin(), rtext.end(), '\n') == 5);  // header + 2 algs * 2 Ks
    const std::string ttext = slurp(times);
    CHECK(ttext.rfind("dataset,K,algorithm,median_ms,learn_calls\n", 0) == 0);

    const std::string speedup = (dir / "km_t_speedup.csv").string();
    write_speedup_csv(speedup, "blob40", {{1, 10.0, 1.0}, {2, 5.0, 2.0}}, true);
    const std::string stext = slurp(speedup);
    CHECK(stext.rfind("dataset,workers,median_ms,speedup\n", 0) == 0);
    CHECK(stext.find("ref-87.6MB,4,,3.75") != std::string::npos);
    CHECK(stext.find("ref-1.23GB,8,,7.77") != std::string::npos);
}

TEST_CASE("speedup_experiment reports 1.0 for the single-worker row") {
    const Dataset data = synth::make_blobs(2000, 2, 4, 0.5, 6.0, 37);
    SpeedupConfig config;
    config.K = 4;
    config.kt = 4;
    config.L = 500;
    config.worker_counts = {1};
    config.repeats = 2;
    const auto rows = speedup_experiment(data.view(), config);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].workers == 1);
    CHECK(rows[0].speedup == 1.0);

    SpeedupConfig bad = config;
    bad.worker_counts = {2, 4};
    CHECK_THROWS_AS(speedup_experiment(data.view(), bad), std::invalid_argument);
}

}  // TEST_SUITE
