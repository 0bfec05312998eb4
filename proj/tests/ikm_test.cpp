#include <doctest.h>

#include "km/ikm.hpp"
#include "km/synth.hpp"
#include "test_util.hpp"

using namespace km;

TEST_SUITE("ikm") {

TEST_CASE("insert_into_largest seeds the farthest member of the worst cluster") {
    // one cluster over the square corners, centered between them: every
    // corner ties at 25.25, lowest index wins
    auto data = kmtest::dataset({{0, 0}, {0, 1}, {10, 0}, {10, 1}});
    auto cs = kmtest::centers({{5, 0.5}});
    std::vector<std::uint32_t> labels(4);
    const AssignStats stats = assign_step(data.view(), cs, labels);
    cs.weights = stats.weight;
    cs.distortions = stats.distortion;
    const ClusterSet grown = insert_into_largest(cs, data.view(), labels);
    CHECK(grown.k() == 2);
    CHECK(grown.center(0)[0] == 5.0);  // existing center untouched
    CHECK(grown.center(1)[0] == 0.0);
    CHECK(grown.center(1)[1] == 0.0);
}

TEST_CASE("insert_into_largest targets the max-distortion cluster, ties low") {
    auto data = kmtest::dataset({{0.0}, {1.0}, {10.0}, {16.0}});
    const std::vector<std::uint32_t> labels{0, 0, 1, 1};
    auto cs = kmtest::centers({{0.5}, {13.0}});

    cs.distortions = {0.5, 9.0};
    cs.weights = {2, 2};
    ClusterSet grown = insert_into_largest(cs, data.view(), labels);
    CHECK(grown.center(2)[0] == 10.0);  // farthest member of cluster 1, tie at 9 -> index 2

    cs.distortions = {2.0, 2.0};
    grown = insert_into_largest(cs, data.view(), labels);
    // tie -> cluster 0; its two members tie at 0.25, lowest point index wins
    CHECK(grown.center(2)[0] == 0.0);
}

TEST_CASE("insert_into_largest rejects all-singleton cluster sets") {
    auto data = kmtest::dataset({{0.0}, {5.0}});
    auto cs = kmtest::centers({{0.0}, {5.0}});
    const std::vector<std::uint32_t> labels{0, 1};
    cs.distortions = {0.0, 0.0};
    cs.weights = {1, 1};
    CHECK_THROWS_AS(insert_into_largest(cs, data.view(), labels), InfeasibleKError);
}

TEST_CASE("run_ikm K=1 returns the weighted mean") {
    auto wset = kmtest::weighted({{0.0, 2.0}, {4.0, 6.0}}, {3.0, 1.0});
    const RunResult res = run_ikm(wset.view(), 1, TerminationConfig{});
    CHECK(res.clusters.center(0)[0] == 1.0);
    CHECK(res.clusters.center(0)[1] == 3.0);
    CHECK(res.report.learn_calls.size() == 1);
    CHECK(res.report.learn_calls[0].kc == 1);
}

TEST_CASE("run_ikm finds the symmetric optimum on the square corners") {
    auto data = kmtest::dataset({{0, 0}, {0, 1}, {10, 0}, {10, 1}});
    const RunResult res = run_ikm(data.view(), 2, TerminationConfig{});
    CHECK(res.report.final_distortion == 1.0);
    CHECK(res.clusters.center(0)[0] == 0.0);
    CHECK(res.clusters.center(0)[1] == 0.5);
    CHECK(res.clusters.center(1)[0] == 10.0);
    std::vector<int> kcs;
    for (const auto& call : res.report.learn_calls) kcs.push_back(call.kc);
    CHECK(kcs == std::vector<int>{1, 2});
}

TEST_CASE("run_ikm learn calls step K_c from 1 to K") {
    const Dataset data = synth::make_blobs(80, 3, 6, 0.5, 8.0, 31);
    const RunResult res = run_ikm(data.view(), 6, TerminationConfig{});
    REQUIRE(res.report.learn_calls.size() == 6);
    for (int k = 1; k <= 6; ++k) CHECK(res.report.learn_calls[k - 1].kc == k);
}

TEST_CASE("run_ikm final distortion is non-increasing in K") {
    const Dataset data = synth::make_uniform(60, 2, 5.0, 77);
    double prev = -1.0;
    for (std::size_t k = 1; k <= 8; ++k) {
        const double d = run_ikm(data.view(), k, TerminationConfig{}).report.final_distortion;
        if (prev >= 0.0) CHECK(d <= prev + 1e-9);
        prev = d;
    }
}

TEST_CASE("run_ikm is deterministic") {
    const Dataset data = synth::make_blobs(90, 2, 5, 0.6, 7.0, 12);
    const RunResult a = run_ikm(data.view(), 5, TerminationConfig{});
    const RunResult b = run_ikm(data.view(), 5, TerminationConfig{});
    CHECK(a.clusters.centers == b.clusters.centers);
    CHECK(a.clusters.weights == b.clusters.weights);
    CHECK(a.report.final_distortion == b.report.final_distortion);
}

TEST_CASE("reported distortion agrees with re-scoring against the input") {
    const Dataset data = synth::make_blobs(120, 3, 6, 0.5, 7.0, 33);
    const RunResult res = run_ikm(data.view(), 6, TerminationConfig{});
    CHECK(res.report.final_distortion ==
          doctest::Approx(total_distortion(data.view(), res.clusters)).epsilon(1e-12));
}

TEST_CASE("run_ikm matches the exhaustive oracle on a small instance") {
    // 3^10 labelings enumerated by the oracle
    const Dataset data = synth::make_blobs(10, 2, 3, 0.4, 6.0, 2);
    const double oracle = kmtest::brute_force_optimum(data.view(), 3);
    const double got = run_ikm(data.view(), 3, TerminationConfig{}).report.final_distortion;
    CHECK(got >= oracle - 1e-9);
    CHECK(got <= oracle + 1e-9);
}

TEST_CASE("run_ikm never beats the oracle") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const Dataset data = synth::make_uniform(9, 2, 4.0, seed);
        const double oracle = kmtest::brute_force_optimum(data.view(), 2);
        CHECK(run_ikm(data.view(), 2, TerminationConfig{}).report.final_distortion >=
              oracle - 1e-9);
    }
}

TEST_CASE("run_ikm rejects infeasible K") {
    auto data = kmtest::dataset({{0.0}, {1.0}, {2.0}});
    CHECK_THROWS_AS(run_ikm(data.view(), 4, TerminationConfig{}), InfeasibleKError);
    // three clusters over two distinct values
    auto dup = kmtest::dataset({{0.0}, {0.0}, {1.0}});
    CHECK_THROWS_AS(run_ikm(dup.view(), 3, TerminationConfig{}), InfeasibleKError);
}

}  // TEST_SUITE
