#include "km/dkm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace km {
namespace {

std::vector<std::size_t> counts_from_labels(std::span<const std::uint32_t> labels,
                                            std::size_t k) {
    std::vector<std::size_t> counts(k, 0);
    for (const std::uint32_t j : labels) counts[j] += 1;
    return counts;
}

// Farthest member of `cluster` by weighted squared distance, ties by lowest
// point index. Requires at least one member.
std::size_t farthest_member(const ClusterSet& clusters, std::size_t cluster, PointsView points,
                            std::span<const std::uint32_t> labels) {
    const auto center = clusters.center(cluster);
    std::size_t far_i = points.size();
    double far_val = -1.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (labels[i] != cluster) continue;
        const double val = points.weight(i) * squared_distance(points.point(i), center);
        if (val > far_val) {
            far_val = val;
            far_i = i;
        }
    }
    return far_i;
}

}  // namespace

DkmMargin compute_margin(std::size_t K) {
    if (K < 1) throw std::invalid_argument("compute_margin: K must be >= 1");
    if (K < 7) return {K};
    const double v = std::min(std::max(3.0, static_cast<double>(K) * 0.10), 5.0);
    return {static_cast<std::size_t>(std::floor(v + 0.5))};
}

SplitPair split_cluster(const ClusterSet& clusters, std::size_t cluster, PointsView points,
                        std::span<const std::uint32_t> labels) {
    if (cluster >= clusters.k()) throw std::invalid_argument("split_cluster: bad cluster index");
    const auto counts = counts_from_labels(labels, clusters.k());
    if (counts[cluster] < 2)
        throw std::invalid_argument("split_cluster: cluster has fewer than two members");
    const auto center = clusters.center(cluster);
    const auto far = points.point(farthest_member(clusters, cluster, points, labels));
    return {std::vector<double>(center.begin(), center.end()),
            std::vector<double>(far.begin(), far.end())};
}

RunResult run_dkm(PointsView points, std::size_t K, const TerminationConfig& config, int threads) {
    const auto start = std::chrono::steady_clock::now();
    if (K < 1) throw std::invalid_argument("run_dkm: K must be >= 1");
    if (K > points.size())
        throw InfeasibleKError("run_dkm: K (" + std::to_string(K) +
                               ") exceeds the number of points (" +
                               std::to_string(points.size()) + ")");

    const std::size_t margin = compute_margin(K).k_t;
    if (margin == K) {
        // doubling bypassed entirely; the run is IKM, trace and all
        RunResult result = run_ikm(points, K, config, threads);
        result.report.algorithm_tag = "dkm";
        result.report.wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();
        return result;
    }

    RunResult result;
    result.report.algorithm_tag = "dkm";

    LearnOutcome outcome = kmeans_learn(points, single_mean_center(points), config, threads);
    result.report.learn_calls.push_back({1, outcome.iterations_used});

    const std::size_t target = K - margin;

    // doubling: split every splittable cluster until 2*K_c would overshoot
    while (2 * outcome.clusters.k() <= target) {
        const std::size_t k = outcome.clusters.k();
        const auto counts = counts_from_labels(outcome.labels, k);
        ClusterSet grown = outcome.clusters;
        std::size_t splits = 0;
        for (std::size_t j = 0; j < k; ++j) {
            if (counts[j] < 2) continue;  // singletons are not split
            grown.append_center(
                points.point(farthest_member(outcome.clusters, j, points, outcome.labels)));
            ++splits;
        }
        if (splits == 0)
            throw InfeasibleKError(
                "run_dkm: no splittable cluster left; K exceeds the number of distinct points");
        outcome = kmeans_learn(points, grown, config, threads);
        result.report.learn_calls.push_back(
            {static_cast<int>(outcome.clusters.k()), outcome.iterations_used});
    }

    // partial split: land exactly on K - k_t
    if (outcome.clusters.k() < target) {
        const std::size_t k = outcome.clusters.k();
        const std::size_t wanted = target - k;
        const auto counts = counts_from_labels(outcome.labels, k);
        std::vector<std::size_t> splittable;
        for (std::size_t j = 0; j < k; ++j)
            if (counts[j] >= 2) splittable.push_back(j);
        if (splittable.empty())
            throw InfeasibleKError(
                "run_dkm: no splittable cluster left; K exceeds the number of distinct points");
        std::stable_sort(splittable.begin(), splittable.end(), [&](std::size_t a, std::size_t b) {
            return outcome.clusters.distortions[a] > outcome.clusters.distortions[b];
        });
        splittable.resize(std::min(wanted, splittable.size()));
        std::sort(splittable.begin(), splittable.end());
        ClusterSet grown = outcome.clusters;
        for (const std::size_t j : splittable)
            grown.append_center(
                points.point(farthest_member(outcome.clusters, j, points, outcome.labels)));
        outcome = kmeans_learn(points, grown, config, threads);
        result.report.learn_calls.push_back(
            {static_cast<int>(outcome.clusters.k()), outcome.iterations_used});
    }

    // stepping: grow one cluster at a time, exactly as IKM does
    while (outcome.clusters.k() < K) {
        ClusterSet grown = insert_into_largest(outcome.clusters, points, outcome.labels);
        outcome = kmeans_learn(points, grown, config, threads);
        result.report.learn_calls.push_back(
            {static_cast<int>(outcome.clusters.k()), outcome.iterations_used});
    }

    result.clusters = std::move(outcome.clusters);
    result.clusters.canonicalize();
    result.report.final_distortion = result.clusters.total_distortion();
    result.report.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    return result;
}

}  // namespace km
