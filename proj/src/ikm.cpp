#include "km/ikm.hpp"

#include <algorithm>
#include <chrono>

namespace km {

ClusterSet single_mean_center(PointsView points) {
    const std::size_t n = points.size();
    const std::size_t dim = points.dim();
    if (n == 0) throw std::invalid_argument("single_mean_center: empty point set");
    std::vector<double> center(dim, 0.0);
    if (n == 1) {
        const auto p = points.point(0);
        std::copy(p.begin(), p.end(), center.begin());
        return ClusterSet::from_centers(std::move(center), dim);
    }
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = points.weight(i);
        const double* p = points.point(i).data();
        for (std::size_t t = 0; t < dim; ++t) center[t] += w * p[t];
        total += w;
    }
    for (double& c : center) c /= total;
    return ClusterSet::from_centers(std::move(center), dim);
}

ClusterSet insert_into_largest(const ClusterSet& clusters, PointsView points,
                               std::span<const std::uint32_t> labels) {
    const std::size_t k = clusters.k();
    if (k == 0) throw std::invalid_argument("insert_into_largest: empty cluster set");
    if (labels.size() < points.size())
        throw std::invalid_argument("insert_into_largest: label buffer too small");

    std::size_t target = 0;
    for (std::size_t j = 1; j < k; ++j) {
        if (clusters.distortions[j] > clusters.distortions[target]) target = j;
    }
    if (!(clusters.distortions[target] > 0.0))
        throw InfeasibleKError(
            "requested cluster count exceeds the number of distinct points: every cluster "
            "has zero distortion, nowhere to insert");

    const auto center = clusters.center(target);
    std::size_t far_i = points.size();
    double far_val = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (labels[i] != target) continue;
        const double val = points.weight(i) * squared_distance(points.point(i), center);
        if (val > far_val) {
            far_val = val;
            far_i = i;
        }
    }
    ClusterSet grown = clusters;
    grown.append_center(points.point(far_i));
    return grown;
}

RunResult run_ikm(PointsView points, std::size_t K, const TerminationConfig& config, int threads) {
    const auto start = std::chrono::steady_clock::now();
    if (K < 1) throw std::invalid_argument("run_ikm: K must be >= 1");
    if (K > points.size())
        throw InfeasibleKError("run_ikm: K (" + std::to_string(K) +
                               ") exceeds the number of points (" +
                               std::to_string(points.size()) + ")");

    RunResult result;
    result.report.algorithm_tag = "ikm";

    LearnOutcome outcome = kmeans_learn(points, single_mean_center(points), config, threads);
    result.report.learn_calls.push_back({1, outcome.iterations_used});
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
