#include "km/lloyd.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "km/rng.hpp"

namespace km {
namespace {

constexpr std::size_t kAssignChunk = 4096;

void zero_stats(AssignStats& s, std::size_t k, std::size_t dim) {
    s.weight.assign(k, 0.0);
    s.distortion.assign(k, 0.0);
    s.coord_sum.assign(k * dim, 0.0);
    s.count.assign(k, 0);
    s.solo.assign(k, 0);
}

// Assigns points [first, last) and accumulates into `s` in point order.
// Early exit in the distance loop cannot change the winner or its fully
// accumulated distance, so results match the naive scan bit for bit.
void assign_range(PointsView points, const ClusterSet& clusters, std::size_t first,
                  std::size_t last, std::span<std::uint32_t> labels, AssignStats& s) {
    const std::size_t k = clusters.k();
    const std::size_t dim = clusters.dim;
    const double* centers = clusters.centers.data();
    for (std::size_t i = first; i < last; ++i) {
        const double* p = points.point(i).data();
        std::size_t best = 0;
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < k; ++j) {
            const double* c = centers + j * dim;
            double d = 0.0;
            for (std::size_t t = 0; t < dim; ++t) {
                const double diff = p[t] - c[t];
                d += diff * diff;
                if (d > best_dist) break;
            }
            if (d < best_dist) {
                best_dist = d;
                best = j;
            }
        }
        labels[i] = static_cast<std::uint32_t>(best);
        const double w = points.weight(i);
        s.weight[best] += w;
        s.distortion[best] += w * best_dist;
        double* sums = s.coord_sum.data() + best * dim;
        for (std::size_t t = 0; t < dim; ++t) sums[t] += w * p[t];
        s.count[best] += 1;
        s.solo[best] = i;
    }
}

void combine_stats(AssignStats& into, const AssignStats& part, std::size_t k, std::size_t dim) {
    for (std::size_t j = 0; j < k; ++j) {
        into.weight[j] += part.weight[j];
        into.distortion[j] += part.distortion[j];
        if (part.count[j] > 0) {
            into.count[j] += part.count[j];
            into.solo[j] = part.solo[j];
        }
    }
    for (std::size_t t = 0; t < k * dim; ++t) into.coord_sum[t] += part.coord_sum[t];
}

}  // namespace

AssignStats assign_step(PointsView points, const ClusterSet& clusters,
                        std::span<std::uint32_t> labels_out, int threads) {
    const std::size_t n = points.size();
    const std::size_t k = clusters.k();
    const std::size_t dim = clusters.dim;
    if (k == 0) throw std::invalid_argument("assign_step: empty cluster set");
    if (points.dim() != dim) throw std::invalid_argument("assign_step: dimension mismatch");
    if (labels_out.size() < n) throw std::invalid_argument("assign_step: label buffer too small");

    AssignStats stats;
    zero_stats(stats, k, dim);
    if (threads <= 1 || n <= kAssignChunk) {
        assign_range(points, clusters, 0, n, labels_out, stats);
        return stats;
    }

    const std::size_t chunks = (n + kAssignChunk - 1) / kAssignChunk;
    std::vector<AssignStats> partial(chunks);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (long long c = 0; c < static_cast<long long>(chunks); ++c) {
        const std::size_t first = static_cast<std::size_t>(c) * kAssignChunk;
        const std::size_t last = std::min(first + kAssignChunk, n);
        zero_stats(partial[c], k, dim);
        assign_range(points, clusters, first, last, labels_out, partial[c]);
    }
    // canonical combine in chunk order: independent of thread count
    for (std::size_t c = 0; c < chunks; ++c) combine_stats(stats, partial[c], k, dim);
    return stats;
}

UpdateResult update_step(PointsView points, std::span<const std::uint32_t> labels, std::size_t k,
                         std::size_t dim) {
    const std::size_t n = points.size();
    if (labels.size() < n) throw std::invalid_argument("update_step: label buffer too small");
    std::vector<double> sums(k * dim, 0.0);
    std::vector<double> weights(k, 0.0);
    std::vector<std::size_t> counts(k, 0);
    std::vector<std::size_t> solo(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = labels[i];
        if (j >= k) throw std::invalid_argument("update_step: label out of range");
        const double w = points.weight(i);
        const double* p = points.point(i).data();
        for (std::size_t t = 0; t < dim; ++t) sums[j * dim + t] += w * p[t];
        weights[j] += w;
        counts[j] += 1;
        solo[j] = i;
    }
    UpdateResult result;
    result.centers.assign(k * dim, 0.0);
    result.empty.assign(k, false);
    for (std::size_t j = 0; j < k; ++j) {
        if (counts[j] == 0) {
            result.empty[j] = true;
        } else if (counts[j] == 1) {
            const auto p = points.point(solo[j]);
            std::copy(p.begin(), p.end(), result.centers.begin() + j * dim);
        } else {
            for (std::size_t t = 0; t < dim; ++t)
                result.centers[j * dim + t] = sums[j * dim + t] / weights[j];
        }
    }
    return result;
}

bool repair_empty_clusters(ClusterSet& clusters, PointsView points,
                           std::span<const std::uint32_t> labels) {
    const std::size_t n = points.size();
    const std::size_t k = clusters.k();
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) counts[labels[i]] += 1;

    bool any_empty = false;
    for (std::size_t j = 0; j < k; ++j) any_empty |= counts[j] == 0;
    if (!any_empty) return false;
    if (n < k)
        throw InfeasibleKError("cluster count exceeds the number of points (" +
                               std::to_string(k) + " > " + std::to_string(n) + ")");

    std::vector<bool> used(n, false);
    for (std::size_t j = 0; j < k; ++j) {
        if (counts[j] != 0) continue;
        std::size_t best_i = n;
        double best_val = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (used[i]) continue;
            const double val =
                points.weight(i) * squared_distance(points.point(i), clusters.center(labels[i]));
            if (val > best_val) {
                best_val = val;
                best_i = i;
            }
        }
        if (best_i == n)
            throw InfeasibleKError(
                "cluster count exceeds the number of distinct points: no off-center point "
                "left to reseed an empty cluster");
        const auto p = points.point(best_i);
        std::copy(p.begin(), p.end(), clusters.center_mut(j).begin());
        used[best_i] = true;
    }
    return true;
}

namespace {

// One assignment pass, repairing and re-assigning until no cluster is empty.
// Each repair pass reseeds every empty cluster on a distinct off-center
// point, so the empty count strictly shrinks; k passes bound the loop.
AssignStats assign_until_full(PointsView points, ClusterSet& clusters,
                              std::span<std::uint32_t> labels, int threads) {
    const std::size_t k = clusters.k();
    for (std::size_t attempt = 0; attempt <= k; ++attempt) {
        AssignStats stats = assign_step(points, clusters, labels, threads);
        bool any_empty = false;
        for (std::size_t j = 0; j < k; ++j) any_empty |= stats.count[j] == 0;
        if (!any_empty) return stats;
        repair_empty_clusters(clusters, points, labels);
    }
    throw InfeasibleKError("empty clusters persisted through repair");
}

void store_stats(ClusterSet& clusters, const AssignStats& stats) {
    clusters.weights = stats.weight;
    clusters.distortions = stats.distortion;
}

std::vector<double> means_from_stats(PointsView points, const AssignStats& stats, std::size_t k,
                                     std::size_t dim) {
    std::vector<double> centers(k * dim);
    for (std::size_t j = 0; j < k; ++j) {
        if (stats.count[j] == 1) {
            // exact: the weighted mean of one member is the member itself
            const auto p = points.point(stats.solo[j]);
            std::copy(p.begin(), p.end(), centers.begin() + j * dim);
        } else {
            for (std::size_t t = 0; t < dim; ++t)
                centers[j * dim + t] = stats.coord_sum[j * dim + t] / stats.weight[j];
        }
    }
    return centers;
}

}  // namespace

LearnOutcome kmeans_learn(PointsView points, const ClusterSet& initial,
                          const TerminationConfig& config, int threads) {
    const std::size_t n = points.size();
    const std::size_t k = initial.k();
    const std::size_t dim = initial.dim;
    if (n == 0) throw std::invalid_argument("kmeans_learn: empty point set");
    if (k == 0) throw std::invalid_argument("kmeans_learn: empty initial cluster set");
    if (points.dim() != dim) throw std::invalid_argument("kmeans_learn: dimension mismatch");
    if (config.max_iterations < 1)
        throw std::invalid_argument("kmeans_learn: max_iterations must be >= 1");

    LearnOutcome out;
    out.clusters = initial;
    out.labels.assign(n, 0);
    std::vector<std::uint32_t> prev_labels(n);
    bool have_prev = false;

    for (int iter = 1; iter <= config.max_iterations; ++iter) {
        AssignStats stats = assign_until_full(points, out.clusters, out.labels, threads);
        store_stats(out.clusters, stats);
        out.distortion_trace.push_back(stats.total_distortion());
        out.iterations_used = iter;

        if (have_prev && out.labels == prev_labels) {
            // centers already equal the means of these labels; a fixed point
            out.converged_by = ConvergedBy::no_movement;
            return out;
        }

        std::vector<double> means = means_from_stats(points, stats, k, dim);
        double displacement = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            displacement += std::sqrt(squared_distance(
                std::span<const double>(means).subspan(j * dim, dim), out.clusters.center(j)));
        }
        out.clusters.centers = std::move(means);

        if (displacement < config.epsilon) {
            // refresh stats against the final centers (not a counted iteration)
            AssignStats fin = assign_until_full(points, out.clusters, out.labels, threads);
            store_stats(out.clusters, fin);
            out.converged_by = ConvergedBy::displacement;
            return out;
        }
        std::swap(prev_labels, out.labels);
        have_prev = true;
    }

    AssignStats fin = assign_until_full(points, out.clusters, out.labels, threads);
    store_stats(out.clusters, fin);
    out.converged_by = ConvergedBy::max_iterations;
    return out;
}

RunResult run_km(PointsView points, std::size_t K, const TerminationConfig& config,
                 std::uint64_t seed, int threads) {
    const auto start = std::chrono::steady_clock::now();
    const std::size_t n = points.size();
    const std::size_t dim = points.dim();
    if (K < 1) throw std::invalid_argument("run_km: K must be >= 1");
    if (K > n)
        throw InfeasibleKError("run_km: K (" + std::to_string(K) +
                               ") exceeds the number of points (" + std::to_string(n) + ")");

    // partial Fisher-Yates: K distinct indices, uniform over all K-subsets
    Rng rng(seed);
    std::vector<std::uint32_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = static_cast<std::uint32_t>(i);
    for (std::size_t i = 0; i < K; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(idx[i], idx[j]);
    }
    std::vector<double> centers(K * dim);
    for (std::size_t i = 0; i < K; ++i) {
        const auto p = points.point(idx[i]);
        std::copy(p.begin(), p.end(), centers.begin() + i * dim);
    }

    LearnOutcome outcome =
        kmeans_learn(points, ClusterSet::from_centers(std::move(centers), dim), config, threads);

    RunResult result;
    result.report.algorithm_tag = "km";
    result.report.learn_calls.push_back(
        {static_cast<int>(K), outcome.iterations_used});
    result.clusters = std::move(outcome.clusters);
    result.clusters.canonicalize();
    result.report.final_distortion = result.clusters.total_distortion();
    result.report.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    return result;
}

}  // namespace km
