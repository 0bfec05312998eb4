#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "km/core.hpp"

namespace km {

enum class ConvergedBy { displacement, max_iterations, no_movement };

/// Result of one Lloyd loop: final clusters with consistent per-cluster
/// weight/distortion, the final assignment, and the per-iteration distortion
/// trace (non-increasing).
struct LearnOutcome {
    ClusterSet clusters;
    std::vector<std::uint32_t> labels;
    int iterations_used = 0;
    ConvergedBy converged_by = ConvergedBy::max_iterations;
    std::vector<double> distortion_trace;
};

/// Per-cluster accumulations from one assignment pass.
struct AssignStats {
    std::vector<double> weight;       // k: summed point weights
    std::vector<double> distortion;   // k: summed weight * squared distance
    std::vector<double> coord_sum;    // k*dim: weighted coordinate sums
    std::vector<std::size_t> count;   // k: assigned point count
    std::vector<std::size_t> solo;    // k: the member index while count == 1

    double total_distortion() const {
        double sum = 0.0;
        for (double d : distortion) sum += d;
        return sum;
    }
    double total_weight() const {
        double sum = 0.0;
        for (double w : weight) sum += w;
        return sum;
    }
};

/// Labels every point with its nearest center and accumulates per-cluster
/// weight, distortion and coordinate sums in one pass.
///
/// threads <= 1 accumulates in plain point order. threads > 1 runs the OpenMP
/// kernel: fixed 4096-point chunks accumulated independently and combined in
/// chunk order, so results depend only on the chunking, never on the thread
/// count or schedule.
AssignStats assign_step(PointsView points, const ClusterSet& clusters,
                        std::span<std::uint32_t> labels_out, int threads = 1);

struct UpdateResult {
    std::vector<double> centers;  // k*dim
    std::vector<bool> empty;      // k: clusters with no members, flagged for repair
};

/// Weighted mean of each cluster's members; a single-member cluster takes its
/// member's coordinates exactly. Empty clusters keep zeroed coordinates and
/// are flagged; callers must repair before using them.
UpdateResult update_step(PointsView points, std::span<const std::uint32_t> labels, std::size_t k,
                         std::size_t dim);

/// Moves each empty cluster's center onto the worst-fit point (largest
/// weighted squared distance to its assigned center, ties by lowest index);
/// a point seeds at most one repair per pass. Returns false when nothing was
/// empty. Throws InfeasibleKError when no usable point remains.
bool repair_empty_clusters(ClusterSet& clusters, PointsView points,
                           std::span<const std::uint32_t> labels);

/// The Lloyd loop: alternate assignment and mean update until the summed
/// center displacement drops below epsilon, the assignment stops changing, or
/// the iteration cap is hit. Empty clusters are repaired on the spot so k
/// never shrinks. The returned cluster stats are always consistent with the
/// returned centers.
LearnOutcome kmeans_learn(PointsView points, const ClusterSet& initial,
                          const TerminationConfig& config, int threads = 1);

/// Plain K-means: one Lloyd loop from K distinct data points chosen uniformly
/// with the seeded generator. The randomized baseline the incremental
/// variants are measured against.
RunResult run_km(PointsView points, std::size_t K, const TerminationConfig& config,
                 std::uint64_t seed, int threads = 1);

}  // namespace km
