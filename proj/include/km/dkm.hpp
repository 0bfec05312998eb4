#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "km/core.hpp"
#include "km/ikm.hpp"

namespace km {

/// How far below K the doubling phase stops before one-at-a-time stepping
/// takes over. Equal to K itself below 7 (which bypasses doubling entirely),
/// otherwise clamped to [3, 5].
struct DkmMargin {
    std::size_t k_t;
};

/// K if K < 7, else min(max(3, K*10%), 5) with the fractional band
/// (30 < K < 50) rounded half up.
DkmMargin compute_margin(std::size_t K);

/// The two centers a cluster splits into: the original center and the member
/// farthest from it by weighted squared distance (ties by lowest point
/// index). The next learning pass separates them.
struct SplitPair {
    std::vector<double> kept;
    std::vector<double> inserted;
};

/// Splits cluster `cluster` of `clusters`. Requires at least two members
/// (callers skip singletons). A zero-distortion cluster yields two identical
/// centers; downstream repair resolves or rejects that.
SplitPair split_cluster(const ClusterSet& clusters, std::size_t cluster, PointsView points,
                        std::span<const std::uint32_t> labels);

/// Divisive K-means: double the cluster count by splitting every cluster
/// while 2*K_c <= K - k_t, then a partial split up to exactly K - k_t, then
/// IKM-style stepping to K. For K < 7 the margin equals K, doubling is
/// bypassed, and the run is the IKM run.
RunResult run_dkm(PointsView points, std::size_t K, const TerminationConfig& config,
                  int threads = 1);

}  // namespace km
