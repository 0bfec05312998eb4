#pragma once

#include <cstdint>
#include <span>

#include "km/core.hpp"
#include "km/lloyd.hpp"

namespace km {

/// The single-center seed every incremental run starts from: the weighted
/// mean of all points.
ClusterSet single_mean_center(PointsView points);

/// Grows the cluster set by one: picks the cluster with the largest
/// distortion (ties by lowest index) and appends a new center at its member
/// point farthest from the center by weighted squared distance (ties by
/// lowest point index). Existing centers are untouched.
///
/// This farthest-member placement is the reference insertion heuristic; it is
/// deterministic, parameter-free, and the inserted cluster captures at least
/// that member on the next assignment.
///
/// Requires up-to-date per-cluster distortions and the matching labels.
/// Throws InfeasibleKError when every cluster has zero distortion (no
/// off-center member exists anywhere, i.e. the requested cluster count
/// exceeds the number of distinct points).
ClusterSet insert_into_largest(const ClusterSet& clusters, PointsView points,
                               std::span<const std::uint32_t> labels);

/// Incremental K-means: learn at K_c = 1 (the mean), then repeat
/// {insert_into_largest, learn} until K_c = K. Deterministic: no randomness
/// anywhere, so repeated runs coincide exactly.
RunResult run_ikm(PointsView points, std::size_t K, const TerminationConfig& config,
                  int threads = 1);

}  // namespace km
