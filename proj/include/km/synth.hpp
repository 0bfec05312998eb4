#pragma once

#include <cstdint>

#include "km/core.hpp"

namespace km::synth {

/// Gaussian blobs: `blobs` centers drawn uniformly in [-box, box]^dim, points
/// scattered around them with per-coordinate stddev `spread`. Blob b receives
/// a share of n proportional to size_skew^b (1.0 = equal sizes; smaller
/// values make the later blobs small). Fully determined by the seed.
Dataset make_blobs(std::size_t n, std::size_t dim, std::size_t blobs, double spread, double box,
                   std::uint64_t seed, double size_skew = 1.0);

/// Points drawn uniformly in [-box, box]^dim.
Dataset make_uniform(std::size_t n, std::size_t dim, double box, std::uint64_t seed);

/// Two-level cluster structure: `supers` centers uniform in [-box, box]^dim,
/// each with `children` clumps offset by child_offset * gaussian, points
/// scattered around clumps with stddev leaf_spread. size_skew shares n
/// geometrically across the supers*children leaves. Data with structure at
/// several scales, the texture real numeric datasets tend to have.
Dataset make_hier_blobs(std::size_t n, std::size_t dim, std::size_t supers, std::size_t children,
                        double box, double child_offset, double leaf_spread, std::uint64_t seed,
                        double size_skew = 1.0);

/// Nested (ultrametric) clusters: 2^levels leaf centers built by recursive
/// binary splitting, the level-l split offset along axis l%dim with magnitude
/// base_gap * decay^l. Points get gaussian noise of stddev `noise`. With fast
/// decay the optimal K-clustering is the greedy top-down refinement for every
/// K, while random seeding still falls into merge traps.
Dataset make_nested(std::size_t n, std::size_t dim, std::size_t levels, double base_gap,
                    double decay, double noise, std::uint64_t seed);

}  // namespace km::synth
