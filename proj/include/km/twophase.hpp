#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "km/core.hpp"
#include "km/ingest.hpp"

namespace km {

/// How the data splits into segments: S = ceil(n/L), with a short tail
/// (fewer than kt rows) merged into the previous segment.
struct SegmentPlan {
    std::size_t segment_length;
    std::size_t total_segments;
};

/// Throws std::invalid_argument for L < kt and InfeasibleKError for n < kt.
/// L larger than n is clamped to a single segment.
SegmentPlan plan_segments(std::size_t n, std::size_t L, std::size_t kt);

/// One unit of mapper work. `owned` backs the view for streaming sources and
/// stays empty when the view aliases caller-owned memory; move keeps the view
/// valid either way.
struct Segment {
    std::size_t index = 0;
    PointsView points;
    std::vector<double> owned;

    Segment() = default;
    Segment(Segment&&) = default;
    Segment& operator=(Segment&&) = default;
    Segment(const Segment&) = delete;
    Segment& operator=(const Segment&) = delete;
};

/// Yields consecutive segments of the data in index order. next() must be
/// called under external serialization; everything else is read-only.
class SegmentSource {
public:
    virtual ~SegmentSource() = default;
    virtual std::size_t dim() const = 0;
    virtual std::optional<Segment> next() = 0;
    /// Data objects handed out so far: the single-scan counter.
    virtual std::size_t objects_read() const = 0;
};

/// Slices an in-memory point set into segments without copying.
class MemorySegmentSource final : public SegmentSource {
public:
    MemorySegmentSource(PointsView data, std::size_t L, std::size_t kt);

    std::size_t dim() const override { return data_.dim(); }
    std::optional<Segment> next() override;
    std::size_t objects_read() const override { return read_; }
    const SegmentPlan& plan() const { return plan_; }

private:
    PointsView data_;
    SegmentPlan plan_;
    std::size_t next_index_ = 0;
    std::size_t read_ = 0;
};

/// Streams segments of L parsed rows straight from a CSV file; memory stays
/// bounded by one segment of lookahead, never the whole file.
class CsvSegmentSource final : public SegmentSource {
public:
    CsvSegmentSource(const std::string& path, CsvOptions options, std::size_t L, std::size_t kt);

    std::size_t dim() const override;
    std::optional<Segment> next() override;
    std::size_t objects_read() const override { return read_; }

private:
    std::vector<double> read_block();

    CsvRowReader reader_;
    std::size_t segment_length_;
    std::size_t kt_;
    std::size_t next_index_ = 0;
    std::size_t read_ = 0;
    std::vector<double> ahead_;
    bool exhausted_ = false;
};

/// Mapper failure wrapper: which segment failed and whether the cause was an
/// infeasible cluster count.
class SegmentError : public std::runtime_error {
public:
    SegmentError(std::size_t segment_index, bool infeasible, const std::string& msg)
        : std::runtime_error("segment " + std::to_string(segment_index) + ": " + msg),
          segment_index_(segment_index),
          infeasible_(infeasible) {}
    std::size_t segment_index() const { return segment_index_; }
    bool infeasible() const { return infeasible_; }

private:
    std::size_t segment_index_;
    bool infeasible_;
};

/// A segment compressed to at most kt weighted centers; weights sum to the
/// segment's total weight.
struct IntermediateResult {
    std::size_t segment_index = 0;
    WeightedSet weighted_centers;
    std::vector<LearnCall> learn_calls;
};

enum class Phase1Learner { ikm, km };

struct TwoPhaseOptions {
    Phase1Learner phase1 = Phase1Learner::ikm;
    std::uint64_t km_seed = 0;  // per-segment seed = km_seed + segment_index
};

/// Compresses one segment to kt weighted centers with the configured phase-1
/// learner (IKM by default). Errors carry the segment index.
IntermediateResult phase1_map(const Segment& segment, std::size_t kt,
                              const TerminationConfig& config,
                              const TwoPhaseOptions& options = {});

struct ReduceOutcome {
    ClusterSet clusters;
    std::vector<LearnCall> learn_calls;
};

/// Pools the weighted centers in segment-index order and clusters them to K
/// with weighted IKM. Fewer pooled centers than K is an error (larger kt or
/// fewer segments needed).
ReduceOutcome phase2_reduce(std::vector<IntermediateResult> intermediates, std::size_t K,
                            const TerminationConfig& config);

/// Sequential two-phase run: streams segments in order through phase1_map
/// (one segment of raw points alive at a time) and reduces once at the end.
/// Each data object is read from the source exactly once.
RunResult run_2pk_sequential(SegmentSource& source, std::size_t K, std::size_t kt,
                             const TerminationConfig& config, const TwoPhaseOptions& options = {});

/// Parallel two-phase run: `workers` OpenMP threads pull segments from the
/// source under a lock and map them concurrently (at most `workers` segments
/// in flight, each owned by one worker). Results are keyed by segment index,
/// so the reduce input — and therefore the returned ClusterSet — is bit-for-
/// bit identical to the sequential run no matter the completion order. A
/// mapper failure aborts the job and reports its segment index.
RunResult run_par2pk(SegmentSource& source, std::size_t K, std::size_t kt, int workers,
                     const TerminationConfig& config, const TwoPhaseOptions& options = {});

// In-memory convenience wrappers.
RunResult run_2pk_sequential(PointsView data, std::size_t K, std::size_t kt, std::size_t L,
                             const TerminationConfig& config, const TwoPhaseOptions& options = {});
RunResult run_par2pk(PointsView data, std::size_t K, std::size_t kt, std::size_t L, int workers,
                     const TerminationConfig& config, const TwoPhaseOptions& options = {});

}  // namespace km
