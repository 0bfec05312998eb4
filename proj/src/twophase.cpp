#include "km/twophase.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <mutex>

#include "km/ikm.hpp"
#include "km/lloyd.hpp"

namespace km {

SegmentPlan plan_segments(std::size_t n, std::size_t L, std::size_t kt) {
    if (kt < 1) throw std::invalid_argument("plan_segments: kt must be >= 1");
    if (L < kt)
        throw std::invalid_argument("plan_segments: segment length " + std::to_string(L) +
                                    " is smaller than the per-segment cluster count " +
                                    std::to_string(kt));
    if (n < kt)
        throw InfeasibleKError("plan_segments: fewer points (" + std::to_string(n) +
                               ") than per-segment clusters (" + std::to_string(kt) + ")");
    L = std::min(L, n);
    const std::size_t full = n / L;
    const std::size_t tail = n - full * L;
    std::size_t segments = full + (tail > 0 ? 1 : 0);
    if (tail > 0 && tail < kt) segments = full;  // short tail rides with the previous segment
    return {L, segments};
}

MemorySegmentSource::MemorySegmentSource(PointsView data, std::size_t L, std::size_t kt)
    : data_(data), plan_(plan_segments(data.size(), L, kt)) {}

std::optional<Segment> MemorySegmentSource::next() {
    if (next_index_ >= plan_.total_segments) return std::nullopt;
    const std::size_t first = next_index_ * plan_.segment_length;
    const std::size_t count = next_index_ + 1 == plan_.total_segments
                                  ? data_.size() - first
                                  : plan_.segment_length;
    Segment seg;
    seg.index = next_index_++;
    seg.points = data_.slice(first, count);
    read_ += count;
    return seg;
}

CsvSegmentSource::CsvSegmentSource(const std::string& path, CsvOptions options, std::size_t L,
                                   std::size_t kt)
    : reader_(path, std::move(options)), segment_length_(L), kt_(kt) {
    if (kt < 1) throw std::invalid_argument("segment source: kt must be >= 1");
    if (L < kt)
        throw std::invalid_argument("segment source: segment length smaller than kt");
    ahead_ = read_block();
}

std::size_t CsvSegmentSource::dim() const { return reader_.dim(); }

std::vector<double> CsvSegmentSource::read_block() {
    std::vector<double> block;
    if (exhausted_) return block;
    const std::size_t dim = reader_.dim();
    block.reserve(segment_length_ * dim);
    for (std::size_t i = 0; i < segment_length_; ++i) {
        const auto row = reader_.next();
        if (!row) {
            exhausted_ = true;
            break;
        }
        block.insert(block.end(), row->begin(), row->end());
    }
    return block;
}

std::optional<Segment> CsvSegmentSource::next() {
    if (ahead_.empty()) return std::nullopt;
    std::vector<double> block = std::move(ahead_);
    ahead_ = read_block();
    const std::size_t dim = reader_.dim();
    // only the final block can be short; merge it rather than emit a segment
    // too small to compress
    if (!ahead_.empty() && ahead_.size() / dim < kt_) {
        block.insert(block.end(), ahead_.begin(), ahead_.end());
        ahead_.clear();
    }
    Segment seg;
    seg.index = next_index_++;
    seg.owned = std::move(block);
    seg.points = PointsView(seg.owned, {}, dim);
    read_ += seg.points.size();
    return seg;
}

IntermediateResult phase1_map(const Segment& segment, std::size_t kt,
                              const TerminationConfig& config, const TwoPhaseOptions& options) {
    try {
        const RunResult run =
            options.phase1 == Phase1Learner::ikm
                ? run_ikm(segment.points, kt, config, 1)
                : run_km(segment.points, kt, config, options.km_seed + segment.index, 1);
        IntermediateResult result;
        result.segment_index = segment.index;
        result.learn_calls = run.report.learn_calls;
        WeightedSet centers(run.clusters.dim);
        for (std::size_t j = 0; j < run.clusters.k(); ++j) {
            if (run.clusters.weights[j] > 0.0)
                centers.append(run.clusters.center(j), run.clusters.weights[j]);
        }
        result.weighted_centers = std::move(centers);
        return result;
    } catch (const InfeasibleKError& e) {
        throw SegmentError(segment.index, true, e.what());
    } catch (const std::invalid_argument& e) {
        throw SegmentError(segment.index, false, e.what());
    }
}

ReduceOutcome phase2_reduce(std::vector<IntermediateResult> intermediates, std::size_t K,
                            const TerminationConfig& config) {
    if (intermediates.empty()) throw std::invalid_argument("phase2_reduce: no intermediates");
    std::sort(intermediates.begin(), intermediates.end(),
              [](const IntermediateResult& a, const IntermediateResult& b) {
                  return a.segment_index < b.segment_index;
              });
    const std::size_t dim = intermediates.front().weighted_centers.dim();
    WeightedSet pooled(dim);
    for (const IntermediateResult& inter : intermediates) {
        const WeightedSet& wc = inter.weighted_centers;
        for (std::size_t j = 0; j < wc.size(); ++j) pooled.append(wc.point(j), wc.weight(j));
    }
    if (pooled.size() < K)
        throw InfeasibleKError("phase2_reduce: only " + std::to_string(pooled.size()) +
                               " pooled centers for K=" + std::to_string(K) +
                               "; use a larger kt or fewer segments");
    RunResult run = run_ikm(pooled.view(), K, config, 1);
    return {std::move(run.clusters), std::move(run.report.learn_calls)};
}

namespace {

RunResult assemble(std::vector<IntermediateResult> intermediates, std::size_t K,
                   const TerminationConfig& config, const char* tag,
                   std::chrono::steady_clock::time_point start) {
    std::vector<LearnCall> calls;
    for (const IntermediateResult& inter : intermediates)
        calls.insert(calls.end(), inter.learn_calls.begin(), inter.learn_calls.end());
    ReduceOutcome reduced = phase2_reduce(std::move(intermediates), K, config);
    calls.insert(calls.end(), reduced.learn_calls.begin(), reduced.learn_calls.end());

    RunResult result;
    result.clusters = std::move(reduced.clusters);
    result.report.algorithm_tag = tag;
    result.report.learn_calls = std::move(calls);
    result.report.final_distortion = result.clusters.total_distortion();
    result.report.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    return result;
}

}  // namespace

RunResult run_2pk_sequential(SegmentSource& source, std::size_t K, std::size_t kt,
                             const TerminationConfig& config, const TwoPhaseOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<IntermediateResult> intermediates;
    // one segment of raw points alive at a time
    while (auto seg = source.next()) intermediates.push_back(phase1_map(*seg, kt, config, options));
    if (intermediates.empty())
        throw std::invalid_argument("run_2pk_sequential: source produced no segments");
    return assemble(std::move(intermediates), K, config, "2pk", start);
}

RunResult run_par2pk(SegmentSource& source, std::size_t K, std::size_t kt, int workers,
                     const TerminationConfig& config, const TwoPhaseOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    if (workers < 1) throw std::invalid_argument("run_par2pk: workers must be >= 1");

    std::mutex mu;
    std::vector<IntermediateResult> results;
    std::vector<bool> done;
    std::exception_ptr error;
    std::size_t error_index = 0;
    bool abort = false;

#pragma omp parallel num_threads(workers)
    {
        for (;;) {
            std::optional<Segment> seg;
            {
                std::lock_guard<std::mutex> lock(mu);
                if (!abort) seg = source.next();
            }
            if (!seg) break;
            try {
                IntermediateResult inter = phase1_map(*seg, kt, config, options);
                std::lock_guard<std::mutex> lock(mu);
                if (seg->index >= results.size()) {
                    results.resize(seg->index + 1);
                    done.resize(seg->index + 1, false);
                }
                results[seg->index] = std::move(inter);
                done[seg->index] = true;
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!error || seg->index < error_index) {
                    error = std::current_exception();
                    error_index = seg->index;
                }
                abort = true;
            }
        }
    }  // implicit barrier: every mapper has finished before the reduce

    if (error) std::rethrow_exception(error);
    if (results.empty()) throw std::invalid_argument("run_par2pk: source produced no segments");
    for (std::size_t i = 0; i < done.size(); ++i) {
        if (!done[i])
            throw std::runtime_error("run_par2pk: segment " + std::to_string(i) +
                                     " produced no result");
    }
    return assemble(std::move(results), K, config, "par2pk", start);
}

RunResult run_2pk_sequential(PointsView data, std::size_t K, std::size_t kt, std::size_t L,
                             const TerminationConfig& config, const TwoPhaseOptions& options) {
    MemorySegmentSource source(data, L, kt);
    return run_2pk_sequential(source, K, kt, config, options);
}

RunResult run_par2pk(PointsView data, std::size_t K, std::size_t kt, std::size_t L, int workers,
                     const TerminationConfig& config, const TwoPhaseOptions& options) {
    MemorySegmentSource source(data, L, kt);
    return run_par2pk(source, K, kt, workers, config, options);
}

}  // namespace km
