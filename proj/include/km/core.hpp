#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace km {

/// Raised when the requested cluster count cannot be realized on the data,
/// e.g. more clusters than distinct points or a segment too small to compress.
class InfeasibleKError : public std::runtime_error {
public:
    explicit InfeasibleKError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised by the CSV loader with the 1-based row/column of the offending cell.
class CsvError : public std::runtime_error {
public:
    CsvError(const std::string& msg, std::size_t row, std::size_t col)
        : std::runtime_error(msg), row_(row), col_(col) {}
    std::size_t row() const { return row_; }
    std::size_t col() const { return col_; }

private:
    std::size_t row_;
    std::size_t col_;
};

/// Stopping rules for the Lloyd loop: iteration cap and the threshold on the
/// summed Euclidean displacement of all centers in one iteration.
struct TerminationConfig {
    int max_iterations = 20;
    double epsilon = 1e-7;
};

/// Non-owning view over a run of points stored row-major. An empty weight
/// span means every point has weight 1 (raw data objects).
class PointsView {
public:
    PointsView() = default;
    PointsView(std::span<const double> coords, std::span<const double> weights, std::size_t dim)
        : coords_(coords), weights_(weights), dim_(dim) {}

    std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
    std::size_t dim() const { return dim_; }
    bool weighted() const { return !weights_.empty(); }

    std::span<const double> point(std::size_t i) const { return coords_.subspan(i * dim_, dim_); }
    double weight(std::size_t i) const { return weights_.empty() ? 1.0 : weights_[i]; }

    std::span<const double> coords() const { return coords_; }
    std::span<const double> weights() const { return weights_; }

    PointsView slice(std::size_t first, std::size_t count) const {
        return PointsView(coords_.subspan(first * dim_, count * dim_),
                          weights_.empty() ? weights_ : weights_.subspan(first, count), dim_);
    }

    double total_weight() const;

private:
    std::span<const double> coords_;
    std::span<const double> weights_;
    std::size_t dim_ = 0;
};

/// Owning collection of unit-weight points with a fixed dimension.
class Dataset {
public:
    Dataset() = default;
    explicit Dataset(std::size_t dim) : dim_(dim) {}
    Dataset(std::vector<double> coords, std::size_t dim) : coords_(std::move(coords)), dim_(dim) {
        if (dim_ == 0 || coords_.size() % dim_ != 0)
            throw std::invalid_argument("dataset coordinate buffer does not match dimension");
    }

    std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
    std::size_t dim() const { return dim_; }
    std::span<const double> point(std::size_t i) const {
        return std::span<const double>(coords_).subspan(i * dim_, dim_);
    }

    void append(std::span<const double> p) {
        if (p.size() != dim_) throw std::invalid_argument("point dimension mismatch");
        coords_.insert(coords_.end(), p.begin(), p.end());
    }

    std::vector<double>& raw() { return coords_; }
    const std::vector<double>& raw() const { return coords_; }

    PointsView view() const { return PointsView(coords_, {}, dim_); }

private:
    std::vector<double> coords_;
    std::size_t dim_ = 0;
};

/// Owning collection of weighted points; a weight counts the raw objects a
/// point stands for, so a raw object is the weight-1 special case.
class WeightedSet {
public:
    WeightedSet() = default;
    explicit WeightedSet(std::size_t dim) : dim_(dim) {}

    std::size_t size() const { return weights_.size(); }
    std::size_t dim() const { return dim_; }

    void append(std::span<const double> coords, double weight) {
        if (coords.size() != dim_) throw std::invalid_argument("point dimension mismatch");
        if (!(weight > 0.0)) throw std::invalid_argument("point weight must be positive");
        coords_.insert(coords_.end(), coords.begin(), coords.end());
        weights_.push_back(weight);
    }

    std::span<const double> point(std::size_t i) const {
        return std::span<const double>(coords_).subspan(i * dim_, dim_);
    }
    double weight(std::size_t i) const { return weights_[i]; }

    PointsView view() const { return PointsView(coords_, weights_, dim_); }

private:
    std::vector<double> coords_;
    std::vector<double> weights_;
    std::size_t dim_ = 0;
};

/// Read-only view of one cluster: center position, total assigned weight and
/// the weighted squared-distance sum of its members.
struct Centroid {
    std::span<const double> coords;
    double weight;
    double distortion;
};

/// K centroids stored struct-of-arrays. Weight and distortion entries are
/// meaningful after a completed assignment pass.
struct ClusterSet {
    std::vector<double> centers;      // k * dim, row-major
    std::vector<double> weights;      // k
    std::vector<double> distortions;  // k
    std::size_t dim = 0;

    std::size_t k() const { return weights.size(); }

    std::span<const double> center(std::size_t j) const {
        return std::span<const double>(centers).subspan(j * dim, dim);
    }
    std::span<double> center_mut(std::size_t j) {
        return std::span<double>(centers).subspan(j * dim, dim);
    }
    Centroid centroid(std::size_t j) const { return {center(j), weights[j], distortions[j]}; }

    double total_distortion() const;
    double total_weight() const;

    /// Appends a centroid positioned at `coords` with zero weight/distortion.
    void append_center(std::span<const double> coords);

    /// Lexicographic sort of centroids by coordinates (weight, distortion as
    /// tie-breakers); the canonical order of every finished run.
    void canonicalize();

    static ClusterSet from_centers(std::vector<double> centers, std::size_t dim);
};

/// One Lloyd-loop invocation: the cluster count it ran at and the iterations
/// it used.
struct LearnCall {
    int kc;
    int iterations;
};

/// What a finished run reports: the benchmark currency.
struct RunReport {
    std::string algorithm_tag;
    double final_distortion = 0.0;
    std::vector<LearnCall> learn_calls;
    double wall_ms = 0.0;
};

struct RunResult {
    ClusterSet clusters;
    RunReport report;
};

/// Exact squared Euclidean distance, accumulated in index order.
double squared_distance(std::span<const double> a, std::span<const double> b);

/// Index of the closest center; ties broken by lowest index.
std::size_t nearest_center(std::span<const double> p, const ClusterSet& clusters);

/// Sum over points of weight * squared distance to the nearest center.
/// Empty point sets yield 0; an empty cluster set is an error.
double total_distortion(PointsView points, const ClusterSet& clusters);

}  // namespace km
