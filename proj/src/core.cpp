#include "km/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace km {

double PointsView::total_weight() const {
    if (weights_.empty()) return static_cast<double>(size());
    double sum = 0.0;
    for (double w : weights_) sum += w;
    return sum;
}

double ClusterSet::total_distortion() const {
    double sum = 0.0;
    for (double d : distortions) sum += d;
    return sum;
}

double ClusterSet::total_weight() const {
    double sum = 0.0;
    for (double w : weights) sum += w;
    return sum;
}

void ClusterSet::append_center(std::span<const double> coords) {
    if (coords.size() != dim) throw std::invalid_argument("center dimension mismatch");
    centers.insert(centers.end(), coords.begin(), coords.end());
    weights.push_back(0.0);
    distortions.push_back(0.0);
}

ClusterSet ClusterSet::from_centers(std::vector<double> centers, std::size_t dim) {
    if (dim == 0 || centers.empty() || centers.size() % dim != 0)
        throw std::invalid_argument("center buffer does not match dimension");
    ClusterSet cs;
    cs.dim = dim;
    cs.centers = std::move(centers);
    cs.weights.assign(cs.centers.size() / dim, 0.0);
    cs.distortions.assign(cs.weights.size(), 0.0);
    return cs;
}

void ClusterSet::canonicalize() {
    const std::size_t n = k();
    std::vector<std::size_t> order(n);
    for (std::size_t j = 0; j < n; ++j) order[j] = j;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto ca = center(a), cb = center(b);
        for (std::size_t t = 0; t < dim; ++t) {
            if (ca[t] != cb[t]) return ca[t] < cb[t];
        }
        if (weights[a] != weights[b]) return weights[a] < weights[b];
        return distortions[a] < distortions[b];
    });
    ClusterSet sorted;
    sorted.dim = dim;
    sorted.centers.reserve(centers.size());
    sorted.weights.reserve(n);
    sorted.distortions.reserve(n);
    for (std::size_t j : order) {
        const auto c = center(j);
        sorted.centers.insert(sorted.centers.end(), c.begin(), c.end());
        sorted.weights.push_back(weights[j]);
        sorted.distortions.push_back(distortions[j]);
    }
    *this = std::move(sorted);
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("squared_distance: dimension mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        sum += diff * diff;
    }
    return sum;
}

std::size_t nearest_center(std::span<const double> p, const ClusterSet& clusters) {
    if (clusters.k() == 0) throw std::invalid_argument("nearest_center: empty cluster set");
    std::size_t best = 0;
    double best_dist = squared_distance(p, clusters.center(0));
    for (std::size_t j = 1; j < clusters.k(); ++j) {
        const double d = squared_distance(p, clusters.center(j));
        if (d < best_dist) {
            best_dist = d;
            best = j;
        }
    }
    return best;
}

double total_distortion(PointsView points, const ClusterSet& clusters) {
    if (points.size() == 0) return 0.0;
    if (clusters.k() == 0) throw std::invalid_argument("total_distortion: empty cluster set");
    if (points.dim() != clusters.dim)
        throw std::invalid_argument("total_distortion: dimension mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto p = points.point(i);
        sum += points.weight(i) * squared_distance(p, clusters.center(nearest_center(p, clusters)));
    }
    return sum;
}

}  // namespace km
