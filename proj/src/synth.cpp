#include "km/synth.hpp"

#include <algorithm>
#include <cmath>

#include "km/rng.hpp"

namespace km::synth {

Dataset make_blobs(std::size_t n, std::size_t dim, std::size_t blobs, double spread, double box,
                   std::uint64_t seed, double size_skew) {
    if (n == 0 || dim == 0 || blobs == 0) throw std::invalid_argument("make_blobs: empty shape");
    if (!(size_skew > 0.0)) throw std::invalid_argument("make_blobs: size_skew must be positive");
    Rng rng(seed);
    std::vector<double> centers(blobs * dim);
    for (double& c : centers) c = rng.uniform(-box, box);

    if (n < blobs) throw std::invalid_argument("make_blobs: need at least one point per blob");

    // geometric shares, apportioned by largest remainder (ties by index)
    std::vector<std::size_t> counts(blobs, 0);
    {
        std::vector<double> share(blobs);
        double total = 0.0;
        for (std::size_t b = 0; b < blobs; ++b) total += share[b] = std::pow(size_skew, b);
        std::size_t assigned = 0;
        std::vector<std::pair<double, std::size_t>> rest(blobs);
        for (std::size_t b = 0; b < blobs; ++b) {
            const double exact = static_cast<double>(n) * share[b] / total;
            counts[b] = static_cast<std::size_t>(exact);
            rest[b] = {exact - static_cast<double>(counts[b]), b};
            assigned += counts[b];
        }
        std::sort(rest.begin(), rest.end(), [](const auto& a, const auto& b) {
            return a.first != b.first ? a.first > b.first : a.second < b.second;
        });
        for (std::size_t i = 0; assigned < n; ++i, ++assigned) counts[rest[i].second] += 1;
    }

    std::vector<double> coords;
    coords.reserve(n * dim);
    for (std::size_t b = 0; b < blobs; ++b) {
        for (std::size_t i = 0; i < counts[b]; ++i) {
            for (std::size_t t = 0; t < dim; ++t)
                coords.push_back(centers[b * dim + t] + spread * rng.gaussian());
        }
    }
    return Dataset(std::move(coords), dim);
}

Dataset make_uniform(std::size_t n, std::size_t dim, double box, std::uint64_t seed) {
    if (n == 0 || dim == 0) throw std::invalid_argument("make_uniform: empty shape");
    Rng rng(seed);
    std::vector<double> coords(n * dim);
    for (double& c : coords) c = rng.uniform(-box, box);
    return Dataset(std::move(coords), dim);
}

Dataset make_nested(std::size_t n, std::size_t dim, std::size_t levels, double base_gap,
                    double decay, double noise, std::uint64_t seed) {
    if (n == 0 || dim == 0) throw std::invalid_argument("make_nested: empty shape");
    const std::size_t leaves = std::size_t{1} << levels;
    if (n < leaves) throw std::invalid_argument("make_nested: need one point per leaf");
    Rng rng(seed);

    std::vector<std::vector<double>> centers{std::vector<double>(dim, 0.0)};
    for (std::size_t l = 0; l < levels; ++l) {
        const double off = base_gap * std::pow(decay, static_cast<double>(l));
        const std::size_t axis = l % dim;
        std::vector<std::vector<double>> next;
        next.reserve(centers.size() * 2);
        for (const auto& c : centers) {
            auto lo = c, hi = c;
            lo[axis] -= off / 2.0;
            hi[axis] += off / 2.0;
            next.push_back(std::move(lo));
            next.push_back(std::move(hi));
        }
        centers = std::move(next);
    }

    std::vector<std::size_t> counts(leaves, n / leaves);
    for (std::size_t b = 0; b < n % leaves; ++b) counts[b] += 1;

    std::vector<double> coords;
    coords.reserve(n * dim);
    for (std::size_t b = 0; b < leaves; ++b) {
        for (std::size_t i = 0; i < counts[b]; ++i) {
            for (std::size_t t = 0; t < dim; ++t)
                coords.push_back(centers[b][t] + noise * rng.gaussian());
        }
    }
    return Dataset(std::move(coords), dim);
}

Dataset make_hier_blobs(std::size_t n, std::size_t dim, std::size_t supers, std::size_t children,
                        double box, double child_offset, double leaf_spread, std::uint64_t seed,
                        double size_skew) {
    if (n == 0 || dim == 0 || supers == 0 || children == 0)
        throw std::invalid_argument("make_hier_blobs: empty shape");
    if (!(size_skew > 0.0))
        throw std::invalid_argument("make_hier_blobs: size_skew must be positive");
    const std::size_t leaves = supers * children;
    if (n < leaves) throw std::invalid_argument("make_hier_blobs: need one point per leaf");
    Rng rng(seed);

    std::vector<double> leaf_centers(leaves * dim);
    for (std::size_t s = 0; s < supers; ++s) {
        std::vector<double> super_center(dim);
        for (double& c : super_center) c = rng.uniform(-box, box);
        for (std::size_t c = 0; c < children; ++c) {
            double* leaf = leaf_centers.data() + (s * children + c) * dim;
            for (std::size_t t = 0; t < dim; ++t)
                leaf[t] = super_center[t] + child_offset * rng.gaussian();
        }
    }

    std::vector<std::size_t> counts(leaves, 0);
    {
        std::vector<double> share(leaves);
        double total = 0.0;
        for (std::size_t b = 0; b < leaves; ++b) total += share[b] = std::pow(size_skew, b);
        std::size_t assigned = 0;
        std::vector<std::pair<double, std::size_t>> rest(leaves);
        for (std::size_t b = 0; b < leaves; ++b) {
            const double exact = static_cast<double>(n) * share[b] / total;
            counts[b] = static_cast<std::size_t>(exact);
            rest[b] = {exact - static_cast<double>(counts[b]), b};
            assigned += counts[b];
        }
        std::sort(rest.begin(), rest.end(), [](const auto& a, const auto& b) {
            return a.first != b.first ? a.first > b.first : a.second < b.second;
        });
        for (std::size_t i = 0; assigned < n; ++i, ++assigned) counts[rest[i].second] += 1;
    }

    std::vector<double> coords;
    coords.reserve(n * dim);
    for (std::size_t b = 0; b < leaves; ++b) {
        const double* leaf = leaf_centers.data() + b * dim;
        for (std::size_t i = 0; i < counts[b]; ++i) {
            for (std::size_t t = 0; t < dim; ++t)
                coords.push_back(leaf[t] + leaf_spread * rng.gaussian());
        }
    }
    return Dataset(std::move(coords), dim);
}

}  // namespace km::synth
