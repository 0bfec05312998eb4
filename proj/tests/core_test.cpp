#include <doctest.h>

#include "km/core.hpp"
#include "km/rng.hpp"
#include "test_util.hpp"

using namespace km;

TEST_SUITE("core") {

TEST_CASE("squared_distance basics") {
    CHECK(squared_distance(std::vector<double>{0, 0}, std::vector<double>{0, 0}) == 0.0);
    CHECK(squared_distance(std::vector<double>{0, 0}, std::vector<double>{3, 4}) == 25.0);
    CHECK(squared_distance(std::vector<double>{1, 1, 1}, std::vector<double>{2, 3, 4}) == 14.0);
    CHECK_THROWS_AS(squared_distance(std::vector<double>{1}, std::vector<double>{1, 2}),
                    std::invalid_argument);
}

TEST_CASE("squared_distance is symmetric") {
    Rng rng(41);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> a(3), b(3);
        for (auto& v : a) v = rng.uniform(-10, 10);
        for (auto& v : b) v = rng.uniform(-10, 10);
        CHECK(squared_distance(a, b) == squared_distance(b, a));
    }
}

TEST_CASE("nearest_center picks minimum with lowest-index ties") {
    auto cs = kmtest::centers({{0, 0}, {5, 5}});
    CHECK(nearest_center(std::vector<double>{0, 0}, cs) == 0);

    auto line = kmtest::centers({{0, 0}, {5, 0}});
    CHECK(nearest_center(std::vector<double>{2.5, 0}, line) == 0);  // equidistant
    CHECK(nearest_center(std::vector<double>{4, 0}, line) == 1);

    ClusterSet empty;
    empty.dim = 2;
    CHECK_THROWS_AS(nearest_center(std::vector<double>{0, 0}, empty), std::invalid_argument);
}

TEST_CASE("nearest_center unchanged by appending a strictly farther center") {
    Rng rng(42);
    for (int rep = 0; rep < 30; ++rep) {
        std::vector<double> p{rng.uniform(-5, 5), rng.uniform(-5, 5)};
        auto cs = kmtest::centers({{rng.uniform(-5, 5), rng.uniform(-5, 5)},
                                   {rng.uniform(-5, 5), rng.uniform(-5, 5)}});
        const std::size_t before = nearest_center(p, cs);
        std::vector<double> far{p[0] + 100.0, p[1] + 100.0};
        cs.append_center(far);
        CHECK(nearest_center(p, cs) == before);
    }
}

TEST_CASE("total_distortion examples") {
    auto data = kmtest::dataset({{0, 0}, {0, 1}});
    CHECK(total_distortion(data.view(), kmtest::centers({{0, 0.5}})) == 0.5);

    auto exact = kmtest::dataset({{1, 2}, {3, 4}});
    CHECK(total_distortion(exact.view(), kmtest::centers({{1, 2}, {3, 4}})) == 0.0);

    auto wset = kmtest::weighted({{0.0}, {4.0}}, {3.0, 1.0});
    CHECK(total_distortion(wset.view(), kmtest::centers({{1.0}})) == 12.0);

    Dataset none(2);
    CHECK(total_distortion(none.view(), kmtest::centers({{0, 0}})) == 0.0);

    ClusterSet empty;
    empty.dim = 2;
    CHECK_THROWS_AS(total_distortion(data.view(), empty), std::invalid_argument);
}

TEST_CASE("doubling every weight doubles total_distortion exactly") {
    Rng rng(7);
    std::vector<std::vector<double>> rows;
    std::vector<double> w1, w2;
    for (int i = 0; i < 20; ++i) {
        rows.push_back({rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)});
        w1.push_back(static_cast<double>(1 + (i % 4)));
        w2.push_back(2.0 * w1.back());
    }
    auto cs = kmtest::centers({{0, 0, 0}, {1, 1, 1}, {-2, 0, 2}});
    const double base = total_distortion(kmtest::weighted(rows, w1).view(), cs);
    CHECK(total_distortion(kmtest::weighted(rows, w2).view(), cs) == 2.0 * base);
}

TEST_CASE("single-center distortion is minimized at the weighted mean") {
    auto wset = kmtest::weighted({{0.0, 1.0}, {2.0, -1.0}, {5.0, 3.0}}, {1.0, 2.0, 3.0});
    std::vector<double> mean(2, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < wset.size(); ++i) {
        for (std::size_t t = 0; t < 2; ++t) mean[t] += wset.weight(i) * wset.point(i)[t];
        total += wset.weight(i);
    }
    for (auto& m : mean) m /= total;
    const double at_mean = total_distortion(wset.view(), kmtest::centers({{mean[0], mean[1]}}));
    for (const double h : {1e-3, -1e-3}) {
        for (std::size_t t = 0; t < 2; ++t) {
            auto moved = mean;
            moved[t] += h;
            CHECK(total_distortion(wset.view(), kmtest::centers({{moved[0], moved[1]}})) >
                  at_mean);
        }
    }
}

TEST_CASE("canonicalize sorts centroids lexicographically") {
    auto cs = kmtest::centers({{3, 0}, {1, 5}, {1, 2}});
    cs.weights = {1, 2, 3};
    cs.distortions = {0.1, 0.2, 0.3};
    cs.canonicalize();
    CHECK(cs.center(0)[0] == 1.0);
    CHECK(cs.center(0)[1] == 2.0);
    CHECK(cs.center(1)[1] == 5.0);
    CHECK(cs.center(2)[0] == 3.0);
    CHECK(cs.weights == std::vector<double>{3, 2, 1});
}

}  // TEST_SUITE
