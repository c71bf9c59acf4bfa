#include <doctest.h>

#include <cmath>
#include <vector>

#include "ganpred/distribution.hpp"
#include "ganpred/errors.hpp"
#include "ganpred/rng.hpp"

using namespace ganpred;

TEST_CASE("estimate_density: degenerate samples land in a single bin") {
    std::vector<double> samples(50, 3.25);
    const auto dist = estimate_density(samples, 8);
    dist.validate();
    std::size_t occupied = 0;
    for (double m : dist.mass) {
        if (m > 0.0) ++occupied;
    }
    CHECK(occupied == 1);
    CHECK(*std::max_element(dist.mass.begin(), dist.mass.end()) == doctest::Approx(1.0));
}

TEST_CASE("estimate_density: uniform samples spread evenly") {
    // 99% multinomial bound for p=0.1, n=100 is ~0.077; the documented
    // tolerance 0.1 covers it.
    Rng rng(31337);
    std::vector<double> samples(100);
    for (double& s : samples) s = rng.uniform();
    const auto dist = estimate_density(samples, 10);
    for (double m : dist.mass) {
        CHECK(std::abs(m - 0.1) <= 0.1);
    }
}

TEST_CASE("estimate_density: mass sums to one for random inputs") {
    Rng rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<double> samples(2 + rng.index(200));
        for (double& s : samples) s = rng.normal() * rng.uniform(0.01, 10.0);
        const auto dist = estimate_density(samples, 2 + rng.index(100));
        double total = 0.0;
        for (double m : dist.mass) total += m;
        CHECK(std::abs(total - 1.0) < 1e-9);
    }
}

TEST_CASE("estimate_density: errors") {
    std::vector<double> one{1.0};
    CHECK_THROWS_AS(estimate_density(one, 8), std::invalid_argument);
    std::vector<double> two{1.0, 2.0};
    CHECK_THROWS_AS(estimate_density(two, 1), std::invalid_argument);
    std::vector<double> bad{1.0, std::nan("")};
    CHECK_THROWS_AS(estimate_density(bad, 4), NumericError);
}

TEST_CASE("estimate_density: fixed range clamps outliers into boundary bins") {
    std::vector<double> samples{-5.0, 0.5, 0.5, 7.0};
    const auto dist = estimate_density(samples, 4, FixedRange{0.0, 1.0});
    dist.validate();
    CHECK(dist.bin_edges.front() == 0.0);
    CHECK(dist.bin_edges.back() == 1.0);
    CHECK(dist.mass.front() == doctest::Approx(0.25));
    CHECK(dist.mass.back() == doctest::Approx(0.25));
    CHECK(dist.mass[2] == doctest::Approx(0.5));
}

TEST_CASE("point_estimate: mode, ties, mean and median") {
    EmpiricalDistribution dist;
    dist.bin_edges = {0.0, 1.0, 2.0, 3.0};
    dist.sample_count = 10;

    dist.mass = {0.0, 1.0, 0.0};
    CHECK(point_estimate(dist, PointMethod::kMode) == doctest::Approx(1.5));

    // Symmetric: mean == median == center midpoint.
    dist.mass = {0.25, 0.5, 0.25};
    CHECK(point_estimate(dist, PointMethod::kMean) == doctest::Approx(1.5));
    CHECK(point_estimate(dist, PointMethod::kMedian) == doctest::Approx(1.5));

    // Tie resolves to the lower bin.
    EmpiricalDistribution tie;
    tie.bin_edges = {0.0, 1.0, 2.0};
    tie.mass = {0.5, 0.5};
    tie.sample_count = 2;
    CHECK(point_estimate(tie, PointMethod::kMode) == doctest::Approx(0.5));
}

TEST_CASE("property: mode stays inside the edge range") {
    Rng rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<double> samples(2 + rng.index(64));
        for (double& s : samples) s = rng.uniform(-3.0, 3.0);
        const auto dist = estimate_density(samples, 2 + rng.index(32));
        const double mode = point_estimate(dist, PointMethod::kMode);
        CHECK(mode >= dist.bin_edges.front());
        CHECK(mode <= dist.bin_edges.back());
    }
}
