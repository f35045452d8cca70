#include "hdperc/errors.hpp"
#include "hdperc/partition_oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace hdperc;

namespace {

// P(|X - Y| < d) for X, Y uniform in a square of side s, valid for d <= s.
double closePairProbability(double s, double d)
{
    const double pi = std::numbers::pi;
    return (pi * d * d * s * s - 8.0 / 3.0 * d * d * d * s + 0.5 * d * d * d * d) / (s * s * s * s);
}

} // namespace

TEST_CASE("packing bound")
{
    CHECK(packingBound(1.5, 0.5) == 7);
    CHECK(packingBound(1.0, 0.5) == 5);
}

TEST_CASE("oracle low orders are exact or analytic")
{
    OracleOptions o;
    o.samplesPerN = 400000;
    const auto oracle = estimatePartitionOracle(1.5, 0.5, 3, o);
    REQUIRE(oracle.values.size() == 4);
    CHECK(oracle.values[0] == 1.0);
    CHECK(oracle.values[1] == doctest::Approx(2.25));
    const double A = 2.25;
    const double L2 = A * A / 2.0 * (1.0 - closePairProbability(1.5, 1.0));
    CHECK(std::abs(oracle.values[2] - L2) < 4.0 * oracle.stdErrors[2] + 1e-4);
    CHECK(oracle.stdErrors[2] < 1e-3);
}

TEST_CASE("distribution normalizes and truncation is detected")
{
    OracleOptions o;
    o.samplesPerN = 100000;
    const auto full = estimatePartitionOracle(1.5, 0.5, 7, o);
    const auto p = exactSmallBoxDistribution(full, 1.0);
    double s = 0;
    for (double v : p)
        s += v;
    CHECK(s == doctest::Approx(1.0));
    CHECK(p[0] == doctest::Approx(1.0 / (1.0 + 2.25 + full.values[2] + full.values[3] + full.values[4] +
                                           full.values[5] + full.values[6] + full.values[7])));

    const auto cut = estimatePartitionOracle(1.5, 0.5, 1, o);
    CHECK_THROWS_AS(exactSmallBoxDistribution(cut, 2.0), TruncationError);
    CHECK_THROWS_AS(exactSmallBoxDistribution(cut, -1.0), InvalidParams);
}
