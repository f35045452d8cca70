#pragma once

#include "hdperc/params.hpp"

#include <cstdint>
#include <vector>

namespace hdperc {

/// Estimates of the hard-core configuration integrals L_k (volume of admissible
/// k-point configurations in a square box, divided by k!) for k = 0..maxN.
struct PartitionOracle
{
    double boxSide = 0.0;
    double r = 0.0;
    int maxN = 0;
    /// floor((side + 2r)^2 / (pi r^2)): no admissible configuration has more points.
    int packingBound = 0;
    std::vector<double> values;
    std::vector<double> stdErrors;
    /// Upper estimate (mean + 3 SE) of L_{maxN+1}; zero when maxN >= packingBound.
    double nextValueUpper = 0.0;
};

struct OracleOptions
{
    std::uint64_t samplesPerN = 10'000'000;
    /// Independent random shifts of the low-discrepancy point set; spread gives the error bar.
    int shifts = 16;
    std::uint64_t seed = 0x5eed;
};

int packingBound(double boxSide, double r);

/// Randomized quasi-Monte Carlo integration of the hard-core indicator over box^k.
PartitionOracle estimatePartitionOracle(double boxSide, double r, int maxN, const OracleOptions& options = {});

/// P(N = k) = z^k L_k / sum_j z^j L_j for k = 0..maxN.
/// Throws TruncationError if the mass beyond maxN may exceed 1e-6.
std::vector<double> exactSmallBoxDistribution(const PartitionOracle& oracle, double z);

} // namespace hdperc
