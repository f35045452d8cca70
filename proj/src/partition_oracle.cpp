#include "hdperc/partition_oracle.hpp"

#include "hdperc/errors.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace hdperc {

namespace {

constexpr double kTailLimit = 1e-6;

/// Generalized golden-ratio (R_d) additive recurrence directions.
std::vector<double> kroneckerDirections(int dim)
{
    double phi = 2.0;
    for (int it = 0; it < 64; ++it)
        phi = std::pow(1.0 + phi, 1.0 / (dim + 1));
    std::vector<double> alpha(static_cast<std::size_t>(dim));
    double g = 1.0;
    for (int i = 0; i < dim; ++i) {
        g /= phi;
        alpha[static_cast<std::size_t>(i)] = g;
    }
    return alpha;
}

struct Estimate
{
    double mean;
    double stdError;
};

/// Fraction of k-tuples of uniform points in [0, side]^2 that are pairwise >= 2r apart.
Estimate hardCoreFraction(int k, double side, double r, const OracleOptions& opt, std::mt19937_64& rng)
{
    const int dim = 2 * k;
    const auto alpha = kroneckerDirections(dim);
    const int shifts = std::max(2, opt.shifts);
    const std::uint64_t perShift = std::max<std::uint64_t>(1, opt.samplesPerN / static_cast<std::uint64_t>(shifts));
    const double d2 = 4.0 * r * r;

    std::vector<double> u(static_cast<std::size_t>(dim));
    std::vector<double> shift(static_cast<std::size_t>(dim));
    std::vector<double> frac(static_cast<std::size_t>(shifts));
    for (int s = 0; s < shifts; ++s) {
        for (auto& v : shift)
            v = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        std::uint64_t hits = 0;
        for (std::uint64_t n = 1; n <= perShift; ++n) {
            const double nd = static_cast<double>(n);
            for (int c = 0; c < dim; ++c) {
                const double t = shift[static_cast<std::size_t>(c)] + nd * alpha[static_cast<std::size_t>(c)];
                u[static_cast<std::size_t>(c)] = side * (t - std::floor(t));
            }
            bool ok = true;
            for (int a = 1; a < k && ok; ++a) {
                for (int b = 0; b < a; ++b) {
                    const double dx = u[2 * a] - u[2 * b];
                    const double dy = u[2 * a + 1] - u[2 * b + 1];
                    if (dx * dx + dy * dy < d2) {
                        ok = false;
                        break;
                    }
                }
            }
            hits += ok ? 1 : 0;
        }
        frac[static_cast<std::size_t>(s)] = static_cast<double>(hits) / static_cast<double>(perShift);
    }
    double mean = 0.0;
    for (double f : frac)
        mean += f;
    mean /= shifts;
    double var = 0.0;
    for (double f : frac)
        var += (f - mean) * (f - mean);
    var /= (shifts - 1);
    return {mean, std::sqrt(var / shifts)};
}

} // namespace

int packingBound(double boxSide, double r)
{
    const double bound = (boxSide + 2.0 * r) * (boxSide + 2.0 * r) / (std::numbers::pi * r * r);
    return static_cast<int>(std::floor(bound));
}

PartitionOracle estimatePartitionOracle(double boxSide, double r, int maxN, const OracleOptions& options)
{
    if (!(boxSide > 0.0) || !(r > 0.0) || maxN < 0)
        throw InvalidParams("partition oracle needs box side > 0, r > 0 and maxN >= 0");
    PartitionOracle o;
    o.boxSide = boxSide;
    o.r = r;
    o.maxN = maxN;
    o.packingBound = packingBound(boxSide, r);

    const double area = boxSide * boxSide;
    std::mt19937_64 rng(options.seed);
    double kFactorial = 1.0;
    double areaPow = 1.0;
    for (int k = 0; k <= maxN + 1; ++k) {
        if (k > 0) {
            kFactorial *= k;
            areaPow *= area;
        }
        Estimate e{1.0, 0.0};
        if (k > o.packingBound)
            e = {0.0, 0.0};
        else if (k >= 2)
            e = hardCoreFraction(k, boxSide, r, options, rng);
        const double scale = areaPow / kFactorial;
        if (k <= maxN) {
            o.values.push_back(scale * e.mean);
            o.stdErrors.push_back(scale * e.stdError);
        } else {
            o.nextValueUpper = scale * (e.mean + 3.0 * e.stdError);
        }
    }
    return o;
}

std::vector<double> exactSmallBoxDistribution(const PartitionOracle& oracle, double z)
{
    if (z < 0.0)
        throw InvalidParams("activity must be nonnegative");
    std::vector<double> w(oracle.values.size());
    double total = 0.0;
    double zk = 1.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        w[k] = zk * oracle.values[k];
        total += w[k];
        zk *= z;
    }

    // L_{k+1} <= L_k * area / (k+1), so the tail beyond maxN is bounded by a
    // finite sum starting from the L_{maxN+1} upper estimate.
    if (oracle.maxN < oracle.packingBound && oracle.nextValueUpper > 0.0) {
        const double area = oracle.boxSide * oracle.boxSide;
        double term = std::pow(z, oracle.maxN + 1) * oracle.nextValueUpper;
        double tail = 0.0;
        for (int k = oracle.maxN + 1; k <= oracle.packingBound; ++k) {
            tail += term;
            term *= z * area / (k + 1);
        }
        if (tail > kTailLimit * (total + tail)) {
            std::ostringstream os;
            os << "probability mass beyond N=" << oracle.maxN << " may reach " << tail / (total + tail)
               << " (limit 1e-6); raise maxN toward the packing bound " << oracle.packingBound;
            throw TruncationError(os.str());
        }
    }
    for (double& v : w)
        v /= total;
    return w;
}

} // namespace hdperc
