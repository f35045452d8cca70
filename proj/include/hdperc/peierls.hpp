#pragma once

#include "hdperc/contour.hpp"
#include "hdperc/geometry.hpp"
#include "hdperc/params.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hdperc {

/// Constants of the contour-shift construction.
///
/// alpha = 2pi / nStar is the largest such angle strictly below delta / (delta + 2r);
/// c = alpha / (2pi (J + 1)) = 1 / (nStar (J + 1)); H = 5 sqrt(2pi) r.
struct PeierlsConstants
{
    static constexpr std::int64_t J = 486;

    std::int64_t nStar = 0;
    double alpha = 0.0;
    double c = 0.0;
    double H = 0.0;

    /// M = ceil(cK), computed in integers.
    std::int64_t insertionCount(std::size_t K) const;
    /// ceil(alpha K / 2pi): normal angles guaranteed inside the best interval.
    std::int64_t pigeonholeCount(std::size_t K) const;
};

PeierlsConstants computeConstants(const ModelParams& params);

struct ArcNormal
{
    Point midpoint;
    double angle = 0.0; //!< [0, 2pi), from the generating center through the midpoint
};

std::vector<ArcNormal> outwardNormals(const Contour& contour);

struct ShiftPlan
{
    double intervalStart = 0.0; //!< v; the interval is [v, v + alpha) modulo 2pi
    double intervalWidth = 0.0;
    double theta0 = 0.0;
    Point u0;                   //!< magnitude delta/2 + r in direction theta0
    std::size_t countInInterval = 0;
    std::int64_t M = 0;
    std::vector<std::size_t> selectedArcs;
    std::vector<Point> selectedMidpoints;
    std::vector<Point> insertionPoints; //!< midpoint - u0
};

/// Picks the interval holding the most normal angles (ties: smallest start) and
/// greedily selects M = ceil(cK) midpoints at pairwise distance >= delta + 2r.
/// Throws PlanInfeasible when fewer exist.
ShiftPlan planShift(const Contour& contour, const PeierlsConstants& constants, const ModelParams& params);

/// Points inside W_gamma move by -u0; the rest stay. Throws Error if none are inside.
std::vector<Point> applyPhi(std::span<const Point> config, const Contour& contour, const ShiftPlan& plan);

/// Outcome of checking the shift construction on one configuration and contour.
/// Failures are recorded, never thrown.
struct Lemma1Record
{
    std::size_t K = 0;
    std::int64_t M = 0;

    bool insertionSeparation = true; //!< |x_i - x_j| >= delta + 2r
    bool clearance = true;           //!< d(x_i, phi(config)) >= delta/2 + 2r
    bool phiStructure = true;        //!< translation inside, identity outside, injective
    bool phiHardCore = true;         //!< phi(config) hard-core; inside/outside images > delta/2 + 2r apart
    bool phiInBox = true;            //!< translated points stay in the box
    bool insertionHardCore = true;   //!< phi(config) plus points of B_{delta/2}(x_i) stays hard-core
    bool separation = true;          //!< distance of points to the contour by side and membership
    bool arcMultiplicity = true;     //!< <= 6 arcs per generating center
    bool localMidpoints = true;      //!< <= J other midpoints within delta + 2r of any midpoint
    bool pigeonhole = true;          //!< interval count >= ceil(alpha K / 2pi)

    double minInsertionSeparation = 0.0;
    double minClearance = 0.0;
    std::size_t maxArcsPerCenter = 0;
    std::size_t maxLocalMidpoints = 0;
    std::vector<std::string> failures;

    bool ok() const { return failures.empty(); }
};

Lemma1Record verifyLemma1(std::span<const Point> config, const Contour& contour, const ShiftPlan& plan,
                          const ModelParams& params, const PeierlsConstants& constants);

struct ProbabilityBound
{
    double value = 0.0;
    bool vacuous = false; //!< pi delta^2 z / 4 <= 1, so the bound is >= 1
};

/// (pi delta^2 z / 4)^(-ceil(cK)).
ProbabilityBound lemma3Bound(std::size_t K, const ModelParams& params, const PeierlsConstants& constants);

struct CountBound
{
    double log = 0.0;
    double value = 0.0; //!< may be +inf when log exceeds the double range
};

/// ((K+1) H / eps)^2 (H / eps)^(2(K-1)).
CountBound lemma4Bound(std::size_t K, const ModelParams& params, const PeierlsConstants& constants);

/// Raw disk geometry for enumeration; not checked against model constraints.
struct SmallContourGeometry
{
    double epsilon = 0.0;
    double rho = 0.0;       //!< contour disk radius delta + 2r
    double joinRadius = 0.0; //!< 2R: snapped centers at most this far apart are connected
    double hardCore = 0.0;  //!< 2r
    double tol = 1e-9;

    static SmallContourGeometry from(const ModelParams& params);
};

struct SmallContourCounts
{
    int Kmax = 0;
    std::vector<std::uint64_t> counts; //!< index K; counts[0] unused
    std::uint64_t shapes = 0;          //!< connected realizable center sets examined
    std::uint64_t degenerate = 0;      //!< shapes skipped for tangency
    std::uint64_t neighborhood = 0;    //!< lattice offsets within 2R
};

/// Exact counts of origin-enclosing contours of size K <= Kmax (Kmax <= 3) whose generating
/// centers form a connected, hard-core-realizable set of K lattice sites.
/// Throws SearchTooLarge when the 2R neighborhood holds more than `candidateCap` sites.
SmallContourCounts enumerateSmallContours(int Kmax, const ModelParams& params, std::uint64_t candidateCap = 10000);
SmallContourCounts enumerateSmallContours(int Kmax, const SmallContourGeometry& geometry,
                                          std::uint64_t candidateCap = 10000);

} // namespace hdperc
