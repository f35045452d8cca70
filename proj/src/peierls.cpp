#include "hdperc/peierls.hpp"

#include "hdperc/cell_index.hpp"
#include "hdperc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace hdperc {

std::int64_t PeierlsConstants::insertionCount(std::size_t K) const
{
    const std::int64_t denom = nStar * (J + 1);
    return (static_cast<std::int64_t>(K) + denom - 1) / denom;
}

std::int64_t PeierlsConstants::pigeonholeCount(std::size_t K) const
{
    return (static_cast<std::int64_t>(K) + nStar - 1) / nStar;
}

PeierlsConstants computeConstants(const ModelParams& params)
{
    params.validate();
    const double ratio = params.delta / (params.delta + 2.0 * params.r);
    PeierlsConstants k;
    k.nStar = static_cast<std::int64_t>(std::floor(kTwoPi / ratio)) + 1;
    while (kTwoPi / static_cast<double>(k.nStar) >= ratio)
        ++k.nStar;
    while (k.nStar > 1 && kTwoPi / static_cast<double>(k.nStar - 1) < ratio)
        --k.nStar;
    k.alpha = kTwoPi / static_cast<double>(k.nStar);
    k.c = k.alpha / (kTwoPi * static_cast<double>(PeierlsConstants::J + 1));
    k.H = 5.0 * std::sqrt(kTwoPi) * params.r;

    if (!(k.alpha < ratio) || !((0.5 * params.delta + params.r) * k.alpha < 0.5 * params.delta))
        throw std::logic_error("shift angle alpha is not admissible");
    return k;
}

std::vector<ArcNormal> outwardNormals(const Contour& contour)
{
    std::vector<ArcNormal> out;
    out.reserve(contour.size());
    for (const Arc& a : contour.arcs)
        out.push_back({a.midpoint(), a.midAngle()});
    return out;
}

ShiftPlan planShift(const Contour& contour, const PeierlsConstants& constants, const ModelParams& params)
{
    const std::size_t K = contour.size();
    if (K == 0)
        throw PlanInfeasible("contour has no arcs");
    const auto normals = outwardNormals(contour);

    std::vector<double> angles(K);
    for (std::size_t a = 0; a < K; ++a)
        angles[a] = normals[a].angle;
    std::vector<double> candidates = angles;
    std::sort(candidates.begin(), candidates.end());

    ShiftPlan plan;
    plan.intervalWidth = constants.alpha;
    std::size_t bestCount = 0;
    for (double v : candidates) {
        std::size_t count = 0;
        for (double t : angles)
            count += normalizeAngle(t - v) < constants.alpha ? 1 : 0;
        if (count > bestCount) {
            bestCount = count;
            plan.intervalStart = v;
        }
    }
    plan.countInInterval = bestCount;
    plan.theta0 = plan.intervalStart;
    const double shift = 0.5 * params.delta + params.r;
    plan.u0 = {shift * std::cos(plan.theta0), shift * std::sin(plan.theta0)};
    plan.M = constants.insertionCount(K);

    std::vector<std::size_t> inside;
    for (std::size_t a = 0; a < K; ++a)
        if (normalizeAngle(angles[a] - plan.intervalStart) < constants.alpha)
            inside.push_back(a);
    std::stable_sort(inside.begin(), inside.end(), [&](std::size_t u, std::size_t v) {
        return normalizeAngle(angles[u] - plan.intervalStart) < normalizeAngle(angles[v] - plan.intervalStart);
    });

    const double sep = params.delta + 2.0 * params.r;
    for (std::size_t a : inside) {
        if (static_cast<std::int64_t>(plan.selectedArcs.size()) >= plan.M)
            break;
        const Point m = normals[a].midpoint;
        const bool farEnough = std::all_of(plan.selectedMidpoints.begin(), plan.selectedMidpoints.end(),
                                           [&](Point q) { return distance(m, q) >= sep; });
        if (!farEnough)
            continue;
        plan.selectedArcs.push_back(a);
        plan.selectedMidpoints.push_back(m);
        plan.insertionPoints.push_back(m - plan.u0);
    }
    if (static_cast<std::int64_t>(plan.selectedArcs.size()) < plan.M) {
        std::ostringstream os;
        os << "found " << plan.selectedArcs.size() << " separated midpoints, need M = " << plan.M << " (K = " << K
           << ")";
        throw PlanInfeasible(os.str());
    }
    return plan;
}

std::vector<Point> applyPhi(std::span<const Point> config, const Contour& contour, const ShiftPlan& plan)
{
    std::vector<Point> out;
    out.reserve(config.size());
    bool any = false;
    for (Point x : config) {
        if (contour.contains(x)) {
            out.push_back(x - plan.u0);
            any = true;
        } else {
            out.push_back(x);
        }
    }
    if (!any)
        throw Error("phi: no configuration point lies inside the contour");
    return out;
}

Lemma1Record verifyLemma1(std::span<const Point> config, const Contour& contour, const ShiftPlan& plan,
                          const ModelParams& params, const PeierlsConstants& constants)
{
    Lemma1Record rec;
    rec.K = contour.size();
    rec.M = plan.M;
    const double r = params.r;
    const double delta = params.delta;
    auto fail = [&](bool& flag, const std::string& msg) {
        flag = false;
        rec.failures.push_back(msg);
    };

    // Side of the contour and component membership for every point.
    const std::size_t n = config.size();
    std::vector<char> inside(n, 0), member(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        member[i] = contour.hasCenter(snapToGrid(config[i], params.epsilon)) ? 1 : 0;
        try {
            inside[i] = contour.contains(config[i]) ? 1 : 0;
        } catch (const OnBoundary& e) {
            fail(rec.separation, e.what());
        }
    }

    // Separation facts.
    const double figureBound = std::sqrt(5.0 * r * r + 8.0 * r * delta + 3.0 * delta * delta);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = distanceToCurve(config[i], contour.arcs);
        if (!inside[i] && !(d > 0.5 * delta + r))
            fail(rec.separation, "outside point closer than delta/2 + r to the contour");
        if (inside[i] && !(d > 0.5 * delta + 2.0 * r))
            fail(rec.separation, "inside point closer than delta/2 + 2r to the contour");
        if (inside[i] && member[i] && !(distanceToCurve(gridPosition(snapToGrid(config[i], params.epsilon), params.epsilon), contour.arcs) >= delta + 2.0 * r - contour.tol))
            fail(rec.separation, "component center closer than delta + 2r to its contour");
        if (inside[i] && !member[i]) {
            const Point s = gridPosition(snapToGrid(config[i], params.epsilon), params.epsilon);
            if (!(distanceToCurve(s, contour.arcs) > figureBound))
                fail(rec.separation, "enclosed non-component point within sqrt(5r^2+8r delta+3delta^2) of the contour");
        }
    }

    // phi.
    std::vector<Point> image(n);
    std::vector<Point> imgIn, imgOut;
    bool anyInside = false;
    for (std::size_t i = 0; i < n; ++i) {
        image[i] = inside[i] ? config[i] - plan.u0 : config[i];
        (inside[i] ? imgIn : imgOut).push_back(image[i]);
        anyInside = anyInside || inside[i];
    }
    if (!anyInside)
        fail(rec.phiStructure, "no configuration point inside the contour");
    try {
        const auto viaPhi = applyPhi(config, contour, plan);
        if (viaPhi != image)
            fail(rec.phiStructure, "phi is not a translation inside and identity outside");
    } catch (const Error& e) {
        fail(rec.phiStructure, e.what());
    }
    {
        auto sorted = image;
        std::sort(sorted.begin(), sorted.end(),
                  [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            fail(rec.phiStructure, "phi is not injective");
    }
    if (!isHardCore(image, r))
        fail(rec.phiHardCore, "phi(config) violates the hard core");
    if (!imgIn.empty() && !imgOut.empty()) {
        const double s = 0.5 * delta + 2.0 * r;
        const CellIndex outIndex = CellIndex::boundingBox(imgOut, s);
        for (Point p : imgIn) {
            bool close = false;
            outIndex.forEachWithin(p, s, [&](std::size_t, Point) { close = true; });
            if (close) {
                fail(rec.phiHardCore, "shifted inside point within delta/2 + 2r of an outside point");
                break;
            }
        }
    }
    for (Point p : imgIn) {
        if (std::abs(p.x) > params.boxHalfWidth || std::abs(p.y) > params.boxHalfWidth) {
            fail(rec.phiInBox, "shifted point leaves the box");
            break;
        }
    }

    // Insertion points.
    const auto& xs = plan.insertionPoints;
    rec.minInsertionSeparation = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < xs.size(); ++a)
        for (std::size_t b = a + 1; b < xs.size(); ++b)
            rec.minInsertionSeparation = std::min(rec.minInsertionSeparation, distance(xs[a], xs[b]));
    if (!(rec.minInsertionSeparation >= delta + 2.0 * r))
        fail(rec.insertionSeparation, "insertion points closer than delta + 2r");

    rec.minClearance = std::numeric_limits<double>::infinity();
    for (Point x : xs)
        for (Point y : image)
            rec.minClearance = std::min(rec.minClearance, distance(x, y));
    if (!(rec.minClearance >= 0.5 * delta + 2.0 * r))
        fail(rec.clearance, "insertion point closer than delta/2 + 2r to phi(config)");

    // Points anywhere in B_{delta/2}(x_i) may be added; probe the center and the rim.
    for (int dir = -1; dir < 8 && rec.insertionHardCore; ++dir) {
        std::vector<Point> augmented = image;
        for (Point x : xs) {
            if (dir < 0) {
                augmented.push_back(x);
            } else {
                const double t = 0.25 * std::numbers::pi * dir + 0.1;
                augmented.push_back(x + 0.5 * delta * Point{std::cos(t), std::sin(t)});
            }
        }
        if (!isHardCore(augmented, r))
            fail(rec.insertionHardCore, "adding points of B_{delta/2}(x_i) breaks the hard core");
    }

    // Counting bounds used to reach M.
    std::map<GridPoint, std::size_t> arcsPerCenter;
    for (const Arc& a : contour.arcs)
        rec.maxArcsPerCenter = std::max(rec.maxArcsPerCenter, ++arcsPerCenter[a.center]);
    if (rec.maxArcsPerCenter > 6)
        fail(rec.arcMultiplicity, "a center contributes more than 6 arcs");

    const auto normals = outwardNormals(contour);
    const double sep = delta + 2.0 * r;
    for (std::size_t a = 0; a < normals.size(); ++a) {
        std::size_t local = 0;
        for (std::size_t b = 0; b < normals.size(); ++b)
            if (b != a && distance(normals[a].midpoint, normals[b].midpoint) < sep)
                ++local;
        rec.maxLocalMidpoints = std::max(rec.maxLocalMidpoints, local);
    }
    if (rec.maxLocalMidpoints > static_cast<std::size_t>(PeierlsConstants::J))
        fail(rec.localMidpoints, "more than J midpoints within delta + 2r of a midpoint");

    if (static_cast<std::int64_t>(plan.countInInterval) < constants.pigeonholeCount(rec.K))
        fail(rec.pigeonhole, "interval holds fewer than ceil(alpha K / 2pi) normal angles");
    return rec;
}

ProbabilityBound lemma3Bound(std::size_t K, const ModelParams& params, const PeierlsConstants& constants)
{
    const double base = std::numbers::pi * params.delta * params.delta * params.z / 4.0;
    const auto M = constants.insertionCount(K);
    return {std::pow(base, -static_cast<double>(M)), base <= 1.0};
}

CountBound lemma4Bound(std::size_t K, const ModelParams& params, const PeierlsConstants& constants)
{
    const double k = static_cast<double>(K);
    const double ratio = constants.H / params.epsilon;
    const double lg = 2.0 * std::log((k + 1.0) * ratio) + 2.0 * (k - 1.0) * std::log(ratio);
    return {lg, std::exp(lg)};
}

} // namespace hdperc
