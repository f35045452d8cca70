#include "hdperc/disk_union.hpp"

#include "hdperc/cell_index.hpp"
#include "hdperc/errors.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

namespace hdperc {

namespace {

struct Interval
{
    double a;
    double b;
};

std::string describe(Point c)
{
    std::ostringstream os;
    os.precision(17);
    os << "(" << c.x << ", " << c.y << ")";
    return os.str();
}

/// Uncovered angular intervals of one circle, given the open intervals covered by others.
std::vector<Interval> uncovered(std::vector<Interval> covered, double angTol, Point center)
{
    if (covered.empty())
        return {{0.0, kTwoPi}};
    std::sort(covered.begin(), covered.end(),
              [](const Interval& u, const Interval& v) { return u.a < v.a; });

    auto degenerate = [&] {
        throw DegenerateTangency("boundary vertex shared by three circles near " + describe(center));
    };

    std::vector<Interval> merged;
    merged.push_back(covered.front());
    for (std::size_t k = 1; k < covered.size(); ++k) {
        Interval& cur = merged.back();
        const Interval& nx = covered[k];
        if (std::abs(nx.a - cur.b) <= angTol)
            degenerate();
        if (nx.a < cur.b)
            cur.b = std::max(cur.b, nx.b);
        else
            merged.push_back(nx);
    }
    // Fold intervals that the last one reaches past 2pi.
    while (merged.size() > 1) {
        Interval& last = merged.back();
        const double firstA = merged.front().a + kTwoPi;
        if (std::abs(firstA - last.b) <= angTol)
            degenerate();
        if (firstA < last.b) {
            last.b = std::max(last.b, merged.front().b + kTwoPi);
            merged.erase(merged.begin());
        } else {
            break;
        }
    }
    if (merged.size() == 1) {
        const double span = merged.front().b - merged.front().a;
        if (std::abs(span - kTwoPi) <= angTol)
            degenerate();
        if (span > kTwoPi)
            return {};
    }

    std::vector<Interval> gaps;
    for (std::size_t k = 0; k < merged.size(); ++k) {
        const double from = merged[k].b;
        const double to = k + 1 < merged.size() ? merged[k + 1].a : merged.front().a + kTwoPi;
        const double len = to - from;
        if (len <= angTol)
            degenerate();
        gaps.push_back({from, to});
    }
    return gaps;
}

} // namespace

std::vector<ClosedCurve> diskUnionBoundary(std::span<const Point> input, double rho, double tol)
{
    std::vector<Point> centers(input.begin(), input.end());
    std::sort(centers.begin(), centers.end(),
              [](Point u, Point v) { return u.x < v.x || (u.x == v.x && u.y < v.y); });
    centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
    if (centers.empty())
        return {};

    const double angTol = tol / rho;
    const double reach = 2.0 * rho + tol;
    const CellIndex index = CellIndex::boundingBox(centers, reach);

    std::vector<Arc> arcs;
    std::vector<Interval> covered;
    for (std::size_t i = 0; i < centers.size(); ++i) {
        const Point c = centers[i];
        covered.clear();
        index.forEachWithin(c, reach, [&](std::size_t j, Point d) {
            if (j == i)
                return;
            const double dist = d.norm();
            if (std::abs(dist - 2.0 * rho) <= tol)
                throw DegenerateTangency("circles of radius " + std::to_string(rho) + " at " +
                                         describe(c) + " and " + describe(centers[j]) +
                                         " are tangent");
            if (dist >= 2.0 * rho)
                return;
            const double phi = normalizeAngle(std::atan2(d.y, d.x));
            const double h = std::acos(dist / (2.0 * rho));
            covered.push_back({phi - h, phi + h});
        });
        // Normalize starts into [0, 2pi) keeping the interval length.
        for (auto& iv : covered) {
            const double len = iv.b - iv.a;
            iv.a = normalizeAngle(iv.a);
            iv.b = iv.a + len;
        }
        for (const Interval& g : uncovered(covered, angTol, c)) {
            Arc arc;
            arc.origin = c;
            arc.radius = rho;
            arc.start = normalizeAngle(g.a);
            arc.extent = std::min(g.b - g.a, kTwoPi);
            arcs.push_back(arc);
        }
    }

    // Stitch: the end of each arc is the start of exactly one other arc.
    const std::size_t n = arcs.size();
    std::vector<Point> starts(n);
    for (std::size_t k = 0; k < n; ++k)
        starts[k] = arcs[k].startPoint();
    std::vector<std::size_t> byX(n);
    std::iota(byX.begin(), byX.end(), std::size_t{0});
    std::sort(byX.begin(), byX.end(), [&](std::size_t u, std::size_t v) { return starts[u].x < starts[v].x; });

    std::vector<std::size_t> next(n, n);
    std::vector<char> hasPred(n, 0);
    for (std::size_t k = 0; k < n; ++k) {
        if (arcs[k].isFullCircle()) {
            next[k] = k;
            hasPred[k] = 1;
            continue;
        }
        const Point e = arcs[k].endPoint();
        auto lo = std::lower_bound(byX.begin(), byX.end(), e.x - tol,
                                   [&](std::size_t u, double x) { return starts[u].x < x; });
        std::size_t found = n;
        int matches = 0;
        for (auto it = lo; it != byX.end() && starts[*it].x <= e.x + tol; ++it) {
            if (*it == k || arcs[*it].isFullCircle())
                continue;
            if (distance(starts[*it], e) <= tol) {
                found = *it;
                ++matches;
            }
        }
        if (matches != 1)
            throw DegenerateTangency(matches == 0
                                         ? "boundary arcs do not close near " + describe(e)
                                         : "boundary vertex shared by three circles near " + describe(e));
        if (hasPred[found])
            throw DegenerateTangency("boundary vertex shared by three circles near " + describe(e));
        hasPred[found] = 1;
        next[k] = found;
    }

    std::vector<ClosedCurve> curves;
    std::vector<char> used(n, 0);
    for (std::size_t k = 0; k < n; ++k) {
        if (used[k])
            continue;
        ClosedCurve curve;
        std::size_t cur = k;
        while (!used[cur]) {
            used[cur] = 1;
            curve.push_back(arcs[cur]);
            cur = next[cur];
        }
        if (cur != k)
            throw DegenerateTangency("boundary arcs do not form simple closed curves");
        curves.push_back(std::move(curve));
    }
    return curves;
}

std::vector<ClosedCurve> diskUnionBoundary(std::span<const GridPoint> centers, double epsilon,
                                           double rho, double tol)
{
    std::vector<Point> pts;
    pts.reserve(centers.size());
    for (GridPoint g : centers)
        pts.push_back(gridPosition(g, epsilon));
    auto curves = diskUnionBoundary(pts, rho, tol);
    for (auto& curve : curves)
        for (auto& arc : curve)
            arc.center = snapToGrid(arc.origin, epsilon);
    return curves;
}

double signedTurning(const ClosedCurve& curve)
{
    double total = 0.0;
    for (std::size_t k = 0; k < curve.size(); ++k) {
        const Arc& a = curve[k];
        total += a.extent;
        if (a.isFullCircle())
            continue;
        const Arc& b = curve[(k + 1) % curve.size()];
        const double e = a.end();
        const Point t1{-std::sin(e), std::cos(e)};
        const Point t2{-std::sin(b.start), std::cos(b.start)};
        total += std::atan2(t1.x * t2.y - t1.y * t2.x, t1.x * t2.x + t1.y * t2.y);
    }
    return total;
}

double curveMaxY(const ClosedCurve& curve)
{
    double best = -std::numeric_limits<double>::infinity();
    for (const Arc& a : curve) {
        if (a.containsAngle(0.5 * std::numbers::pi))
            best = std::max(best, a.origin.y + a.radius);
        else
            best = std::max({best, a.startPoint().y, a.endPoint().y});
    }
    return best;
}

double distanceToArc(Point p, const Arc& arc)
{
    const Point d = p - arc.origin;
    const double r = d.norm();
    if (r == 0.0)
        return arc.radius;
    if (arc.containsAngle(std::atan2(d.y, d.x)))
        return std::abs(r - arc.radius);
    return std::min(distance(p, arc.startPoint()), distance(p, arc.endPoint()));
}

double distanceToCurve(Point p, const ClosedCurve& curve)
{
    double best = std::numeric_limits<double>::infinity();
    for (const Arc& a : curve)
        best = std::min(best, distanceToArc(p, a));
    return best;
}

bool curveEncloses(const ClosedCurve& curve, Point p)
{
    constexpr double kQuarter = 0.5 * std::numbers::pi;
    int crossings = 0;
    auto piece = [&](const Arc& arc, double a0, double a1, double y0, double y1) {
        if ((y0 > p.y) == (y1 > p.y))
            return;
        const double dy = p.y - arc.origin.y;
        const double half = std::sqrt(std::max(0.0, arc.radius * arc.radius - dy * dy));
        const bool rightHalf = std::cos(0.5 * (a0 + a1)) > 0.0;
        const double x = arc.origin.x + (rightHalf ? half : -half);
        if (x > p.x)
            ++crossings;
    };
    const std::size_t n = curve.size();
    for (std::size_t k = 0; k < n; ++k) {
        const Arc& arc = curve[k];
        // Each vertex is evaluated once so that adjacent arcs agree on its height.
        const bool closedOnItself = arc.isFullCircle() || n == 1;
        const double yStart = closedOnItself ? arc.pointAt(arc.start).y : arc.startPoint().y;
        const double yEnd = closedOnItself ? yStart : curve[(k + 1) % n].startPoint().y;
        // Split into y-monotone pieces at pi/2 + m pi, where the height is an exact extreme.
        double a = arc.start;
        double ya = yStart;
        const double end = arc.end();
        double cut = kQuarter;
        int m = 0;
        while (cut <= a) {
            cut += std::numbers::pi;
            ++m;
        }
        while (a < end) {
            const bool last = cut >= end;
            const double b = last ? end : cut;
            const double yb = last ? yEnd : arc.origin.y + (m % 2 == 0 ? arc.radius : -arc.radius);
            piece(arc, a, b, ya, yb);
            a = b;
            ya = yb;
            cut += std::numbers::pi;
            ++m;
        }
    }
    return (crossings % 2) == 1;
}

} // namespace hdperc
