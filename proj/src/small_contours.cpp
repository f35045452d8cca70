#include "hdperc/disk_union.hpp"
#include "hdperc/errors.hpp"
#include "hdperc/peierls.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include <utility>

namespace hdperc {

SmallContourGeometry SmallContourGeometry::from(const ModelParams& params)
{
    params.validate();
    SmallContourGeometry g;
    g.epsilon = params.epsilon;
    g.rho = params.contourRadius();
    g.joinRadius = 2.0 * params.componentRadius();
    g.hardCore = 2.0 * params.r;
    g.tol = params.tolGeom();
    return g;
}

namespace {

bool lexLess(GridPoint a, GridPoint b) { return a < b; }

struct Enumerator
{
    const SmallContourGeometry& g;
    std::vector<GridPoint> neighbors; // lattice offsets within 2R, excluding 0

    Point pos(GridPoint p) const { return gridPosition(p, g.epsilon); }

    bool joined(GridPoint a, GridPoint b) const
    {
        return distance(pos(a), pos(b)) <= g.joinRadius + g.tol;
    }

    // Representative points of the half-open cell around a site: center, corners, edge midpoints.
    std::array<Point, 9> cellSamples(GridPoint p) const
    {
        const double h = 0.5 * g.epsilon * (1.0 - 1e-12);
        const Point c = pos(p);
        std::array<Point, 9> out{};
        std::size_t k = 0;
        for (int dx = -1; dx <= 1; ++dx)
            for (int dy = -1; dy <= 1; ++dy)
                out[k++] = c + Point{dx * h, dy * h};
        return out;
    }

    bool pairRealizable(GridPoint a, GridPoint b) const
    {
        if (distance(pos(a), pos(b)) >= g.hardCore)
            return true;
        const auto sa = cellSamples(a);
        const auto sb = cellSamples(b);
        for (Point p : sa)
            for (Point q : sb)
                if (distance(p, q) >= g.hardCore)
                    return true;
        return false;
    }

    bool realizable(std::span<const GridPoint> sites) const
    {
        bool plain = true;
        for (std::size_t a = 0; a < sites.size(); ++a)
            for (std::size_t b = a + 1; b < sites.size(); ++b) {
                if (!pairRealizable(sites[a], sites[b]))
                    return false;
                plain = plain && distance(pos(sites[a]), pos(sites[b])) >= g.hardCore;
            }
        if (plain || sites.size() <= 2)
            return true;
        // Three sites: search the sample points jointly.
        const auto s0 = cellSamples(sites[0]);
        const auto s1 = cellSamples(sites[1]);
        const auto s2 = cellSamples(sites[2]);
        for (Point p : s0)
            for (Point q : s1) {
                if (distance(p, q) < g.hardCore)
                    continue;
                for (Point w : s2)
                    if (distance(p, w) >= g.hardCore && distance(q, w) >= g.hardCore)
                        return true;
            }
        return false;
    }

    // Number of lattice points in the closed region bounded by the outer curve.
    std::uint64_t latticeCount(std::span<const GridPoint> sites, const ClosedCurve& outer) const
    {
        const double eps = g.epsilon;
        double ylo = 1e300, yhi = -1e300;
        for (GridPoint s : sites) {
            ylo = std::min(ylo, pos(s).y - g.rho);
            yhi = std::max(yhi, pos(s).y + g.rho);
        }
        const auto j0 = static_cast<std::int64_t>(std::ceil(ylo / eps - 1e-9));
        const auto j1 = static_cast<std::int64_t>(std::floor(yhi / eps + 1e-9));
        std::uint64_t total = 0;
        std::vector<std::pair<double, double>> spans;
        for (std::int64_t j = j0; j <= j1; ++j) {
            const double y = eps * static_cast<double>(j);
            spans.clear();
            for (GridPoint s : sites) {
                const Point c = pos(s);
                const double dy = y - c.y;
                const double h2 = g.rho * g.rho - dy * dy;
                if (h2 < -1e-12)
                    continue;
                const double h = std::sqrt(std::max(h2, 0.0));
                spans.emplace_back(c.x - h, c.x + h);
            }
            if (spans.empty())
                continue;
            std::sort(spans.begin(), spans.end());
            std::vector<std::pair<double, double>> merged{spans.front()};
            for (std::size_t k = 1; k < spans.size(); ++k) {
                if (spans[k].first <= merged.back().second)
                    merged.back().second = std::max(merged.back().second, spans[k].second);
                else
                    merged.push_back(spans[k]);
            }
            std::int64_t prevHi = 0;
            for (std::size_t k = 0; k < merged.size(); ++k) {
                const auto lo = static_cast<std::int64_t>(std::ceil(merged[k].first / eps - 1e-9));
                const auto hi = static_cast<std::int64_t>(std::floor(merged[k].second / eps + 1e-9));
                if (hi >= lo)
                    total += static_cast<std::uint64_t>(hi - lo + 1);
                if (k > 0) {
                    // Gap between two covered spans: inside only if it belongs to a hole.
                    for (std::int64_t i = prevHi + 1; i < lo; ++i)
                        if (curveEncloses(outer, {eps * static_cast<double>(i), y}))
                            ++total;
                }
                prevHi = std::max(hi, lo - 1);
            }
        }
        return total;
    }
};

} // namespace

SmallContourCounts enumerateSmallContours(int Kmax, const ModelParams& params, std::uint64_t candidateCap)
{
    return enumerateSmallContours(Kmax, SmallContourGeometry::from(params), candidateCap);
}

SmallContourCounts enumerateSmallContours(int Kmax, const SmallContourGeometry& geometry, std::uint64_t candidateCap)
{
    if (Kmax < 1 || Kmax > 3)
        throw InvalidParams("enumerateSmallContours: Kmax must be in 1..3 (contours have size >= 1)");
    if (!(geometry.epsilon > 0.0) || !(geometry.rho > 0.0) || !(geometry.joinRadius > 0.0) ||
        !(geometry.hardCore > 0.0))
        throw InvalidParams("enumerateSmallContours: lengths must be positive");

    Enumerator en{geometry, {}};
    const auto reach = static_cast<std::int64_t>(std::ceil((geometry.joinRadius + geometry.tol) / geometry.epsilon));
    // Refuse before scanning when the disk clearly holds more sites than the cap.
    if (std::numbers::pi * static_cast<double>(reach - 1) * static_cast<double>(reach - 1) >
        2.0 * static_cast<double>(candidateCap))
        throw SearchTooLarge("enumerateSmallContours: lattice sites within 2R exceed the cap");
    for (std::int64_t i = -reach; i <= reach; ++i)
        for (std::int64_t j = -reach; j <= reach; ++j) {
            const GridPoint p{i, j};
            if ((i != 0 || j != 0) && en.joined({0, 0}, p))
                en.neighbors.push_back(p);
        }

    SmallContourCounts out;
    out.Kmax = Kmax;
    out.counts.assign(static_cast<std::size_t>(Kmax) + 1, 0);
    out.neighborhood = en.neighbors.size();
    if (out.neighborhood > candidateCap) {
        std::ostringstream os;
        os << "enumerateSmallContours: " << out.neighborhood << " lattice sites within 2R exceed the cap of "
           << candidateCap;
        throw SearchTooLarge(os.str());
    }

    std::vector<GridPoint> forward; // lexicographically after the origin
    for (GridPoint p : en.neighbors)
        if (lexLess({0, 0}, p))
            forward.push_back(p);

    auto process = [&](std::span<const GridPoint> sites) {
        if (!en.realizable(sites))
            return;
        ++out.shapes;
        std::vector<ClosedCurve> curves;
        try {
            curves = diskUnionBoundary(sites, geometry.epsilon, geometry.rho, geometry.tol);
        } catch (const DegenerateTangency&) {
            ++out.degenerate;
            return;
        }
        const auto outer = std::max_element(curves.begin(), curves.end(), [](const auto& a, const auto& b) {
            return curveMaxY(a) < curveMaxY(b);
        });
        const std::size_t K = outer->size();
        if (K > static_cast<std::size_t>(Kmax))
            return;
        // The generating set must be recoverable from the contour.
        std::set<GridPoint> generators;
        for (const Arc& a : *outer)
            generators.insert(a.center);
        if (generators.size() != sites.size())
            return;
        out.counts[K] += en.latticeCount(sites, *outer);
    };

    const GridPoint origin{0, 0};
    {
        const std::array<GridPoint, 1> one{origin};
        process(one);
    }
    if (Kmax >= 2) {
        for (GridPoint b : forward) {
            const std::array<GridPoint, 2> two{origin, b};
            process(two);
        }
    }
    if (Kmax >= 3) {
        std::vector<std::pair<GridPoint, GridPoint>> pairs;
        for (GridPoint a : forward) {
            for (GridPoint x : forward)
                if (lexLess(a, x))
                    pairs.emplace_back(a, x);
            for (GridPoint n : en.neighbors) {
                const GridPoint x{a.i + n.i, a.j + n.j};
                if (!lexLess(origin, x) || x == a)
                    continue;
                pairs.emplace_back(std::min(a, x), std::max(a, x));
            }
        }
        std::sort(pairs.begin(), pairs.end());
        pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
        for (const auto& [b, c] : pairs) {
            const std::array<GridPoint, 3> three{origin, b, c};
            process(three);
        }
    }
    return out;
}

} // namespace hdperc
