#include "hdperc/contour.hpp"

#include "hdperc/cell_index.hpp"
#include "hdperc/errors.hpp"
#include "hdperc/union_find.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <sstream>

namespace hdperc {

namespace {

bool inBand(const ModelParams& p, Point c)
{
    const double reach = p.boxHalfWidth - 2.0 * p.componentRadius();
    return std::abs(c.x) >= reach || std::abs(c.y) >= reach;
}

} // namespace

ComponentDecomposition decomposeComponents(std::span<const Point> config, const ModelParams& params,
                                           std::optional<Torus> torus)
{
    ComponentDecomposition out;
    const std::size_t n = config.size();
    out.snapped.resize(n);
    std::vector<Point> centers(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.snapped[i] = snapToGrid(config[i], params.epsilon);
        centers[i] = gridPosition(out.snapped[i], params.epsilon);
    }

    const double reach = 2.0 * params.componentRadius() + params.tolGeom();
    LiftedUnionFind uf(n, torus);
    CellIndex index = torus ? CellIndex(reach, CellIndex::Domain::torus(*torus))
                            : CellIndex::emptyFor(centers, reach);
    for (std::size_t i = 0; i < n; ++i) {
        index.forEachWithin(centers[i], reach, [&](std::size_t j, Point d) {
            // d = centers[j] - centers[i]
            uf.unite(i, j, d);
        });
        index.add(centers[i]);
    }

    out.label.assign(n, 0);
    std::vector<std::int64_t> compOfRoot(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t root = uf.find(i);
        if (compOfRoot[root] < 0) {
            compOfRoot[root] = static_cast<std::int64_t>(out.members.size());
            out.members.emplace_back();
        }
        out.label[i] = static_cast<std::uint32_t>(compOfRoot[root]);
        out.members[static_cast<std::size_t>(compOfRoot[root])].push_back(i);
    }

    const double edge = params.boxHalfWidth - 0.5 * params.L;
    out.finite.assign(out.count(), true);
    out.spanning.assign(out.count(), false);
    for (std::size_t c = 0; c < out.count(); ++c) {
        bool left = false, right = false, bottom = false, top = false;
        for (std::size_t i : out.members[c]) {
            if (inBand(params, centers[i]))
                out.finite[c] = false;
            left |= config[i].x <= -edge;
            right |= config[i].x >= edge;
            bottom |= config[i].y <= -edge;
            top |= config[i].y >= edge;
        }
        if (torus) {
            const std::size_t root = uf.find(out.members[c].front());
            out.spanning[c] = uf.wrapsX(root) || uf.wrapsY(root);
        } else {
            out.spanning[c] = (left && right) || (bottom && top);
        }
    }
    return out;
}

bool Contour::contains(Point p) const
{
    if (distanceToCurve(p, arcs) <= tol) {
        std::ostringstream os;
        os << "point (" << p.x << ", " << p.y << ") lies on the contour";
        throw OnBoundary(os.str());
    }
    return curveEncloses(arcs, p);
}

bool Contour::hasCenter(GridPoint g) const
{
    return std::binary_search(centers.begin(), centers.end(), g);
}

Contour extractContour(std::span<const Point> component, const ModelParams& params)
{
    if (component.empty())
        throw Error("extractContour: component is empty");
    Contour c;
    c.epsilon = params.epsilon;
    c.radius = params.contourRadius();
    c.tol = params.tolGeom();
    for (Point p : component) {
        const GridPoint g = snapToGrid(p, params.epsilon);
        if (inBand(params, gridPosition(g, params.epsilon)))
            throw InfiniteComponent("component touches the boundary band; it has no contour");
        c.centers.push_back(g);
    }
    std::sort(c.centers.begin(), c.centers.end());
    c.centers.erase(std::unique(c.centers.begin(), c.centers.end()), c.centers.end());

    auto curves = diskUnionBoundary(c.centers, params.epsilon, c.radius, c.tol);
    std::size_t outer = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < curves.size(); ++k) {
        const double y = curveMaxY(curves[k]);
        if (y > best) {
            best = y;
            outer = k;
        }
    }
    c.arcs = std::move(curves[outer]);
    for (std::size_t k = 0; k < curves.size(); ++k)
        if (k != outer)
            c.innerCurves.push_back(std::move(curves[k]));
    return c;
}

bool enclosesOrigin(const Contour& contour)
{
    return contour.contains({0.0, 0.0});
}

std::string ContourKey::str() const
{
    std::ostringstream os;
    for (std::size_t k = 0; k < size(); ++k) {
        if (k)
            os << ';';
        os << data[4 * k] << ',' << data[4 * k + 1] << ',' << data[4 * k + 2] << ',' << data[4 * k + 3];
    }
    return os.str();
}

ContourKey canonicalKey(const Contour& contour)
{
    using Tuple = std::array<std::int64_t, 4>;
    std::vector<Tuple> seq;
    seq.reserve(contour.size());
    for (const Arc& a : contour.arcs)
        seq.push_back({a.center.i, a.center.j, std::llround(a.start * 1e6), std::llround(a.extent * 1e6)});
    std::size_t best = 0;
    for (std::size_t k = 1; k < seq.size(); ++k) {
        for (std::size_t m = 0; m < seq.size(); ++m) {
            const Tuple& u = seq[(k + m) % seq.size()];
            const Tuple& v = seq[(best + m) % seq.size()];
            if (u != v) {
                if (u < v)
                    best = k;
                break;
            }
        }
    }
    ContourKey key;
    key.data.reserve(4 * seq.size());
    for (std::size_t m = 0; m < seq.size(); ++m) {
        const Tuple& t = seq[(best + m) % seq.size()];
        key.data.insert(key.data.end(), t.begin(), t.end());
    }
    return key;
}

nlohmann::json contourToJson(const Contour& contour)
{
    nlohmann::json arcs = nlohmann::json::array();
    for (const Arc& a : contour.arcs)
        arcs.push_back({{"i", a.center.i}, {"j", a.center.j}, {"startAngle", a.start}, {"endAngle", a.end()}});
    return {{"size", contour.size()}, {"radius", contour.radius}, {"epsilon", contour.epsilon}, {"arcs", arcs}};
}

} // namespace hdperc
