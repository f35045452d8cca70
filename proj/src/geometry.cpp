#include "hdperc/geometry.hpp"

#include "hdperc/cell_index.hpp"

namespace hdperc {

namespace {

std::int64_t snapCoordinate(double v, double eps)
{
    auto m = static_cast<std::int64_t>(std::floor(v / eps + 0.5));
    // Repair rounding so the computed cell bounds are honored exactly.
    while (v < eps * static_cast<double>(m) - 0.5 * eps)
        --m;
    while (v >= eps * static_cast<double>(m) + 0.5 * eps)
        ++m;
    return m;
}

} // namespace

Point Torus::wrap(Point p) const
{
    const double h = 0.5 * side;
    p.x -= side * std::floor((p.x + h) / side);
    p.y -= side * std::floor((p.y + h) / side);
    if (p.x >= h)
        p.x -= side;
    if (p.y >= h)
        p.y -= side;
    return p;
}

GridPoint snapToGrid(Point p, double epsilon)
{
    return {snapCoordinate(p.x, epsilon), snapCoordinate(p.y, epsilon)};
}

bool isHardCore(std::span<const Point> points, double r, std::optional<Torus> torus)
{
    if (points.size() < 2)
        return true;
    const double s = 2.0 * r;
    const double s2 = s * s;
    CellIndex index = torus ? CellIndex(s, CellIndex::Domain::torus(*torus))
                            : CellIndex::emptyFor(points, s);
    for (Point p : points) {
        bool ok = true;
        index.forEachWithin(p, s, [&](std::size_t, Point d) {
            if (d.norm2() < s2)
                ok = false;
        });
        if (!ok)
            return false;
        index.add(p);
    }
    return true;
}

} // namespace hdperc
