#pragma once

#include "hdperc/geometry.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hdperc {

/// Uniform-grid cell list for fixed-radius neighbor queries.
///
/// Owns its points; ids are dense indices 0..size()-1. Removal swaps the last
/// point into the freed id, mirroring erase-by-swap on the caller's vector.
/// Points outside a planar domain are clamped into the border cells, which
/// keeps queries exact at the cost of crowding those cells.
class CellIndex
{
  public:
    struct Domain
    {
        Point lo;
        Point hi;
        bool periodic = false;

        static Domain box(Point lo, Point hi) { return {lo, hi, false}; }
        static Domain torus(Torus t)
        {
            return {{-0.5 * t.side, -0.5 * t.side}, {0.5 * t.side, 0.5 * t.side}, true};
        }
    };

    CellIndex(double cellSize, Domain domain);

    /// Planar index over the bounding box of `points`, pre-filled with them.
    static CellIndex boundingBox(std::span<const Point> points, double cellSize);
    /// Same as boundingBox, but the index starts empty.
    static CellIndex emptyFor(std::span<const Point> points, double cellSize);

    std::size_t add(Point p);
    void removeSwap(std::size_t id);
    void move(std::size_t id, Point p);
    void clear();

    std::size_t size() const { return points_.size(); }
    std::span<const Point> points() const { return points_; }
    Point point(std::size_t id) const { return points_[id]; }
    double cellSize() const { return cellSize_; }
    bool periodic() const { return domain_.periodic; }

    /// Calls fn(id, q - p) for every stored q with |q - p| <= s (minimum image if periodic).
    template <class Fn>
    void forEachWithin(Point p, double s, Fn&& fn) const;

    std::vector<std::size_t> idsWithin(Point p, double s) const;

  private:
    std::int64_t axisCell(double v, int axis) const;
    std::size_t cellOf(Point p) const;
    Point displacement(Point from, Point to) const;

    double cellSize_;
    Domain domain_;
    std::int64_t nx_ = 1;
    std::int64_t ny_ = 1;
    double wx_ = 1.0;
    double wy_ = 1.0;
    std::vector<std::vector<std::uint32_t>> cells_;
    std::vector<Point> points_;
    std::vector<std::uint32_t> cell_;
    std::vector<std::uint32_t> slot_;
};

/// Stored points within closed distance s of p, in unspecified order.
std::vector<Point> neighborsWithin(const CellIndex& index, Point p, double s);

template <class Fn>
void CellIndex::forEachWithin(Point p, double s, Fn&& fn) const
{
    if (points_.empty())
        return;
    const double s2 = s * s;
    auto visitCell = [&](std::int64_t cx, std::int64_t cy) {
        for (std::uint32_t id : cells_[static_cast<std::size_t>(cy * nx_ + cx)]) {
            const Point d = displacement(p, points_[id]);
            if (d.norm2() <= s2)
                fn(static_cast<std::size_t>(id), d);
        }
    };

    if (!domain_.periodic) {
        const std::int64_t x0 = axisCell(p.x - s, 0), x1 = axisCell(p.x + s, 0);
        const std::int64_t y0 = axisCell(p.y - s, 1), y1 = axisCell(p.y + s, 1);
        for (std::int64_t cy = y0; cy <= y1; ++cy)
            for (std::int64_t cx = x0; cx <= x1; ++cx)
                visitCell(cx, cy);
        return;
    }

    const Torus torus{domain_.hi.x - domain_.lo.x};
    const Point q = torus.wrap(p);
    const std::int64_t kx = static_cast<std::int64_t>(std::ceil(s / wx_));
    const std::int64_t ky = static_cast<std::int64_t>(std::ceil(s / wy_));
    const bool allX = 2 * kx + 1 >= nx_;
    const bool allY = 2 * ky + 1 >= ny_;
    const std::int64_t cx0 = axisCell(q.x, 0), cy0 = axisCell(q.y, 1);
    const std::int64_t xs = allX ? 0 : cx0 - kx, xe = allX ? nx_ - 1 : cx0 + kx;
    const std::int64_t ys = allY ? 0 : cy0 - ky, ye = allY ? ny_ - 1 : cy0 + ky;
    for (std::int64_t cy = ys; cy <= ye; ++cy) {
        const std::int64_t wy = ((cy % ny_) + ny_) % ny_;
        for (std::int64_t cx = xs; cx <= xe; ++cx)
            visitCell(((cx % nx_) + nx_) % nx_, wy);
    }
}

} // namespace hdperc
