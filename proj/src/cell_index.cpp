#include "hdperc/cell_index.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace hdperc {

namespace {

// Keeps huge sparse domains from allocating unbounded cell arrays.
constexpr std::int64_t kMaxCellsPerAxis = 2048;

std::int64_t cellCount(double extent, double cellSize)
{
    if (!(extent > 0.0))
        return 1;
    const double m = std::floor(extent / cellSize);
    return std::clamp<std::int64_t>(static_cast<std::int64_t>(std::min(m, 1e9)), 1,
                                    kMaxCellsPerAxis);
}

} // namespace

CellIndex::CellIndex(double cellSize, Domain domain)
    : cellSize_(cellSize)
    , domain_(domain)
{
    if (!(cellSize > 0.0))
        throw std::invalid_argument("CellIndex: cell size must be positive");
    if (domain_.periodic && (domain_.hi.x - domain_.lo.x) != (domain_.hi.y - domain_.lo.y))
        throw std::invalid_argument("CellIndex: periodic domain must be square");
    const double ex = domain_.hi.x - domain_.lo.x;
    const double ey = domain_.hi.y - domain_.lo.y;
    nx_ = cellCount(ex, cellSize);
    ny_ = cellCount(ey, cellSize);
    wx_ = ex > 0.0 ? ex / static_cast<double>(nx_) : cellSize;
    wy_ = ey > 0.0 ? ey / static_cast<double>(ny_) : cellSize;
    cells_.resize(static_cast<std::size_t>(nx_ * ny_));
}

CellIndex CellIndex::emptyFor(std::span<const Point> points, double cellSize)
{
    Point lo{0.0, 0.0}, hi{0.0, 0.0};
    if (!points.empty()) {
        lo = hi = points.front();
        for (Point p : points) {
            lo.x = std::min(lo.x, p.x);
            lo.y = std::min(lo.y, p.y);
            hi.x = std::max(hi.x, p.x);
            hi.y = std::max(hi.y, p.y);
        }
    }
    return CellIndex(cellSize, Domain::box(lo, hi));
}

CellIndex CellIndex::boundingBox(std::span<const Point> points, double cellSize)
{
    CellIndex index = emptyFor(points, cellSize);
    for (Point p : points)
        index.add(p);
    return index;
}

std::int64_t CellIndex::axisCell(double v, int axis) const
{
    const double lo = axis == 0 ? domain_.lo.x : domain_.lo.y;
    const double w = axis == 0 ? wx_ : wy_;
    const std::int64_t n = axis == 0 ? nx_ : ny_;
    const double c = std::floor((v - lo) / w);
    if (c < 0.0)
        return 0;
    if (c >= static_cast<double>(n - 1))
        return n - 1;
    return static_cast<std::int64_t>(c);
}

std::size_t CellIndex::cellOf(Point p) const
{
    if (domain_.periodic)
        p = Torus{domain_.hi.x - domain_.lo.x}.wrap(p);
    return static_cast<std::size_t>(axisCell(p.y, 1) * nx_ + axisCell(p.x, 0));
}

Point CellIndex::displacement(Point from, Point to) const
{
    const Point d = to - from;
    return domain_.periodic ? Torus{domain_.hi.x - domain_.lo.x}.wrapDelta(d) : d;
}

std::size_t CellIndex::add(Point p)
{
    const auto id = static_cast<std::uint32_t>(points_.size());
    const auto c = static_cast<std::uint32_t>(cellOf(p));
    points_.push_back(p);
    cell_.push_back(c);
    slot_.push_back(static_cast<std::uint32_t>(cells_[c].size()));
    cells_[c].push_back(id);
    return id;
}

void CellIndex::removeSwap(std::size_t id)
{
    assert(id < points_.size());
    // Unlink id from its cell.
    auto& bucket = cells_[cell_[id]];
    const std::uint32_t s = slot_[id];
    const std::uint32_t movedInBucket = bucket.back();
    bucket[s] = movedInBucket;
    slot_[movedInBucket] = s;
    bucket.pop_back();

    // Relabel the last point as id.
    const auto last = static_cast<std::uint32_t>(points_.size() - 1);
    if (id != last) {
        points_[id] = points_[last];
        cell_[id] = cell_[last];
        slot_[id] = slot_[last];
        cells_[cell_[id]][slot_[id]] = static_cast<std::uint32_t>(id);
    }
    points_.pop_back();
    cell_.pop_back();
    slot_.pop_back();
}

void CellIndex::move(std::size_t id, Point p)
{
    const auto c = static_cast<std::uint32_t>(cellOf(p));
    if (c != cell_[id]) {
        auto& bucket = cells_[cell_[id]];
        const std::uint32_t s = slot_[id];
        const std::uint32_t other = bucket.back();
        bucket[s] = other;
        slot_[other] = s;
        bucket.pop_back();
        cell_[id] = c;
        slot_[id] = static_cast<std::uint32_t>(cells_[c].size());
        cells_[c].push_back(static_cast<std::uint32_t>(id));
    }
    points_[id] = p;
}

void CellIndex::clear()
{
    for (auto& b : cells_)
        b.clear();
    points_.clear();
    cell_.clear();
    slot_.clear();
}

std::vector<std::size_t> CellIndex::idsWithin(Point p, double s) const
{
    std::vector<std::size_t> out;
    forEachWithin(p, s, [&](std::size_t id, Point) { out.push_back(id); });
    return out;
}

std::vector<Point> neighborsWithin(const CellIndex& index, Point p, double s)
{
    std::vector<Point> out;
    index.forEachWithin(p, s, [&](std::size_t id, Point) { out.push_back(index.point(id)); });
    return out;
}

} // namespace hdperc
