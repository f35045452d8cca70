#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>

namespace hdperc {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Point
{
    double x = 0.0;
    double y = 0.0;

    friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
    friend bool operator==(Point a, Point b) = default;

    double norm() const { return std::hypot(x, y); }
    double norm2() const { return x * x + y * y; }
};

inline double distance(Point a, Point b) { return (a - b).norm(); }

/// Index of a site of the lattice (epsilon Z)^2.
struct GridPoint
{
    std::int64_t i = 0;
    std::int64_t j = 0;

    friend auto operator<=>(const GridPoint&, const GridPoint&) = default;
};

/// Square torus of side `side` centered at the origin.
struct Torus
{
    double side;

    /// Minimum-image displacement.
    Point wrapDelta(Point d) const
    {
        d.x -= side * std::nearbyint(d.x / side);
        d.y -= side * std::nearbyint(d.y / side);
        return d;
    }
    /// Wraps a position into [-side/2, side/2).
    Point wrap(Point p) const;
};

/// Maps p to the lattice site whose half-open cell
/// [eps*m - eps/2, eps*m + eps/2) x [eps*n - eps/2, eps*n + eps/2) contains it.
GridPoint snapToGrid(Point p, double epsilon);

inline Point gridPosition(GridPoint g, double epsilon)
{
    return {epsilon * static_cast<double>(g.i), epsilon * static_cast<double>(g.j)};
}

/// True iff all distinct pairs are at distance >= 2r (planar, or minimum image on a torus).
bool isHardCore(std::span<const Point> points, double r, std::optional<Torus> torus = std::nullopt);

/// Angle normalized into [0, 2pi).
inline double normalizeAngle(double a)
{
    a = std::fmod(a, kTwoPi);
    if (a < 0.0)
        a += kTwoPi;
    if (a >= kTwoPi)
        a = 0.0;
    return a;
}

} // namespace hdperc
