#pragma once

#include "hdperc/geometry.hpp"

#include <span>
#include <vector>

namespace hdperc {

/// Counter-clockwise arc of a circle. A full circle has extent exactly 2pi.
struct Arc
{
    GridPoint center{};  //!< lattice index of the generating center, when built from lattice sites
    Point origin;        //!< generating center position
    double radius = 0.0;
    double start = 0.0;  //!< [0, 2pi)
    double extent = 0.0; //!< (0, 2pi]

    double end() const { return start + extent; }
    bool isFullCircle() const { return extent >= kTwoPi; }
    Point pointAt(double angle) const
    {
        return {origin.x + radius * std::cos(angle), origin.y + radius * std::sin(angle)};
    }
    Point startPoint() const { return pointAt(start); }
    Point endPoint() const { return pointAt(end()); }
    /// Angle of the arc midpoint in [0, 2pi); 0 for a full circle.
    double midAngle() const { return isFullCircle() ? 0.0 : normalizeAngle(start + 0.5 * extent); }
    Point midpoint() const { return pointAt(midAngle()); }
    bool containsAngle(double angle) const
    {
        return isFullCircle() || normalizeAngle(angle - start) <= extent;
    }
};

/// Arcs in traversal order; the end of each arc is the start of the next.
using ClosedCurve = std::vector<Arc>;

/// Boundary of the union of closed disks of radius rho.
///
/// Every circle contributes the angular intervals not strictly covered by another
/// disk; the arcs are stitched into closed curves by endpoint adjacency. The outer
/// boundary turns by +2pi, holes by -2pi. Duplicate centers are ignored.
/// Throws DegenerateTangency when two circles touch within `tol`, or when
/// three circles pass through one boundary point.
std::vector<ClosedCurve> diskUnionBoundary(std::span<const Point> centers, double rho, double tol);

/// Lattice-site overload; arcs carry their GridPoint center.
std::vector<ClosedCurve> diskUnionBoundary(std::span<const GridPoint> centers, double epsilon,
                                           double rho, double tol);

/// Total tangent rotation along the curve: arc extents plus signed vertex turns.
double signedTurning(const ClosedCurve& curve);

double curveMaxY(const ClosedCurve& curve);

double distanceToArc(Point p, const Arc& arc);
double distanceToCurve(Point p, const ClosedCurve& curve);

/// Ray-casting parity test. Points on the curve get an arbitrary answer.
bool curveEncloses(const ClosedCurve& curve, Point p);

} // namespace hdperc
