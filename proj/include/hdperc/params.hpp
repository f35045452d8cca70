#pragma once

#include <algorithm>

namespace hdperc {

/// Scalar parameters of the hard-disk model and of the contour construction.
///
/// Lengths share one unit. The box is [-boxHalfWidth, boxHalfWidth]^2.
struct ModelParams
{
    double r = 0.5;         //!< hard-core radius; centers stay >= 2r apart
    double L = 2.1;         //!< connection diameter
    double delta = 0.2;     //!< contour margin
    double epsilon = 0.09;  //!< discretization pitch
    double z = 1.0;         //!< activity
    double boxHalfWidth = 10.0;

    /// Component radius delta + 3r/2.
    double componentRadius() const { return delta + 1.5 * r; }
    /// Radius of the disks whose union boundary forms a contour.
    double contourRadius() const { return delta + 2.0 * r; }
    double boxSide() const { return 2.0 * boxHalfWidth; }
    double boxArea() const { return boxSide() * boxSide(); }
    /// Endpoint-matching and tangency tolerance.
    double tolGeom() const { return 1e-9 * std::max(r, 1.0); }

    /// Throws InvalidParams naming the violated constraint.
    void validate() const;
};

} // namespace hdperc
