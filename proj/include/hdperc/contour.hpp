#pragma once

#include "hdperc/disk_union.hpp"
#include "hdperc/geometry.hpp"
#include "hdperc/params.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace hdperc {

/// Partition of a configuration by connectivity of the snapped disks B_R(Psi(x)),
/// R = delta + 3r/2: two points are joined when their snapped centers are at most 2R apart.
struct ComponentDecomposition
{
    std::vector<GridPoint> snapped;            //!< per configuration point
    std::vector<std::uint32_t> label;          //!< per configuration point
    std::vector<std::vector<std::size_t>> members;
    /// No snapped center within 2R of a box edge; only these get contours.
    std::vector<bool> finite;
    /// Spans the box (or winds the torus) by the same rule as L-clusters.
    std::vector<bool> spanning;

    std::size_t count() const { return members.size(); }
};

ComponentDecomposition decomposeComponents(std::span<const Point> config, const ModelParams& params,
                                           std::optional<Torus> torus = std::nullopt);

/// Outer boundary of the union of the (delta + 2r)-disks around a finite component's snapped centers.
struct Contour
{
    std::vector<Arc> arcs;                 //!< the contour, counter-clockwise
    std::vector<ClosedCurve> innerCurves;  //!< remaining boundary curves (holes)
    std::vector<GridPoint> centers;        //!< snapped centers of the component, sorted
    double epsilon = 0.0;
    double radius = 0.0;
    double tol = 0.0;

    /// Contour size K.
    std::size_t size() const { return arcs.size(); }
    /// Membership in the enclosed region W_gamma. Throws OnBoundary within tol of the contour.
    bool contains(Point p) const;
    bool hasCenter(GridPoint g) const;
};

/// Throws InfiniteComponent for a boundary-touching component, DegenerateTangency from geometry.
Contour extractContour(std::span<const Point> component, const ModelParams& params);

/// Throws OnBoundary if the origin lies on the contour.
bool enclosesOrigin(const Contour& contour);

/// Rotation-minimal encoding of a contour's arcs: (i, j, start, extent) per arc with
/// angles in integer microradians.
struct ContourKey
{
    std::vector<std::int64_t> data;

    std::size_t size() const { return data.size() / 4; }
    std::string str() const;
    friend auto operator<=>(const ContourKey&, const ContourKey&) = default;
};

ContourKey canonicalKey(const Contour& contour);

nlohmann::json contourToJson(const Contour& contour);

} // namespace hdperc
