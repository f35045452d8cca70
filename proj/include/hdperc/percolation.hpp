#pragma once

#include "hdperc/contour.hpp"
#include "hdperc/geometry.hpp"
#include "hdperc/params.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace hdperc {

/// Connected components of the graph joining points at distance <= L.
struct ClusterLabels
{
    struct Bounds
    {
        Point lo;
        Point hi;
    };

    std::vector<std::uint32_t> label;  //!< per point; clusters numbered by first appearance
    std::vector<std::size_t> sizes;
    std::vector<Bounds> bounds;        //!< raw (unwrapped) coordinate bounds
    std::vector<bool> wrapsX;          //!< torus winding, periodic only
    std::vector<bool> wrapsY;
    bool periodic = false;

    std::size_t clusterCount() const { return sizes.size(); }
};

ClusterLabels buildClusters(std::span<const Point> config, double L, std::optional<Torus> torus = std::nullopt);

struct PercolationObservation
{
    bool spansHorizontally = false;
    bool spansVertically = false;
    double largestClusterFraction = 0.0;
    bool originEvent = false;          //!< a spanning cluster has a point within L of the origin
    bool originEventDiscrete = false;  //!< a spanning component has a snapped point within delta + 2r of the origin

    bool spans() const { return spansHorizontally || spansVertically; }
};

/// Planar box: a cluster spans an axis when it has points within L/2 of both opposite edges.
/// Torus: a cluster spans an axis when it winds around it.
PercolationObservation detectSpanning(const ClusterLabels& labels, std::span<const Point> config,
                                      const ModelParams& params);

bool originProximityDiscrete(std::span<const Point> config, const ModelParams& params,
                             const ComponentDecomposition& components);

/// Clusters, spanning flags and both origin events for one configuration.
PercolationObservation observe(std::span<const Point> config, const ModelParams& params,
                               std::optional<Torus> torus = std::nullopt);

} // namespace hdperc
