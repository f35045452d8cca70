#include "hdperc/percolation.hpp"

#include "hdperc/cell_index.hpp"
#include "hdperc/union_find.hpp"

#include <algorithm>

namespace hdperc {

ClusterLabels buildClusters(std::span<const Point> config, double L, std::optional<Torus> torus)
{
    const std::size_t n = config.size();
    LiftedUnionFind uf(n, torus);
    CellIndex index = torus ? CellIndex(L, CellIndex::Domain::torus(*torus)) : CellIndex::emptyFor(config, L);
    for (std::size_t i = 0; i < n; ++i) {
        index.forEachWithin(config[i], L, [&](std::size_t j, Point d) { uf.unite(i, j, d); });
        index.add(config[i]);
    }

    ClusterLabels out;
    out.periodic = torus.has_value();
    out.label.assign(n, 0);
    std::vector<std::int64_t> clusterOfRoot(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t root = uf.find(i);
        if (clusterOfRoot[root] < 0) {
            clusterOfRoot[root] = static_cast<std::int64_t>(out.sizes.size());
            out.sizes.push_back(0);
            out.bounds.push_back({config[i], config[i]});
            out.wrapsX.push_back(uf.wrapsX(root));
            out.wrapsY.push_back(uf.wrapsY(root));
        }
        const auto c = static_cast<std::size_t>(clusterOfRoot[root]);
        out.label[i] = static_cast<std::uint32_t>(c);
        ++out.sizes[c];
        auto& b = out.bounds[c];
        b.lo.x = std::min(b.lo.x, config[i].x);
        b.lo.y = std::min(b.lo.y, config[i].y);
        b.hi.x = std::max(b.hi.x, config[i].x);
        b.hi.y = std::max(b.hi.y, config[i].y);
    }
    return out;
}

PercolationObservation detectSpanning(const ClusterLabels& labels, std::span<const Point> config,
                                      const ModelParams& params)
{
    PercolationObservation obs;
    const std::size_t count = labels.clusterCount();
    if (count == 0)
        return obs;

    std::vector<bool> spanX(count), spanY(count);
    if (labels.periodic) {
        spanX = labels.wrapsX;
        spanY = labels.wrapsY;
    } else {
        const double edge = params.boxHalfWidth - 0.5 * params.L;
        for (std::size_t c = 0; c < count; ++c) {
            const auto& b = labels.bounds[c];
            spanX[c] = b.lo.x <= -edge && b.hi.x >= edge;
            spanY[c] = b.lo.y <= -edge && b.hi.y >= edge;
        }
    }
    std::size_t largest = 0;
    for (std::size_t c = 0; c < count; ++c) {
        obs.spansHorizontally = obs.spansHorizontally || spanX[c];
        obs.spansVertically = obs.spansVertically || spanY[c];
        largest = std::max(largest, labels.sizes[c]);
    }
    obs.largestClusterFraction = static_cast<double>(largest) / static_cast<double>(config.size());

    const std::optional<Torus> torus =
        labels.periodic ? std::optional<Torus>(Torus{params.boxSide()}) : std::nullopt;
    const double L2 = params.L * params.L;
    for (std::size_t i = 0; i < config.size() && !obs.originEvent; ++i) {
        const std::size_t c = labels.label[i];
        if (!(spanX[c] || spanY[c]))
            continue;
        const Point d = torus ? torus->wrapDelta(config[i]) : config[i];
        obs.originEvent = d.norm2() <= L2;
    }
    return obs;
}

bool originProximityDiscrete(std::span<const Point> config, const ModelParams& params,
                             const ComponentDecomposition& components)
{
    const double reach = params.contourRadius();
    for (std::size_t i = 0; i < config.size(); ++i) {
        if (!components.spanning[components.label[i]])
            continue;
        if (gridPosition(components.snapped[i], params.epsilon).norm() <= reach)
            return true;
    }
    return false;
}

PercolationObservation observe(std::span<const Point> config, const ModelParams& params, std::optional<Torus> torus)
{
    const ClusterLabels labels = buildClusters(config, params.L, torus);
    PercolationObservation obs = detectSpanning(labels, config, params);
    const ComponentDecomposition comps = decomposeComponents(config, params, torus);
    obs.originEventDiscrete = originProximityDiscrete(config, params, comps);
    return obs;
}

} // namespace hdperc
