#include "hdperc/sampler.hpp"

#include "hdperc/errors.hpp"

#include <cassert>
#include <stdexcept>

namespace hdperc {

namespace {

bool insideBox(const ModelParams& p, Point q)
{
    const double n = p.boxHalfWidth;
    return q.x >= -n && q.x <= n && q.y >= -n && q.y <= n;
}

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

void debugCheck([[maybe_unused]] const ChainState& state)
{
#ifndef NDEBUG
    checkHardCore(state);
#endif
}

} // namespace

void BoundaryCondition::validate(const ModelParams& params) const
{
    if (kind != BoundaryKind::Fixed)
        return;
    for (Point q : fixed) {
        if (!std::isfinite(q.x) || !std::isfinite(q.y))
            throw InvalidParams("fixed boundary point is not finite");
        if (insideBox(params, q))
            throw InvalidParams("fixed boundary points must lie outside the box");
    }
    if (!isHardCore(fixed, params.r))
        throw InvalidParams("fixed boundary points violate the hard core");
}

ChainState initChain(const ModelParams& params, const BoundaryCondition& boundary, std::uint64_t seed,
                     const SamplerOptions& options)
{
    params.validate();
    boundary.validate(params);
    if (options.insertProb < 0.0 || options.deleteProb < 0.0 || options.insertProb != options.deleteProb ||
        options.insertProb + options.deleteProb > 1.0)
        throw InvalidParams("insert and delete proposal probabilities must be equal and sum to at most 1");
    if (options.maxDisp < 0.0)
        throw InvalidParams("maxDisp must be nonnegative");

    const double cell = 2.0 * params.r;
    const auto domain = boundary.kind == BoundaryKind::Periodic
                            ? CellIndex::Domain::torus(Torus{params.boxSide()})
                            : CellIndex::Domain::box({-params.boxHalfWidth, -params.boxHalfWidth},
                                                     {params.boxHalfWidth, params.boxHalfWidth});
    ChainState state{params, boundary, options, CellIndex(cell, domain), std::nullopt, std::mt19937_64(seed), {}};
    if (state.options.maxDisp == 0.0)
        state.options.maxDisp = params.r;
    if (boundary.kind == BoundaryKind::Fixed && !boundary.fixed.empty())
        state.fixedIndex = CellIndex::boundingBox(boundary.fixed, cell);
    return state;
}

bool placementAllowed(const ChainState& state, Point p, std::optional<std::size_t> ignore)
{
    if (state.boundary.kind != BoundaryKind::Periodic && !insideBox(state.params, p))
        return false;
    if (!state.options.exclusion)
        return true;
    const double s = 2.0 * state.params.r;
    const double s2 = s * s;
    bool ok = true;
    state.index.forEachWithin(p, s, [&](std::size_t id, Point d) {
        if (d.norm2() < s2 && (!ignore || *ignore != id))
            ok = false;
    });
    if (ok && state.fixedIndex) {
        state.fixedIndex->forEachWithin(p, s, [&](std::size_t, Point d) {
            if (d.norm2() < s2)
                ok = false;
        });
    }
    return ok;
}

double insertAcceptance(const ChainState& state)
{
    const double n = static_cast<double>(state.size());
    return std::min(1.0, state.params.z * state.params.boxArea() / (n + 1.0));
}

double deleteAcceptance(const ChainState& state)
{
    const double n = static_cast<double>(state.size());
    const double za = state.params.z * state.params.boxArea();
    if (za == 0.0)
        return 1.0;
    return std::min(1.0, n / za);
}

bool stepInsert(ChainState& state)
{
    auto& st = state.stats;
    ++st.proposed[0];
    const double n = state.params.boxHalfWidth;
    Point p{-n + 2.0 * n * uniform01(state.rng), -n + 2.0 * n * uniform01(state.rng)};
    if (state.boundary.kind == BoundaryKind::Periodic)
        p = Torus{state.params.boxSide()}.wrap(p);
    if (!(uniform01(state.rng) < insertAcceptance(state)))
        return false;
    if (!placementAllowed(state, p))
        return false;
    state.index.add(p);
    ++st.accepted[0];
    debugCheck(state);
    return true;
}

bool stepDelete(ChainState& state)
{
    auto& st = state.stats;
    ++st.proposed[1];
    const std::size_t n = state.size();
    if (n == 0)
        return false;
    const auto id = static_cast<std::size_t>(uniform01(state.rng) * static_cast<double>(n));
    if (!(uniform01(state.rng) < deleteAcceptance(state)))
        return false;
    state.index.removeSwap(std::min(id, n - 1));
    ++st.accepted[1];
    return true;
}

bool translateParticle(ChainState& state, std::size_t id, Point delta)
{
    Point p = state.index.point(id) + delta;
    if (state.boundary.kind == BoundaryKind::Periodic)
        p = Torus{state.params.boxSide()}.wrap(p);
    if (!placementAllowed(state, p, id))
        return false;
    state.index.move(id, p);
    debugCheck(state);
    return true;
}

bool stepTranslate(ChainState& state, double maxDisp)
{
    auto& st = state.stats;
    ++st.proposed[2];
    const std::size_t n = state.size();
    if (n == 0)
        return false;
    const auto id = std::min(static_cast<std::size_t>(uniform01(state.rng) * static_cast<double>(n)), n - 1);
    const Point delta{maxDisp * (2.0 * uniform01(state.rng) - 1.0), maxDisp * (2.0 * uniform01(state.rng) - 1.0)};
    if (!translateParticle(state, id, delta))
        return false;
    ++st.accepted[2];
    return true;
}

void checkHardCore(const ChainState& state)
{
    if (!state.options.exclusion)
        return;
    const auto cfg = state.config();
    if (!isHardCore(cfg, state.params.r, state.torus()))
        throw std::logic_error("hard-core invariant violated by the configuration");
    if (state.fixedIndex) {
        for (Point p : cfg) {
            state.fixedIndex->forEachWithin(p, 2.0 * state.params.r, [&](std::size_t, Point d) {
                if (d.norm2() < 4.0 * state.params.r * state.params.r)
                    throw std::logic_error("hard-core invariant violated against the boundary condition");
            });
        }
    }
}

void runSweeps(ChainState& state, const SweepPlan& plan, const std::function<void(const Snapshot&)>& observe)
{
    const double pIns = state.options.insertProb;
    const double pDel = state.options.deleteProb;
    for (std::uint64_t s = 0; s < plan.sweeps; ++s) {
        for (std::uint64_t m = 0; m < plan.movesPerSweep; ++m) {
            const double u = uniform01(state.rng);
            if (u < pIns)
                stepInsert(state);
            else if (u < pIns + pDel)
                stepDelete(state);
            else
                stepTranslate(state, state.options.maxDisp);
        }
        const std::uint64_t sweep = ++state.stats.sweeps;
        if (state.options.checkEverySweep)
            checkHardCore(state);
        if (sweep > plan.burnIn && plan.sampleEvery > 0 && (sweep - plan.burnIn) % plan.sampleEvery == 0) {
            const auto cfg = state.config();
            observe(Snapshot{sweep, std::vector<Point>(cfg.begin(), cfg.end())});
        }
    }
}

std::vector<Snapshot> runSweeps(ChainState& state, const SweepPlan& plan)
{
    std::vector<Snapshot> out;
    runSweeps(state, plan, [&](const Snapshot& s) { out.push_back(s); });
    return out;
}

std::uint64_t deriveSeed(std::uint64_t master, std::uint64_t zIndex, std::uint64_t replica)
{
    return splitmix64(splitmix64(splitmix64(master) ^ zIndex) ^ (replica + 0x632be59bd9b4e019ULL));
}

} // namespace hdperc
