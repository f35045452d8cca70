#pragma once

#include "hdperc/cell_index.hpp"
#include "hdperc/geometry.hpp"
#include "hdperc/params.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace hdperc {

enum class BoundaryKind
{
    Empty,    //!< no points outside the box
    Periodic, //!< torus wrap of the box
    Fixed,    //!< explicit hard-core point list outside the box
};

struct BoundaryCondition
{
    BoundaryKind kind = BoundaryKind::Empty;
    std::vector<Point> fixed;

    static BoundaryCondition empty() { return {}; }
    static BoundaryCondition periodic() { return {BoundaryKind::Periodic, {}}; }
    static BoundaryCondition fixedPoints(std::vector<Point> pts) { return {BoundaryKind::Fixed, std::move(pts)}; }

    /// Fixed points must lie outside the box and be mutually hard-core.
    void validate(const ModelParams& params) const;
};

enum class MoveKind : int
{
    Insert = 0,
    Delete = 1,
    Translate = 2,
};

struct MoveStats
{
    std::array<std::uint64_t, 3> proposed{};
    std::array<std::uint64_t, 3> accepted{};
    std::uint64_t sweeps = 0;

    double acceptance(MoveKind k) const
    {
        const auto i = static_cast<std::size_t>(k);
        return proposed[i] == 0 ? 0.0 : static_cast<double>(accepted[i]) / static_cast<double>(proposed[i]);
    }
};

struct SamplerOptions
{
    /// Disabling exclusion gives the ideal-gas (Poisson) surrogate.
    bool exclusion = true;
    /// Translation half-width; 0 selects r.
    double maxDisp = 0.0;
    double insertProb = 0.4;
    double deleteProb = 0.4;
    /// Re-check the hard core of the whole configuration after every sweep.
    bool checkEverySweep = true;
};

/// A Markov chain targeting the finite-volume grand-canonical hard-disk distribution.
///
/// `index` owns the configuration; every mutation goes through the step functions,
/// which keep configuration, index and statistics consistent.
struct ChainState
{
    ModelParams params;
    BoundaryCondition boundary;
    SamplerOptions options;
    CellIndex index;
    std::optional<CellIndex> fixedIndex;
    std::mt19937_64 rng;
    MoveStats stats;

    std::span<const Point> config() const { return index.points(); }
    std::size_t size() const { return index.size(); }
    std::optional<Torus> torus() const
    {
        if (boundary.kind == BoundaryKind::Periodic)
            return Torus{params.boxSide()};
        return std::nullopt;
    }
};

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Empty chain. Throws InvalidParams.
ChainState initChain(const ModelParams& params, const BoundaryCondition& boundary, std::uint64_t seed,
                     const SamplerOptions& options = {});

/// True if p lies in the box and clears every other point (and boundary point) by 2r.
bool placementAllowed(const ChainState& state, Point p, std::optional<std::size_t> ignore = std::nullopt);

double insertAcceptance(const ChainState& state);
double deleteAcceptance(const ChainState& state);

bool stepInsert(ChainState& state);
bool stepDelete(ChainState& state);
bool stepTranslate(ChainState& state, double maxDisp);
/// Deterministic translation of point `id` by `delta`; returns acceptance.
bool translateParticle(ChainState& state, std::size_t id, Point delta);

struct Snapshot
{
    std::uint64_t sweep = 0;
    std::vector<Point> points;
};

struct SweepPlan
{
    std::uint64_t sweeps = 0;
    std::uint64_t movesPerSweep = 1;
    std::uint64_t sampleEvery = 1;
    /// Absolute chain sweep count below which nothing is emitted.
    std::uint64_t burnIn = 0;
};

/// Runs the insert/delete/translate mixture and calls `observe` for each emitted snapshot.
/// A snapshot is emitted after chain sweep s when s > burnIn and (s - burnIn) % sampleEvery == 0.
void runSweeps(ChainState& state, const SweepPlan& plan, const std::function<void(const Snapshot&)>& observe);
std::vector<Snapshot> runSweeps(ChainState& state, const SweepPlan& plan);

/// Throws std::logic_error if the configuration plus boundary points is not hard-core.
void checkHardCore(const ChainState& state);

/// 64-bit seed for cell (zIndex, replica) derived from a master seed with SplitMix64 mixing.
std::uint64_t deriveSeed(std::uint64_t master, std::uint64_t zIndex, std::uint64_t replica);

} // namespace hdperc
