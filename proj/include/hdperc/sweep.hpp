#pragma once

#include "hdperc/census.hpp"
#include "hdperc/partition_oracle.hpp"
#include "hdperc/peierls.hpp"
#include "hdperc/run_config.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hdperc {

inline constexpr int kSweepSchemaVersion = 1;

struct Interval
{
    double lo = 0.0;
    double hi = 1.0;
};

/// Wilson score interval for `successes` out of `trials`; [0, 1] when trials = 0.
Interval wilsonInterval(std::uint64_t successes, std::uint64_t trials, double zScore = 1.959963984540054);

/// Tallies of one chain (or of several merged chains at one z).
struct CellTally
{
    std::uint64_t observations = 0;
    std::uint64_t spanning = 0;
    std::uint64_t originEvents = 0;
    std::uint64_t originEventsDiscrete = 0;
    /// Observations with the discrete event but not the continuum one; must stay zero.
    std::uint64_t implicationViolations = 0;
    double sumDensity = 0.0;
    double sumLargestFraction = 0.0;
    MoveStats moves;

    void add(const CellTally& other);
};

struct SweepCell
{
    std::size_t zIndex = 0;
    std::size_t replica = 0;
    double z = 0.0;
    std::uint64_t seed = 0;
    CellTally tally;
    std::string error; //!< non-empty when the cell failed
    bool failed() const { return !error.empty(); }
};

struct SweepRow
{
    double z = 0.0;
    std::string seed; //!< decimal seed, or "all" for the aggregate of a z value
    std::uint64_t sweeps = 0;
    double meanDensity = 0.0;
    double spanProb = 0.0;
    Interval spanCI;
    double largestFrac = 0.0;
    double originEventFreq = 0.0;
    double originEventDiscreteFreq = 0.0;
    double insertAccept = 0.0;
    double deleteAccept = 0.0;
    double translateAccept = 0.0;
};

SweepRow makeRow(double z, const std::string& seed, std::uint64_t sweeps, const CellTally& tally, double area);

struct SweepResult
{
    std::vector<SweepCell> cells; //!< z-major, replica-minor
    std::vector<SweepRow> rows;   //!< per cell, then one aggregate row after each z
    std::size_t failedCells() const;
};

struct RunOptions
{
    bool resume = false;
    bool writeFiles = true;
    std::ostream* log = nullptr;
};

/// One chain per (z, replica) with seed deriveSeed(seed, zIndex, replica); cells run on up to
/// `jobs` threads and each finished cell is written to out/cells/. The CSV perc_sweep.csv is
/// assembled afterwards in grid order, so its bytes depend only on the configuration.
SweepResult runPercolationSweep(const RunConfig& config, const RunOptions& options = {});

/// Observes one chain; used by the sweep and exposed for tests.
CellTally runPercolationCell(const RunConfig& config, double z, std::uint64_t seed);

void writeSweepCsv(std::ostream& os, const SweepResult& result);

/// Census at config.params.z over `replicas` chains; writes census.csv, census_keys.csv, census.json.
CensusReport runContourCensus(const RunConfig& config, const RunOptions& options = {});

/// One chain at config.params.z; writes snapshots and, when enabled, periodic checkpoints.
/// With options.resume the chain continues from out/chain.ckpt.
MoveStats runSample(const RunConfig& config, const RunOptions& options = {});

struct OracleRow
{
    double z = 0.0;
    std::vector<double> probabilities;
    std::string error;
};

/// Small-box distribution of N for every z of the grid, using the box [-n, n]^2.
std::vector<OracleRow> runSmallBoxOracle(const RunConfig& config, PartitionOracle* oracleOut = nullptr);

struct EnumBoundsRow
{
    std::size_t K = 0;
    std::uint64_t count = 0;
    double lemma4Bound = 0.0;
    double lemma4Log = 0.0;
};

std::vector<EnumBoundsRow> runEnumBounds(const RunConfig& config, SmallContourCounts* countsOut = nullptr);

} // namespace hdperc
