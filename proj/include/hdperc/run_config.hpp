#pragma once

#include "hdperc/params.hpp"
#include "hdperc/sampler.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace hdperc {

/// Everything a run needs. Keys of the config file are listed in `configKeys()`;
/// lengths share one unit, activities are per unit area.
struct RunConfig
{
    ModelParams params;
    BoundaryKind boundary = BoundaryKind::Empty;
    bool exclusion = true;
    double maxDisp = 0.0; //!< 0 selects r

    double zMin = 1.0;
    double zMax = 1.0;
    std::uint64_t zSteps = 1;
    bool zLog = false;

    std::uint64_t sweeps = 1000;
    std::uint64_t burnIn = 200;
    std::uint64_t sampleEvery = 10;
    std::uint64_t movesPerSweep = 0; //!< 0 selects ceil(box area / (pi r^2))
    std::uint64_t replicas = 1;

    std::uint64_t seed = 1;
    std::uint64_t jobs = 1;
    std::string out = "out";

    std::string snapshotFormat = "binary"; //!< binary, csv or none
    std::uint64_t checkpointEvery = 0;     //!< sweeps between checkpoints; 0 disables
    bool verifyLemma1 = true;

    std::uint64_t oracleSamples = 1000000;
    std::uint64_t oracleShifts = 16;
    std::uint64_t oracleMaxN = 7;

    std::uint64_t enumKmax = 3;
    std::uint64_t enumCap = 10000;

    /// z values of the sweep grid, linear or geometric between zMin and zMax.
    std::vector<double> zGrid() const;
    SweepPlan sweepPlan() const;
    SamplerOptions samplerOptions() const;
    BoundaryCondition boundaryCondition() const;
    /// Throws ValidationError naming the violated constraint.
    void validate() const;
};

struct ConfigKey
{
    std::string name;
    std::string defaultValue;
    std::string doc;
};
const std::vector<ConfigKey>& configKeys();

/// `key = value` lines; '#' starts a comment. Unknown or repeated keys are ParseErrors.
/// Overrides (same key names) replace file values; the result is validated.
RunConfig parseConfig(const std::string& text, const std::map<std::string, std::string>& overrides = {});
RunConfig parseConfigFile(const std::filesystem::path& path, const std::map<std::string, std::string>& overrides = {});

/// Canonical key = value rendering; parseConfig(toText(c)) reproduces c.
std::string toText(const RunConfig& config);

} // namespace hdperc
