#include "hdperc/sweep.hpp"

#include "hdperc/checkpoint.hpp"
#include "hdperc/errors.hpp"
#include "hdperc/percolation.hpp"
#include "hdperc/snapshot_io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace hdperc {

namespace {

std::string exact(double d)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    return buf;
}

template <class Fn> void parallelFor(std::size_t n, std::size_t jobs, Fn&& fn)
{
    jobs = std::max<std::size_t>(1, std::min(jobs, n));
    if (jobs == 1) {
        for (std::size_t k = 0; k < n; ++k)
            fn(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < jobs; ++t)
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < n; k = next++)
                fn(k);
        });
}

class Log
{
  public:
    explicit Log(std::ostream* os) : os_(os) {}
    void operator()(const std::string& line)
    {
        if (!os_)
            return;
        std::lock_guard lock(mutex_);
        *os_ << line << '\n';
    }

  private:
    std::ostream* os_;
    std::mutex mutex_;
};

nlohmann::json tallyToJson(const CellTally& t)
{
    return {{"observations", t.observations},
            {"spanning", t.spanning},
            {"originEvents", t.originEvents},
            {"originEventsDiscrete", t.originEventsDiscrete},
            {"implicationViolations", t.implicationViolations},
            {"sumDensity", exact(t.sumDensity)},
            {"sumLargestFraction", exact(t.sumLargestFraction)},
            {"sweeps", t.moves.sweeps},
            {"proposed", t.moves.proposed},
            {"accepted", t.moves.accepted}};
}

CellTally tallyFromJson(const nlohmann::json& j)
{
    CellTally t;
    t.observations = j.at("observations");
    t.spanning = j.at("spanning");
    t.originEvents = j.at("originEvents");
    t.originEventsDiscrete = j.at("originEventsDiscrete");
    t.implicationViolations = j.at("implicationViolations");
    t.sumDensity = std::stod(j.at("sumDensity").get<std::string>());
    t.sumLargestFraction = std::stod(j.at("sumLargestFraction").get<std::string>());
    t.moves.sweeps = j.at("sweeps");
    t.moves.proposed = j.at("proposed");
    t.moves.accepted = j.at("accepted");
    return t;
}

std::string cellFingerprint(const RunConfig& c, double z, std::uint64_t seed)
{
    RunConfig k = c;
    k.params.z = z;
    k.seed = seed;
    k.jobs = 1;
    k.out = "-";
    k.zMin = k.zMax = z;
    k.zSteps = 1;
    return toText(k);
}

std::filesystem::path cellPath(const RunConfig& c, std::size_t zIndex, std::size_t replica)
{
    return std::filesystem::path(c.out) / "cells" /
           ("z" + std::to_string(zIndex) + "_r" + std::to_string(replica) + ".json");
}

} // namespace

Interval wilsonInterval(std::uint64_t successes, std::uint64_t trials, double zScore)
{
    if (trials == 0)
        return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = zScore * zScore;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = zScore * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {successes == 0 ? 0.0 : std::max(0.0, center - half), successes == trials ? 1.0 : std::min(1.0, center + half)};
}

void CellTally::add(const CellTally& o)
{
    observations += o.observations;
    spanning += o.spanning;
    originEvents += o.originEvents;
    originEventsDiscrete += o.originEventsDiscrete;
    implicationViolations += o.implicationViolations;
    sumDensity += o.sumDensity;
    sumLargestFraction += o.sumLargestFraction;
    moves.sweeps += o.moves.sweeps;
    for (std::size_t k = 0; k < 3; ++k) {
        moves.proposed[k] += o.moves.proposed[k];
        moves.accepted[k] += o.moves.accepted[k];
    }
}

SweepRow makeRow(double z, const std::string& seed, std::uint64_t sweeps, const CellTally& t, double area)
{
    SweepRow row;
    row.z = z;
    row.seed = seed;
    row.sweeps = sweeps;
    const double n = static_cast<double>(t.observations);
    if (t.observations > 0) {
        row.meanDensity = t.sumDensity / n / area;
        row.spanProb = static_cast<double>(t.spanning) / n;
        row.largestFrac = t.sumLargestFraction / n;
        row.originEventFreq = static_cast<double>(t.originEvents) / n;
        row.originEventDiscreteFreq = static_cast<double>(t.originEventsDiscrete) / n;
    }
    row.spanCI = wilsonInterval(t.spanning, t.observations);
    row.insertAccept = t.moves.acceptance(MoveKind::Insert);
    row.deleteAccept = t.moves.acceptance(MoveKind::Delete);
    row.translateAccept = t.moves.acceptance(MoveKind::Translate);
    return row;
}

std::size_t SweepResult::failedCells() const
{
    return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](const SweepCell& c) { return c.failed(); }));
}

CellTally runPercolationCell(const RunConfig& config, double z, std::uint64_t seed)
{
    ModelParams params = config.params;
    params.z = z;
    ChainState state = initChain(params, config.boundaryCondition(), seed, config.samplerOptions());
    const auto torus = state.torus();
    CellTally t;
    runSweeps(state, config.sweepPlan(), [&](const Snapshot& s) {
        const auto obs = observe(s.points, params, torus);
        ++t.observations;
        t.spanning += obs.spans() ? 1 : 0;
        t.originEvents += obs.originEvent ? 1 : 0;
        t.originEventsDiscrete += obs.originEventDiscrete ? 1 : 0;
        t.implicationViolations += (obs.originEventDiscrete && !obs.originEvent) ? 1 : 0;
        t.sumDensity += static_cast<double>(s.points.size());
        t.sumLargestFraction += obs.largestClusterFraction;
    });
    checkHardCore(state);
    t.moves = state.stats;
    return t;
}

SweepResult runPercolationSweep(const RunConfig& config, const RunOptions& options)
{
    config.validate();
    const auto grid = config.zGrid();
    SweepResult result;
    for (std::size_t zi = 0; zi < grid.size(); ++zi)
        for (std::size_t rep = 0; rep < config.replicas; ++rep)
            result.cells.push_back({zi, rep, grid[zi], deriveSeed(config.seed, zi, rep), {}, {}});

    Log log(options.log);
    parallelFor(result.cells.size(), config.jobs, [&](std::size_t k) {
        SweepCell& cell = result.cells[k];
        const auto path = cellPath(config, cell.zIndex, cell.replica);
        const std::string fingerprint = cellFingerprint(config, cell.z, cell.seed);
        if (options.resume && options.writeFiles && std::filesystem::exists(path)) {
            try {
                const auto j = nlohmann::json::parse(readFile(path));
                if (j.at("fingerprint") == fingerprint) {
                    cell.tally = tallyFromJson(j.at("tally"));
                    log("cell z=" + exact(cell.z) + " replica=" + std::to_string(cell.replica) + ": resumed");
                    return;
                }
            } catch (const std::exception&) {
                // unreadable cell file: recompute
            }
        }
        try {
            cell.tally = runPercolationCell(config, cell.z, cell.seed);
            if (cell.tally.implicationViolations > 0)
                throw std::logic_error("discrete origin event observed without the continuum origin event");
        } catch (const std::exception& e) {
            cell.error = e.what();
        }
        if (options.writeFiles && !cell.failed()) {
            nlohmann::json j{{"fingerprint", fingerprint}, {"tally", tallyToJson(cell.tally)}};
            writeFileAtomic(path, j.dump(1) + "\n");
        }
        log("cell z=" + exact(cell.z) + " replica=" + std::to_string(cell.replica) +
            (cell.failed() ? ": FAILED " + cell.error : ": done"));
    });

    const double area = config.params.boxArea();
    for (std::size_t zi = 0; zi < grid.size(); ++zi) {
        CellTally all;
        std::size_t ok = 0;
        for (const auto& cell : result.cells) {
            if (cell.zIndex != zi || cell.failed())
                continue;
            result.rows.push_back(makeRow(cell.z, std::to_string(cell.seed), config.sweeps, cell.tally, area));
            all.add(cell.tally);
            ++ok;
        }
        if (ok > 0)
            result.rows.push_back(makeRow(grid[zi], "all", config.sweeps, all, area));
    }

    if (options.writeFiles) {
        std::ostringstream csv;
        writeSweepCsv(csv, result);
        writeFileAtomic(std::filesystem::path(config.out) / "perc_sweep.csv", csv.str());
        std::ostringstream failures;
        failures << "z,replica,seed,error\n";
        for (const auto& cell : result.cells)
            if (cell.failed())
                failures << exact(cell.z) << ',' << cell.replica << ',' << cell.seed << ",\"" << cell.error << "\"\n";
        writeFileAtomic(std::filesystem::path(config.out) / "failures.csv", failures.str());
    }
    return result;
}

void writeSweepCsv(std::ostream& os, const SweepResult& result)
{
    os << "schemaVersion,z,seed,sweeps,meanDensity,spanProb,spanCI_lo,spanCI_hi,largestFrac,originEventFreq,"
          "originEventDiscreteFreq,insertAccept,deleteAccept,translateAccept\n";
    for (const auto& r : result.rows)
        os << kSweepSchemaVersion << ',' << exact(r.z) << ',' << r.seed << ',' << r.sweeps << ','
           << exact(r.meanDensity) << ',' << exact(r.spanProb) << ',' << exact(r.spanCI.lo) << ','
           << exact(r.spanCI.hi) << ',' << exact(r.largestFrac) << ',' << exact(r.originEventFreq) << ','
           << exact(r.originEventDiscreteFreq) << ',' << exact(r.insertAccept) << ',' << exact(r.deleteAccept)
           << ',' << exact(r.translateAccept) << '\n';
}

CensusReport runContourCensus(const RunConfig& config, const RunOptions& options)
{
    config.validate();
    CensusOptions copts;
    copts.verifyLemma1 = config.verifyLemma1;
    std::vector<CensusAccumulator> parts(config.replicas, CensusAccumulator(config.params, copts));
    std::vector<std::string> errors(config.replicas);
    Log log(options.log);
    parallelFor(config.replicas, config.jobs, [&](std::size_t rep) {
        try {
            ChainState state = initChain(config.params, config.boundaryCondition(), deriveSeed(config.seed, 0, rep),
                                         config.samplerOptions());
            runSweeps(state, config.sweepPlan(), [&](const Snapshot& s) { parts[rep].add(s.points); });
            checkHardCore(state);
            log("census replica " + std::to_string(rep) + ": done");
        } catch (const std::exception& e) {
            errors[rep] = e.what();
            parts[rep] = CensusAccumulator(config.params, copts);
            log("census replica " + std::to_string(rep) + ": FAILED " + e.what());
        }
    });
    CensusAccumulator total(config.params, copts);
    for (const auto& p : parts)
        total.merge(p);
    CensusReport report = total.report();

    if (options.writeFiles) {
        const std::filesystem::path out(config.out);
        std::ostringstream csv, keys;
        writeCensusCsv(csv, report);
        writeCensusKeysCsv(keys, report);
        auto j = censusToJson(report);
        j["failedReplicas"] = nlohmann::json::array();
        for (std::size_t rep = 0; rep < errors.size(); ++rep)
            if (!errors[rep].empty())
                j["failedReplicas"].push_back({{"replica", rep}, {"error", errors[rep]}});
        writeFileAtomic(out / "census.csv", csv.str());
        writeFileAtomic(out / "census_keys.csv", keys.str());
        writeFileAtomic(out / "census.json", j.dump(1) + "\n");
    }
    for (const auto& e : errors)
        if (!e.empty())
            throw Error("census replica failed: " + e);
    return report;
}

MoveStats runSample(const RunConfig& config, const RunOptions& options)
{
    config.validate();
    const std::filesystem::path out(config.out);
    std::filesystem::create_directories(out);
    const auto ckpt = out / "chain.ckpt";
    const bool binary = config.snapshotFormat == "binary";
    const bool none = config.snapshotFormat == "none";
    const auto snapPath = out / (binary ? "snapshots.bin" : "snapshots.csv");
    const SweepPlan full = config.sweepPlan();

    ChainState state = [&] {
        if (!options.resume)
            return initChain(config.params, config.boundaryCondition(), deriveSeed(config.seed, 0, 0),
                             config.samplerOptions());
        CheckpointExtras extras;
        ChainState s = loadCheckpoint(ckpt, &extras);
        if (!none) {
            const auto it = extras.find("snapshotBytes");
            if (it == extras.end())
                throw CorruptCheckpoint("checkpoint lacks the snapshot offset");
            std::filesystem::resize_file(snapPath, it->second);
        }
        return s;
    }();

    std::ofstream snaps;
    if (!none) {
        snaps.open(snapPath, std::ios::binary | (options.resume ? std::ios::app : std::ios::trunc));
        if (!snaps)
            throw Error("cannot open " + snapPath.string());
        if (!options.resume && !binary)
            writeSnapshotCsvHeader(snaps);
    }
    auto emit = [&](const Snapshot& s) {
        if (none)
            return;
        if (binary)
            writeFrame(snaps, s);
        else
            writeSnapshotCsv(snaps, s);
    };

    while (state.stats.sweeps < full.sweeps) {
        SweepPlan chunk = full;
        const std::uint64_t left = full.sweeps - state.stats.sweeps;
        chunk.sweeps = config.checkpointEvery > 0 ? std::min(left, config.checkpointEvery) : left;
        runSweeps(state, chunk, emit);
        if (config.checkpointEvery > 0) {
            CheckpointExtras extras;
            if (!none) {
                snaps.flush();
                extras["snapshotBytes"] = static_cast<std::uint64_t>(std::filesystem::file_size(snapPath));
            }
            saveCheckpoint(ckpt, state, extras);
            if (options.log)
                *options.log << "checkpoint at sweep " << state.stats.sweeps << '\n';
        }
    }
    checkHardCore(state);
    snaps.close();

    nlohmann::json stats{{"sweeps", state.stats.sweeps},
                         {"finalN", state.size()},
                         {"insertAccept", state.stats.acceptance(MoveKind::Insert)},
                         {"deleteAccept", state.stats.acceptance(MoveKind::Delete)},
                         {"translateAccept", state.stats.acceptance(MoveKind::Translate)}};
    writeFileAtomic(out / "sample_stats.json", stats.dump(1) + "\n");
    return state.stats;
}

std::vector<OracleRow> runSmallBoxOracle(const RunConfig& config, PartitionOracle* oracleOut)
{
    config.validate();
    OracleOptions o;
    o.samplesPerN = config.oracleSamples;
    o.shifts = static_cast<int>(config.oracleShifts);
    o.seed = config.seed;
    const PartitionOracle oracle =
        estimatePartitionOracle(config.params.boxSide(), config.params.r, static_cast<int>(config.oracleMaxN), o);
    std::vector<OracleRow> rows;
    for (double z : config.zGrid()) {
        OracleRow row;
        row.z = z;
        try {
            row.probabilities = exactSmallBoxDistribution(oracle, z);
        } catch (const TruncationError& e) {
            row.error = e.what();
        }
        rows.push_back(row);
    }
    if (oracleOut)
        *oracleOut = oracle;
    return rows;
}

std::vector<EnumBoundsRow> runEnumBounds(const RunConfig& config, SmallContourCounts* countsOut)
{
    config.validate();
    const auto counts = enumerateSmallContours(static_cast<int>(config.enumKmax), config.params, config.enumCap);
    const auto constants = computeConstants(config.params);
    std::vector<EnumBoundsRow> rows;
    for (std::size_t K = 1; K < counts.counts.size(); ++K) {
        const auto b = lemma4Bound(K, config.params, constants);
        rows.push_back({K, counts.counts[K], b.value, b.log});
    }
    if (countsOut)
        *countsOut = counts;
    return rows;
}

} // namespace hdperc
