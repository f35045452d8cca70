#include "hdperc/errors.hpp"
#include "hdperc/run_config.hpp"
#include "hdperc/snapshot_io.hpp"
#include "hdperc/sweep.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

using namespace hdperc;

namespace {

struct Flags
{
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> jobs;
    std::optional<std::string> out;
    std::optional<std::string> zMin, zMax, zSteps, sweeps, box, z;
    std::vector<std::string> set;
    bool resume = false;
    bool quiet = false;
};

void addCommon(CLI::App* cmd, Flags& f)
{
    cmd->add_option("--config", f.config, "key = value config file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", f.seed, "master seed");
    cmd->add_option("--jobs", f.jobs, "concurrent chains");
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_option("--z-min", f.zMin, "first activity of the grid");
    cmd->add_option("--z-max", f.zMax, "last activity of the grid");
    cmd->add_option("--z-steps", f.zSteps, "number of grid activities");
    cmd->add_option("--sweeps", f.sweeps, "sweeps after burn-in");
    cmd->add_option("--box", f.box, "box half-width n");
    cmd->add_option("--z", f.z, "activity for single-z commands");
    cmd->add_option("--set", f.set, "extra override, key=value (repeatable)");
    cmd->add_flag("--resume", f.resume, "continue from files left in the output directory");
    cmd->add_flag("--quiet", f.quiet, "no progress lines on stderr");
}

RunConfig load(const Flags& f)
{
    std::map<std::string, std::string> ov;
    for (const auto& kv : f.set) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw ValidationError("--set expects key=value, got '" + kv + "'");
        ov[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    if (f.seed)
        ov["seed"] = std::to_string(*f.seed);
    if (f.jobs)
        ov["jobs"] = std::to_string(*f.jobs);
    if (f.out)
        ov["out"] = *f.out;
    if (f.zMin)
        ov["z_min"] = *f.zMin;
    if (f.zMax)
        ov["z_max"] = *f.zMax;
    if (f.zSteps)
        ov["z_steps"] = *f.zSteps;
    if (f.sweeps)
        ov["sweeps"] = *f.sweeps;
    if (f.box)
        ov["box_half_width"] = *f.box;
    if (f.z)
        ov["z"] = *f.z;
    const std::string text = f.config.empty() ? std::string() : readFile(f.config);
    return parseConfig(text, ov);
}

std::string utcNow()
{
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

// Timestamps live only here so that the data files stay reproducible.
void writeMeta(const RunConfig& c, const std::string& command, const std::string& started, int status)
{
    nlohmann::json j{{"command", command},
                     {"startedAt", started},
                     {"finishedAt", utcNow()},
                     {"exitStatus", status},
                     {"config", toText(c)}};
    writeFileAtomic(std::filesystem::path(c.out) / "run_meta.json", j.dump(1) + "\n");
}

std::string num(double d)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    return buf;
}

int cmdSample(const RunConfig& c, const RunOptions& o)
{
    const auto stats = runSample(c, o);
    std::cout << "sweeps " << stats.sweeps << "  insert " << stats.acceptance(MoveKind::Insert) << "  delete "
              << stats.acceptance(MoveKind::Delete) << "  translate " << stats.acceptance(MoveKind::Translate) << '\n';
    return 0;
}

int cmdSweep(const RunConfig& c, const RunOptions& o)
{
    const auto res = runPercolationSweep(c, o);
    std::cout << std::setw(12) << "z" << std::setw(10) << "density" << std::setw(10) << "span" << std::setw(20)
              << "95% CI" << std::setw(10) << "largest" << '\n';
    for (const auto& r : res.rows) {
        if (r.seed != "all")
            continue;
        std::cout << std::setw(12) << r.z << std::setw(10) << std::setprecision(4) << r.meanDensity << std::setw(10)
                  << r.spanProb << "    [" << std::setw(6) << r.spanCI.lo << ", " << std::setw(6) << r.spanCI.hi
                  << "]" << std::setw(10) << r.largestFrac << '\n';
    }
    if (res.failedCells() > 0) {
        std::cerr << res.failedCells() << " cell(s) failed; see failures.csv\n";
        return 3;
    }
    return 0;
}

int reportLemma1(const CensusReport& rep)
{
    if (!rep.verified)
        return 0;
    const auto& s = rep.lemma1;
    std::cout << "shift construction: " << s.passed << '/' << s.contours << " contours passed";
    if (s.contours > 0)
        std::cout << ", max arcs per center " << s.maxArcsPerCenter << ", max local midpoints "
                  << s.maxLocalMidpoints;
    std::cout << '\n';
    for (const auto& [msg, n] : s.failures)
        std::cout << "  " << n << "x " << msg << '\n';
    return s.ok() ? 0 : 3;
}

int cmdCensus(const RunConfig& c, const RunOptions& o)
{
    const auto rep = runContourCensus(c, o);
    std::cout << rep.snapshots << " snapshots, " << rep.contours << " contours\n";
    for (const auto& r : rep.rows)
        std::cout << "K=" << r.K << "  freq " << r.empiricalFreq << "  keys " << r.distinctKeys << "  lemma3 "
                  << r.lemma3Bound << (r.lemma3Vacuous ? " (vacuous)" : "") << '\n';
    std::size_t over = 0;
    for (const auto& k : rep.keys)
        over += k.withinBound() ? 0 : 1;
    if (over > 0)
        std::cout << over << " key(s) above lemma3Bound + 3 SE\n";
    return reportLemma1(rep);
}

int cmdVerify(RunConfig c, const RunOptions& o)
{
    c.verifyLemma1 = true;
    const auto rep = runContourCensus(c, o);
    const int status = reportLemma1(rep);
    if (o.writeFiles)
        writeFileAtomic(std::filesystem::path(c.out) / "lemma1.json", censusToJson(rep)["lemma1"].dump(1) + "\n");
    return status;
}

int cmdEnum(const RunConfig& c)
{
    SmallContourCounts counts;
    const auto rows = runEnumBounds(c, &counts);
    std::ostringstream csv;
    csv << "schemaVersion,K,count,lemma4Bound,lemma4Log,withinBound\n";
    bool ok = true;
    for (const auto& r : rows) {
        const bool within = std::log(static_cast<double>(r.count)) <= r.lemma4Log || r.count == 0;
        ok = ok && within;
        csv << 1 << ',' << r.K << ',' << r.count << ',' << num(r.lemma4Bound) << ',' << num(r.lemma4Log) << ','
            << (within ? 1 : 0) << '\n';
        std::cout << "K=" << r.K << "  count " << r.count << "  bound " << r.lemma4Bound << (within ? "" : "  EXCEEDED")
                  << '\n';
    }
    std::cout << counts.shapes << " shapes, " << counts.degenerate << " tangent shapes skipped\n";
    writeFileAtomic(std::filesystem::path(c.out) / "enum_bounds.csv", csv.str());
    return ok ? 0 : 3;
}

int cmdOracle(const RunConfig& c)
{
    PartitionOracle oracle;
    const auto rows = runSmallBoxOracle(c, &oracle);
    std::ostringstream values, dist;
    values << "schemaVersion,k,value,stdError\n";
    for (std::size_t k = 0; k < oracle.values.size(); ++k)
        values << 1 << ',' << k << ',' << num(oracle.values[k]) << ',' << num(oracle.stdErrors[k]) << '\n';
    dist << "schemaVersion,z,k,probability\n";
    int status = 0;
    for (const auto& r : rows) {
        if (!r.error.empty()) {
            std::cerr << "z=" << r.z << ": " << r.error << '\n';
            status = 3;
            continue;
        }
        for (std::size_t k = 0; k < r.probabilities.size(); ++k)
            dist << 1 << ',' << num(r.z) << ',' << k << ',' << num(r.probabilities[k]) << '\n';
    }
    const std::filesystem::path out(c.out);
    writeFileAtomic(out / "oracle_values.csv", values.str());
    writeFileAtomic(out / "oracle_smallbox.csv", dist.str());
    std::cout << "packing bound " << oracle.packingBound << ", integrated up to N = " << oracle.maxN << '\n';
    return status;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Hard-disk Gibbs sampling, continuum percolation and contour statistics"};
    app.require_subcommand(0, 1);
    bool printDefaults = false;
    app.add_flag("--print-defaults", printDefaults, "print every config key with its default and exit");

    Flags flags;
    std::map<std::string, CLI::App*> cmds;
    for (const auto& [name, desc] : std::vector<std::pair<std::string, std::string>>{
             {"sample", "run one chain and write snapshots (with optional checkpoints)"},
             {"perc-sweep", "spanning statistics over a grid of activities"},
             {"contour-census", "contour statistics around the origin with bound columns"},
             {"verify-lemma1", "check the contour-shift construction on sampled contours"},
             {"enum-bounds", "exact small-contour counts against the counting bound"},
             {"oracle-smallbox", "particle-number distribution of a small box by integration"}}) {
        cmds[name] = app.add_subcommand(name, desc);
        addCommon(cmds[name], flags);
    }
    CLI11_PARSE(app, argc, argv);

    if (printDefaults) {
        for (const auto& k : configKeys())
            std::cout << "# " << k.doc << '\n' << k.name << " = " << k.defaultValue << '\n';
        return 0;
    }
    if (app.get_subcommands().empty()) {
        std::cout << app.help();
        return 0;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    RunConfig config;
    try {
        config = load(flags);
    } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }

    RunOptions options;
    options.resume = flags.resume;
    options.log = flags.quiet ? nullptr : &std::cerr;
    const std::string started = utcNow();
    int status = 1;
    try {
        std::filesystem::create_directories(config.out);
        if (command == "sample")
            status = cmdSample(config, options);
        else if (command == "perc-sweep")
            status = cmdSweep(config, options);
        else if (command == "contour-census")
            status = cmdCensus(config, options);
        else if (command == "verify-lemma1")
            status = cmdVerify(config, options);
        else if (command == "enum-bounds")
            status = cmdEnum(config);
        else
            status = cmdOracle(config);
    } catch (const std::exception& e) {
        std::cerr << command << ": " << e.what() << '\n';
        status = 1;
    }
    try {
        writeMeta(config, command, started, status);
    } catch (const std::exception& e) {
        std::cerr << "run_meta.json: " << e.what() << '\n';
    }
    return status;
}
