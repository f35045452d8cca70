#include "hdperc/run_config.hpp"

#include "hdperc/errors.hpp"
#include "hdperc/snapshot_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>

namespace hdperc {

const std::vector<ConfigKey>& configKeys()
{
    static const std::vector<ConfigKey> keys{
        {"r", "0.5", "hard-core radius (length)"},
        {"L", "2.1", "connection diameter (length)"},
        {"delta", "0.2", "contour margin (length)"},
        {"epsilon", "0.09", "lattice pitch of the snapping map (length)"},
        {"z", "1", "activity for single-z runs (per unit area)"},
        {"box_half_width", "10", "n; the box is [-n, n]^2 (length)"},
        {"boundary", "empty", "empty or periodic"},
        {"exclusion", "true", "false samples the ideal gas"},
        {"max_disp", "0", "translation half-width (length); 0 selects r"},
        {"z_min", "1", "first activity of the sweep grid"},
        {"z_max", "1", "last activity of the sweep grid"},
        {"z_steps", "1", "number of grid activities; 0 runs nothing"},
        {"z_scale", "linear", "linear or log spacing of the grid"},
        {"sweeps", "1000", "sweeps per chain after burn-in"},
        {"burn_in", "200", "sweeps discarded before sampling"},
        {"sample_every", "10", "sweeps between observations"},
        {"moves_per_sweep", "0", "moves per sweep; 0 selects ceil(area / (pi r^2))"},
        {"replicas", "1", "independent chains per activity"},
        {"seed", "1", "master seed (unsigned 64-bit)"},
        {"jobs", "1", "concurrent chains"},
        {"out", "out", "output directory"},
        {"snapshot_format", "binary", "binary, csv or none"},
        {"checkpoint_every", "0", "sweeps between chain checkpoints; 0 disables"},
        {"verify_lemma1", "true", "run the shift-construction verifier during a census"},
        {"oracle_samples", "1000000", "quasi-random points per particle number and shift"},
        {"oracle_shifts", "16", "random shifts of the quasi-random sequence"},
        {"oracle_max_n", "7", "largest particle number integrated by the oracle"},
        {"enum_kmax", "3", "largest contour size enumerated (1..3)"},
        {"enum_cap", "10000", "largest admissible number of lattice sites within 2R"},
    };
    return keys;
}

namespace {

struct Located
{
    std::string value;
    std::size_t line = 0;
    std::size_t column = 0;
};

[[noreturn]] void bad(const Located& v, const std::string& what)
{
    if (v.line == 0)
        throw ValidationError(what);
    throw ParseError(what, v.line, v.column);
}

double toDouble(const Located& v, const std::string& key)
{
    double d = 0.0;
    const char* b = v.value.data();
    const char* e = b + v.value.size();
    const auto res = std::from_chars(b, e, d);
    if (res.ec != std::errc() || res.ptr != e || !std::isfinite(d))
        bad(v, key + ": expected a finite number, got '" + v.value + "'");
    return d;
}

std::uint64_t toUnsigned(const Located& v, const std::string& key)
{
    std::uint64_t u = 0;
    const char* b = v.value.data();
    const char* e = b + v.value.size();
    const auto res = std::from_chars(b, e, u);
    if (res.ec != std::errc() || res.ptr != e)
        bad(v, key + ": expected a nonnegative integer, got '" + v.value + "'");
    return u;
}

bool toBool(const Located& v, const std::string& key)
{
    if (v.value == "true" || v.value == "1" || v.value == "yes")
        return true;
    if (v.value == "false" || v.value == "0" || v.value == "no")
        return false;
    bad(v, key + ": expected true or false, got '" + v.value + "'");
}

std::string trim(const std::string& s, std::size_t& offset)
{
    std::size_t b = 0;
    while (b < s.size() && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r'))
        ++b;
    std::size_t e = s.size();
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r'))
        --e;
    offset = b;
    return s.substr(b, e - b);
}

using Setter = std::function<void(RunConfig&, const Located&)>;

const std::map<std::string, Setter>& setters()
{
    static const std::map<std::string, Setter> m{
        {"r", [](RunConfig& c, const Located& v) { c.params.r = toDouble(v, "r"); }},
        {"L", [](RunConfig& c, const Located& v) { c.params.L = toDouble(v, "L"); }},
        {"delta", [](RunConfig& c, const Located& v) { c.params.delta = toDouble(v, "delta"); }},
        {"epsilon", [](RunConfig& c, const Located& v) { c.params.epsilon = toDouble(v, "epsilon"); }},
        {"z", [](RunConfig& c, const Located& v) { c.params.z = toDouble(v, "z"); }},
        {"box_half_width", [](RunConfig& c, const Located& v) { c.params.boxHalfWidth = toDouble(v, "box_half_width"); }},
        {"boundary",
         [](RunConfig& c, const Located& v) {
             if (v.value == "empty")
                 c.boundary = BoundaryKind::Empty;
             else if (v.value == "periodic")
                 c.boundary = BoundaryKind::Periodic;
             else
                 bad(v, "boundary: expected empty or periodic, got '" + v.value + "'");
         }},
        {"exclusion", [](RunConfig& c, const Located& v) { c.exclusion = toBool(v, "exclusion"); }},
        {"max_disp", [](RunConfig& c, const Located& v) { c.maxDisp = toDouble(v, "max_disp"); }},
        {"z_min", [](RunConfig& c, const Located& v) { c.zMin = toDouble(v, "z_min"); }},
        {"z_max", [](RunConfig& c, const Located& v) { c.zMax = toDouble(v, "z_max"); }},
        {"z_steps", [](RunConfig& c, const Located& v) { c.zSteps = toUnsigned(v, "z_steps"); }},
        {"z_scale",
         [](RunConfig& c, const Located& v) {
             if (v.value == "linear")
                 c.zLog = false;
             else if (v.value == "log")
                 c.zLog = true;
             else
                 bad(v, "z_scale: expected linear or log, got '" + v.value + "'");
         }},
        {"sweeps", [](RunConfig& c, const Located& v) { c.sweeps = toUnsigned(v, "sweeps"); }},
        {"burn_in", [](RunConfig& c, const Located& v) { c.burnIn = toUnsigned(v, "burn_in"); }},
        {"sample_every", [](RunConfig& c, const Located& v) { c.sampleEvery = toUnsigned(v, "sample_every"); }},
        {"moves_per_sweep", [](RunConfig& c, const Located& v) { c.movesPerSweep = toUnsigned(v, "moves_per_sweep"); }},
        {"replicas", [](RunConfig& c, const Located& v) { c.replicas = toUnsigned(v, "replicas"); }},
        {"seed", [](RunConfig& c, const Located& v) { c.seed = toUnsigned(v, "seed"); }},
        {"jobs", [](RunConfig& c, const Located& v) { c.jobs = toUnsigned(v, "jobs"); }},
        {"out",
         [](RunConfig& c, const Located& v) {
             if (v.value.empty())
                 bad(v, "out: empty path");
             c.out = v.value;
         }},
        {"snapshot_format",
         [](RunConfig& c, const Located& v) {
             if (v.value != "binary" && v.value != "csv" && v.value != "none")
                 bad(v, "snapshot_format: expected binary, csv or none, got '" + v.value + "'");
             c.snapshotFormat = v.value;
         }},
        {"checkpoint_every", [](RunConfig& c, const Located& v) { c.checkpointEvery = toUnsigned(v, "checkpoint_every"); }},
        {"verify_lemma1", [](RunConfig& c, const Located& v) { c.verifyLemma1 = toBool(v, "verify_lemma1"); }},
        {"oracle_samples", [](RunConfig& c, const Located& v) { c.oracleSamples = toUnsigned(v, "oracle_samples"); }},
        {"oracle_shifts", [](RunConfig& c, const Located& v) { c.oracleShifts = toUnsigned(v, "oracle_shifts"); }},
        {"oracle_max_n", [](RunConfig& c, const Located& v) { c.oracleMaxN = toUnsigned(v, "oracle_max_n"); }},
        {"enum_kmax", [](RunConfig& c, const Located& v) { c.enumKmax = toUnsigned(v, "enum_kmax"); }},
        {"enum_cap", [](RunConfig& c, const Located& v) { c.enumCap = toUnsigned(v, "enum_cap"); }},
    };
    return m;
}

} // namespace

std::vector<double> RunConfig::zGrid() const
{
    std::vector<double> z;
    if (zSteps == 0)
        return z;
    if (zSteps == 1)
        return {zMin};
    for (std::uint64_t k = 0; k < zSteps; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(zSteps - 1);
        z.push_back(zLog ? zMin * std::pow(zMax / zMin, t) : zMin + t * (zMax - zMin));
    }
    z.back() = zMax;
    return z;
}

SweepPlan RunConfig::sweepPlan() const
{
    SweepPlan p;
    p.sweeps = burnIn + sweeps;
    p.burnIn = burnIn;
    p.sampleEvery = sampleEvery;
    p.movesPerSweep = movesPerSweep;
    if (p.movesPerSweep == 0)
        p.movesPerSweep = std::max<std::uint64_t>(
            1, static_cast<std::uint64_t>(std::ceil(params.boxArea() / (std::numbers::pi * params.r * params.r))));
    return p;
}

SamplerOptions RunConfig::samplerOptions() const
{
    SamplerOptions o;
    o.exclusion = exclusion;
    o.maxDisp = maxDisp;
    o.checkEverySweep = false;
    return o;
}

BoundaryCondition RunConfig::boundaryCondition() const
{
    return boundary == BoundaryKind::Periodic ? BoundaryCondition::periodic() : BoundaryCondition::empty();
}

void RunConfig::validate() const
{
    try {
        params.validate();
    } catch (const InvalidParams& e) {
        throw ValidationError(e.what());
    }
    auto require = [](bool ok, const char* what) {
        if (!ok)
            throw ValidationError(std::string("constraint violated: ") + what);
    };
    require(maxDisp >= 0.0, "max_disp >= 0");
    require(zMin >= 0.0 && zMax >= 0.0, "activities z_min, z_max >= 0");
    require(zMin <= zMax, "z_min <= z_max");
    require(!zLog || zSteps < 2 || zMin > 0.0, "z_min > 0 for a log-spaced grid");
    require(sampleEvery >= 1, "sample_every >= 1");
    require(replicas >= 1, "replicas >= 1");
    require(jobs >= 1, "jobs >= 1");
    require(oracleShifts >= 2, "oracle_shifts >= 2");
    require(oracleSamples >= 1, "oracle_samples >= 1");
    require(enumKmax >= 1 && enumKmax <= 3, "1 <= enum_kmax <= 3");
    require(boundary != BoundaryKind::Periodic ||
                params.boxSide() > 2.0 * std::max(params.L, 2.0 * params.componentRadius()),
            "periodic box side > 2 max(L, 2R)");
}

RunConfig parseConfig(const std::string& text, const std::map<std::string, std::string>& overrides)
{
    RunConfig c;
    const auto& set = setters();
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string raw;
    std::size_t lineNo = 0;
    while (std::getline(in, raw)) {
        ++lineNo;
        const auto hash = raw.find('#');
        const std::string line = hash == std::string::npos ? raw : raw.substr(0, hash);
        std::size_t lead = 0;
        if (trim(line, lead).empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected 'key = value'", lineNo, lead + 1);
        std::size_t keyOff = 0, valOff = 0;
        const std::string key = trim(line.substr(0, eq), keyOff);
        const std::string value = trim(line.substr(eq + 1), valOff);
        if (key.empty())
            throw ParseError("missing key before '='", lineNo, eq + 1);
        const auto it = set.find(key);
        if (it == set.end())
            throw ParseError("unknown key '" + key + "'", lineNo, keyOff + 1);
        if (!seen.insert(key).second)
            throw ParseError("repeated key '" + key + "'", lineNo, keyOff + 1);
        it->second(c, {value, lineNo, eq + 1 + valOff + 1});
    }
    for (const auto& [key, value] : overrides) {
        const auto it = set.find(key);
        if (it == set.end())
            throw ValidationError("unknown override key '" + key + "'");
        it->second(c, {value, 0, 0});
    }
    c.validate();
    return c;
}

RunConfig parseConfigFile(const std::filesystem::path& path, const std::map<std::string, std::string>& overrides)
{
    return parseConfig(readFile(path), overrides);
}

std::string toText(const RunConfig& c)
{
    auto num = [](double d) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", d);
        return std::string(buf);
    };
    std::ostringstream os;
    os << "r = " << num(c.params.r) << '\n'
       << "L = " << num(c.params.L) << '\n'
       << "delta = " << num(c.params.delta) << '\n'
       << "epsilon = " << num(c.params.epsilon) << '\n'
       << "z = " << num(c.params.z) << '\n'
       << "box_half_width = " << num(c.params.boxHalfWidth) << '\n'
       << "boundary = " << (c.boundary == BoundaryKind::Periodic ? "periodic" : "empty") << '\n'
       << "exclusion = " << (c.exclusion ? "true" : "false") << '\n'
       << "max_disp = " << num(c.maxDisp) << '\n'
       << "z_min = " << num(c.zMin) << '\n'
       << "z_max = " << num(c.zMax) << '\n'
       << "z_steps = " << c.zSteps << '\n'
       << "z_scale = " << (c.zLog ? "log" : "linear") << '\n'
       << "sweeps = " << c.sweeps << '\n'
       << "burn_in = " << c.burnIn << '\n'
       << "sample_every = " << c.sampleEvery << '\n'
       << "moves_per_sweep = " << c.movesPerSweep << '\n'
       << "replicas = " << c.replicas << '\n'
       << "seed = " << c.seed << '\n'
       << "jobs = " << c.jobs << '\n'
       << "out = " << c.out << '\n'
       << "snapshot_format = " << c.snapshotFormat << '\n'
       << "checkpoint_every = " << c.checkpointEvery << '\n'
       << "verify_lemma1 = " << (c.verifyLemma1 ? "true" : "false") << '\n'
       << "oracle_samples = " << c.oracleSamples << '\n'
       << "oracle_shifts = " << c.oracleShifts << '\n'
       << "oracle_max_n = " << c.oracleMaxN << '\n'
       << "enum_kmax = " << c.enumKmax << '\n'
       << "enum_cap = " << c.enumCap << '\n';
    return os.str();
}

} // namespace hdperc
