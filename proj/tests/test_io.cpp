#include "hdperc/census.hpp"
#include "hdperc/checkpoint.hpp"
#include "hdperc/errors.hpp"
#include "hdperc/run_config.hpp"
#include "hdperc/snapshot_io.hpp"
#include "hdperc/sweep.hpp"

#include <doctest.h>

#include <filesystem>
#include <sstream>

using namespace hdperc;

namespace {

std::filesystem::path scratch(const std::string& name)
{
    const auto p = std::filesystem::temp_directory_path() / ("hdperc_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

ChainState busyChain(std::uint64_t seed)
{
    ModelParams p;
    p.z = 1.5;
    p.boxHalfWidth = 4.0;
    ChainState s = initChain(p, BoundaryCondition::empty(), seed);
    runSweeps(s, {50, 30, 1000, 0}, [](const Snapshot&) {});
    return s;
}

} // namespace

TEST_CASE("binary frames round trip exactly")
{
    std::stringstream buf;
    const Snapshot a{7, {{0.1, -0.2}, {1e-300, 3.5}}};
    const Snapshot b{8, {}};
    writeFrame(buf, a);
    writeFrame(buf, b);
    const std::string bytes = buf.str();
    CHECK(bytes.substr(0, 4) == "HDPC");
    CHECK(bytes.size() == 2 * (4 + 4 + 8 + 4) + 2 * 16);
    const auto back = readFrames(buf);
    REQUIRE(back.size() == 2);
    CHECK(back[0].sweep == 7);
    CHECK(back[0].points == a.points);
    CHECK(back[1].points.empty());

    std::stringstream cut(bytes.substr(0, bytes.size() - 40));
    CHECK_THROWS_AS(readFrames(cut), Error);
    std::stringstream junk("XXXX0000");
    CHECK_THROWS_AS(readFrame(junk), Error);
}

TEST_CASE("checkpoint round trip continues the same trajectory")
{
    ChainState s = busyChain(5);
    const std::string text = serializeCheckpoint(s, {{"offset", 123}});
    CheckpointExtras extras;
    ChainState r = deserializeCheckpoint(text, &extras);
    CHECK(extras.at("offset") == 123);
    CHECK(r.size() == s.size());
    CHECK(std::equal(r.config().begin(), r.config().end(), s.config().begin()));
    CHECK(r.stats.sweeps == s.stats.sweeps);
    const auto a = runSweeps(s, {40, 30, 5, 0});
    const auto b = runSweeps(r, {40, 30, 5, 0});
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k)
        CHECK(a[k].points == b[k].points);
    CHECK(serializeCheckpoint(s) == serializeCheckpoint(r));
}

TEST_CASE("damaged or foreign checkpoints are rejected")
{
    const std::string text = serializeCheckpoint(busyChain(6));
    CHECK_THROWS_AS(deserializeCheckpoint(text.substr(0, text.size() / 2)), CorruptCheckpoint);
    CHECK_THROWS_AS(deserializeCheckpoint(""), CorruptCheckpoint);
    std::string flipped = text;
    flipped[text.size() / 2] = flipped[text.size() / 2] == '1' ? '2' : '1';
    CHECK_THROWS_AS(deserializeCheckpoint(flipped), CorruptCheckpoint);
    std::string future = text;
    future.replace(future.find(" 1\n"), 3, " 2\n");
    CHECK_THROWS_AS(deserializeCheckpoint(future), VersionMismatch);
}

TEST_CASE("config parsing")
{
    const RunConfig d = parseConfig("");
    CHECK(d.params.r == 0.5);
    CHECK(d.params.L == 2.1);
    CHECK(d.zGrid() == std::vector<double>{1.0});
    CHECK(d.jobs == 1);

    try {
        parseConfig("r = 0.5\nL = 1.5\n");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("L > 3r") != std::string::npos);
    }
    try {
        parseConfig("r = 0.5\n  bogus = 3\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 3);
    }
    try {
        parseConfig("# comment\nz = abc\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 5);
    }
    CHECK_THROWS_AS(parseConfig("z 3\n"), ParseError);
    CHECK_THROWS_AS(parseConfig("z = 1\nz = 2\n"), ParseError);
    CHECK_THROWS_AS(parseConfig("epsilon = 0.2\n"), ValidationError);

    const RunConfig o = parseConfig("z_min = 1\nz_max = 3\nz_steps = 3\n", {{"z_max", "5"}});
    CHECK(o.zGrid() == std::vector<double>{1.0, 3.0, 5.0});
    const RunConfig lg = parseConfig("z_min = 1\nz_max = 100\nz_steps = 3\nz_scale = log\n");
    CHECK(lg.zGrid()[1] == doctest::Approx(10.0));
    CHECK(parseConfig("z_steps = 0\n").zGrid().empty());
    CHECK_THROWS_AS(parseConfig("", {{"nope", "1"}}), ValidationError);

    // Rendering and reparsing is the identity.
    const RunConfig c = parseConfig("r = 0.5\nL = 1.6\ndelta = 0.03\nepsilon = 0.01\nboundary = periodic\nseed = 99\n");
    CHECK(toText(parseConfig(toText(c))) == toText(c));
    CHECK(configKeys().size() == 29);
}

TEST_CASE("wilson interval")
{
    const auto a = wilsonInterval(0, 10);
    CHECK(a.lo == 0.0);
    CHECK(a.hi == doctest::Approx(0.2775).epsilon(1e-3));
    const auto b = wilsonInterval(5, 10);
    CHECK(b.lo == doctest::Approx(0.2366).epsilon(1e-3));
    CHECK(b.hi == doctest::Approx(0.7634).epsilon(1e-3));
    const auto e = wilsonInterval(0, 0);
    CHECK(e.lo == 0.0);
    CHECK(e.hi == 1.0);
}

TEST_CASE("census edge cases")
{
    ModelParams p;
    const std::vector<std::vector<Point>> none;
    const auto r0 = contourCensus(none, p);
    CHECK(r0.snapshots == 0);
    CHECK(r0.rows.empty());
    const std::vector<std::vector<Point>> empties(5);
    const auto r1 = contourCensus(empties, p);
    CHECK(r1.snapshots == 5);
    CHECK(r1.contours == 0);
    CHECK(r1.rows.empty());
    // One isolated point at the origin: a size-one contour around the origin every time.
    const std::vector<std::vector<Point>> single(4, std::vector<Point>{{0.01, 0.02}});
    const auto r2 = contourCensus(single, p, {true});
    REQUIRE(r2.rows.size() == 1);
    CHECK(r2.rows[0].empiricalFreq == 1.0);
    CHECK(r2.rows[0].distinctKeys == 1);
    CHECK(r2.rows[0].lemma3Vacuous);
    CHECK(r2.lemma1.contours == 4);
    CHECK(r2.lemma1.ok());
    std::ostringstream csv;
    writeCensusCsv(csv, r2);
    CHECK(csv.str().rfind("schemaVersion,K,empiricalCount,empiricalFreq,lemma3Bound,distinctKeys,lemma4Bound", 0) == 0);

    // Merging equals accumulating in one pass.
    CensusAccumulator a(p), b(p), all(p);
    a.add(single[0]);
    b.add(empties[0]);
    all.add(single[0]);
    all.add(empties[0]);
    a.merge(b);
    CHECK(censusToJson(a.report()).dump() == censusToJson(all.report()).dump());
}

TEST_CASE("percolation sweep is deterministic and resumable")
{
    const auto dir = scratch("sweep");
    const std::string text = "r = 0.5\nL = 1.6\ndelta = 0.03\nepsilon = 0.01\nbox_half_width = 4\nboundary = periodic\n"
                             "z_min = 0.5\nz_max = 2\nz_steps = 2\nreplicas = 2\nsweeps = 40\nburn_in = 10\n"
                             "sample_every = 5\nseed = 7\n";
    RunConfig c = parseConfig(text, {{"out", (dir / "a").string()}});
    const auto ra = runPercolationSweep(c);
    CHECK(ra.failedCells() == 0);
    CHECK(ra.rows.size() == 6);
    CHECK(ra.rows[2].seed == "all");
    c.jobs = 3;
    c.out = (dir / "b").string();
    runPercolationSweep(c);
    const std::string a = readFile(dir / "a" / "perc_sweep.csv");
    CHECK(a == readFile(dir / "b" / "perc_sweep.csv"));
    CHECK(a.rfind("schemaVersion,z,seed,sweeps,meanDensity,spanProb,spanCI_lo,spanCI_hi,largestFrac,originEventFreq,"
                  "originEventDiscreteFreq,insertAccept,deleteAccept,translateAccept\n", 0) == 0);

    // Resume reuses finished cells and reproduces the table.
    std::filesystem::remove(dir / "b" / "cells" / "z1_r0.json");
    RunOptions resume;
    resume.resume = true;
    runPercolationSweep(c, resume);
    CHECK(readFile(dir / "b" / "perc_sweep.csv") == a);

    // Same cell twice gives the same tally.
    const auto t1 = runPercolationCell(c, 1.0, 3);
    const auto t2 = runPercolationCell(c, 1.0, 3);
    CHECK(t1.spanning == t2.spanning);
    CHECK(t1.sumDensity == t2.sumDensity);

    c.zSteps = 0;
    c.out = (dir / "c").string();
    CHECK(runPercolationSweep(c).rows.empty());
}

TEST_CASE("interrupted sampling resumes to identical snapshots")
{
    const auto dir = scratch("sample");
    for (const std::string format : {"binary", "csv"}) {
        const std::string text = "box_half_width = 4\nz = 1\nburn_in = 10\nsample_every = 3\ncheckpoint_every = 7\n"
                                 "snapshot_format = " + format + "\n";
        const RunConfig full = parseConfig(text, {{"out", (dir / ("full_" + format)).string()}, {"sweeps", "60"}});
        runSample(full);
        RunConfig part = parseConfig(text, {{"out", (dir / ("part_" + format)).string()}, {"sweeps", "25"}});
        runSample(part);
        RunConfig rest = part;
        rest.sweeps = 60;
        RunOptions o;
        o.resume = true;
        runSample(rest, o);
        const std::string name = format == "binary" ? "snapshots.bin" : "snapshots.csv";
        CHECK(readFile(dir / ("full_" + format) / name) == readFile(dir / ("part_" + format) / name));
        CHECK(readFile(dir / ("full_" + format) / "chain.ckpt") == readFile(dir / ("part_" + format) / "chain.ckpt"));
    }
}
