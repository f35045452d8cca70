#pragma once

#include "hdperc/contour.hpp"
#include "hdperc/geometry.hpp"
#include "hdperc/params.hpp"
#include "hdperc/peierls.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace hdperc {

inline constexpr int kCensusSchemaVersion = 1;

/// Aggregate over every contour the shift verifier saw.
struct Lemma1Summary
{
    std::uint64_t contours = 0;
    std::uint64_t passed = 0;
    std::uint64_t planInfeasible = 0;
    std::map<std::string, std::uint64_t> failures; //!< message -> occurrences
    std::size_t maxArcsPerCenter = 0;
    std::size_t maxLocalMidpoints = 0;
    double minInsertionSeparation = 0.0; //!< +inf until a plan with two insertion points is seen
    double minClearance = 0.0;

    Lemma1Summary();
    void add(const Lemma1Record& rec);
    void merge(const Lemma1Summary& other);
    bool ok() const { return passed == contours && planInfeasible == 0; }
};

struct CensusRow
{
    std::size_t K = 0;
    std::uint64_t empiricalCount = 0; //!< snapshots with some size-K contour around the origin
    double empiricalFreq = 0.0;
    double lemma3Bound = 0.0;
    bool lemma3Vacuous = false;
    std::uint64_t distinctKeys = 0;
    double lemma4Bound = 0.0;
    double lemma4Log = 0.0;
};

struct CensusKeyRow
{
    ContourKey key;
    std::size_t K = 0;
    std::uint64_t count = 0;
    double freq = 0.0;
    double stdError = 0.0; //!< binomial sqrt(p(1-p)/S)
    double lemma3Bound = 0.0;

    /// freq <= lemma3Bound + sigmas * stdError.
    bool withinBound(double sigmas = 3.0) const { return freq <= lemma3Bound + sigmas * stdError; }
};

struct CensusReport
{
    ModelParams params;
    std::uint64_t snapshots = 0;
    std::uint64_t contours = 0;      //!< finite-component contours extracted
    std::uint64_t degenerate = 0;    //!< components skipped for tangency
    std::uint64_t onBoundary = 0;    //!< origin on a contour
    std::vector<CensusRow> rows;     //!< K = 1 .. largest K seen around the origin
    std::vector<CensusKeyRow> keys;  //!< sorted by (K, key)
    bool verified = false;
    Lemma1Summary lemma1;
};

struct CensusOptions
{
    bool verifyLemma1 = false;
};

/// Mergeable census state; merging is associative and commutative.
class CensusAccumulator
{
  public:
    CensusAccumulator(const ModelParams& params, CensusOptions options = {});

    void add(std::span<const Point> config);
    void merge(const CensusAccumulator& other);
    CensusReport report() const;

  private:
    ModelParams params_;
    CensusOptions options_;
    PeierlsConstants constants_;
    std::uint64_t snapshots_ = 0;
    std::uint64_t contours_ = 0;
    std::uint64_t degenerate_ = 0;
    std::uint64_t onBoundary_ = 0;
    std::map<std::size_t, std::uint64_t> sizeEvents_;
    std::map<ContourKey, std::uint64_t> keyEvents_;
    Lemma1Summary lemma1_;
};

/// Contours of the finite components of every snapshot, tabulated around the origin.
CensusReport contourCensus(std::span<const std::vector<Point>> snapshots, const ModelParams& params,
                           CensusOptions options = {});

void writeCensusCsv(std::ostream& os, const CensusReport& report);
void writeCensusKeysCsv(std::ostream& os, const CensusReport& report);
nlohmann::json censusToJson(const CensusReport& report);

} // namespace hdperc
