#include "hdperc/census.hpp"

#include "hdperc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <set>

namespace hdperc {

Lemma1Summary::Lemma1Summary()
    : minInsertionSeparation(std::numeric_limits<double>::infinity()),
      minClearance(std::numeric_limits<double>::infinity())
{
}

void Lemma1Summary::add(const Lemma1Record& rec)
{
    ++contours;
    if (rec.ok())
        ++passed;
    for (const auto& f : rec.failures)
        ++failures[f];
    maxArcsPerCenter = std::max(maxArcsPerCenter, rec.maxArcsPerCenter);
    maxLocalMidpoints = std::max(maxLocalMidpoints, rec.maxLocalMidpoints);
    minInsertionSeparation = std::min(minInsertionSeparation, rec.minInsertionSeparation);
    minClearance = std::min(minClearance, rec.minClearance);
}

void Lemma1Summary::merge(const Lemma1Summary& other)
{
    contours += other.contours;
    passed += other.passed;
    planInfeasible += other.planInfeasible;
    for (const auto& [msg, n] : other.failures)
        failures[msg] += n;
    maxArcsPerCenter = std::max(maxArcsPerCenter, other.maxArcsPerCenter);
    maxLocalMidpoints = std::max(maxLocalMidpoints, other.maxLocalMidpoints);
    minInsertionSeparation = std::min(minInsertionSeparation, other.minInsertionSeparation);
    minClearance = std::min(minClearance, other.minClearance);
}

CensusAccumulator::CensusAccumulator(const ModelParams& params, CensusOptions options)
    : params_(params), options_(options), constants_(computeConstants(params))
{
}

void CensusAccumulator::add(std::span<const Point> config)
{
    ++snapshots_;
    const auto comps = decomposeComponents(config, params_);
    std::set<std::size_t> sizes;
    std::set<ContourKey> keys;
    std::vector<Point> members;
    for (std::size_t c = 0; c < comps.count(); ++c) {
        if (!comps.finite[c])
            continue;
        members.clear();
        for (std::size_t i : comps.members[c])
            members.push_back(config[i]);
        Contour contour;
        try {
            contour = extractContour(members, params_);
        } catch (const DegenerateTangency&) {
            ++degenerate_;
            continue;
        }
        ++contours_;
        if (options_.verifyLemma1) {
            try {
                const auto plan = planShift(contour, constants_, params_);
                lemma1_.add(verifyLemma1(config, contour, plan, params_, constants_));
            } catch (const PlanInfeasible& e) {
                ++lemma1_.contours;
                ++lemma1_.planInfeasible;
                ++lemma1_.failures[e.what()];
            }
        }
        bool around = false;
        try {
            around = enclosesOrigin(contour);
        } catch (const OnBoundary&) {
            ++onBoundary_;
        }
        if (around) {
            sizes.insert(contour.size());
            keys.insert(canonicalKey(contour));
        }
    }
    for (std::size_t K : sizes)
        ++sizeEvents_[K];
    for (const auto& k : keys)
        ++keyEvents_[k];
}

void CensusAccumulator::merge(const CensusAccumulator& other)
{
    snapshots_ += other.snapshots_;
    contours_ += other.contours_;
    degenerate_ += other.degenerate_;
    onBoundary_ += other.onBoundary_;
    for (const auto& [K, n] : other.sizeEvents_)
        sizeEvents_[K] += n;
    for (const auto& [k, n] : other.keyEvents_)
        keyEvents_[k] += n;
    lemma1_.merge(other.lemma1_);
}

CensusReport CensusAccumulator::report() const
{
    CensusReport rep;
    rep.params = params_;
    rep.snapshots = snapshots_;
    rep.contours = contours_;
    rep.degenerate = degenerate_;
    rep.onBoundary = onBoundary_;
    rep.verified = options_.verifyLemma1;
    rep.lemma1 = lemma1_;
    if (snapshots_ == 0)
        return rep;
    const double S = static_cast<double>(snapshots_);

    std::map<std::size_t, std::uint64_t> distinct;
    for (const auto& [key, n] : keyEvents_) {
        CensusKeyRow row;
        row.key = key;
        row.K = key.size();
        row.count = n;
        row.freq = static_cast<double>(n) / S;
        row.stdError = std::sqrt(row.freq * (1.0 - row.freq) / S);
        row.lemma3Bound = lemma3Bound(row.K, params_, constants_).value;
        rep.keys.push_back(row);
        ++distinct[row.K];
    }
    std::sort(rep.keys.begin(), rep.keys.end(),
              [](const CensusKeyRow& a, const CensusKeyRow& b) { return std::tie(a.K, a.key) < std::tie(b.K, b.key); });

    const std::size_t maxK = sizeEvents_.empty() ? 0 : sizeEvents_.rbegin()->first;
    for (std::size_t K = 1; K <= maxK; ++K) {
        CensusRow row;
        row.K = K;
        const auto it = sizeEvents_.find(K);
        row.empiricalCount = it == sizeEvents_.end() ? 0 : it->second;
        row.empiricalFreq = static_cast<double>(row.empiricalCount) / S;
        const auto b3 = lemma3Bound(K, params_, constants_);
        row.lemma3Bound = b3.value;
        row.lemma3Vacuous = b3.vacuous;
        const auto d = distinct.find(K);
        row.distinctKeys = d == distinct.end() ? 0 : d->second;
        const auto b4 = lemma4Bound(K, params_, constants_);
        row.lemma4Bound = b4.value;
        row.lemma4Log = b4.log;
        rep.rows.push_back(row);
    }
    return rep;
}

CensusReport contourCensus(std::span<const std::vector<Point>> snapshots, const ModelParams& params,
                           CensusOptions options)
{
    CensusAccumulator acc(params, options);
    for (const auto& s : snapshots)
        acc.add(s);
    return acc.report();
}

void writeCensusCsv(std::ostream& os, const CensusReport& report)
{
    os << std::setprecision(17);
    os << "schemaVersion,K,empiricalCount,empiricalFreq,lemma3Bound,distinctKeys,lemma4Bound,lemma4Log,lemma3Vacuous\n";
    for (const auto& r : report.rows)
        os << kCensusSchemaVersion << ',' << r.K << ',' << r.empiricalCount << ',' << r.empiricalFreq << ','
           << r.lemma3Bound << ',' << r.distinctKeys << ',' << r.lemma4Bound << ',' << r.lemma4Log << ','
           << (r.lemma3Vacuous ? 1 : 0) << '\n';
}

void writeCensusKeysCsv(std::ostream& os, const CensusReport& report)
{
    os << std::setprecision(17);
    os << "schemaVersion,K,key,count,freq,stdError,lemma3Bound,withinBound\n";
    for (const auto& k : report.keys)
        os << kCensusSchemaVersion << ',' << k.K << ",\"" << k.key.str() << "\"," << k.count << ',' << k.freq << ','
           << k.stdError << ',' << k.lemma3Bound << ',' << (k.withinBound() ? 1 : 0) << '\n';
}

nlohmann::json censusToJson(const CensusReport& report)
{
    using nlohmann::json;
    json j;
    j["schemaVersion"] = kCensusSchemaVersion;
    j["params"] = {{"r", report.params.r},         {"L", report.params.L},
                   {"delta", report.params.delta}, {"epsilon", report.params.epsilon},
                   {"z", report.params.z},         {"boxHalfWidth", report.params.boxHalfWidth}};
    j["snapshots"] = report.snapshots;
    j["contours"] = report.contours;
    j["degenerate"] = report.degenerate;
    j["onBoundary"] = report.onBoundary;
    j["rows"] = json::array();
    for (const auto& r : report.rows)
        j["rows"].push_back({{"K", r.K},
                             {"empiricalCount", r.empiricalCount},
                             {"empiricalFreq", r.empiricalFreq},
                             {"lemma3Bound", r.lemma3Bound},
                             {"lemma3Vacuous", r.lemma3Vacuous},
                             {"distinctKeys", r.distinctKeys},
                             {"lemma4Bound", r.lemma4Bound},
                             {"lemma4Log", r.lemma4Log}});
    j["keys"] = json::array();
    for (const auto& k : report.keys)
        j["keys"].push_back({{"K", k.K},
                             {"key", k.key.str()},
                             {"count", k.count},
                             {"freq", k.freq},
                             {"stdError", k.stdError},
                             {"lemma3Bound", k.lemma3Bound},
                             {"withinBound", k.withinBound()}});
    if (report.verified) {
        const auto& s = report.lemma1;
        json failures = json::object();
        for (const auto& [msg, n] : s.failures)
            failures[msg] = n;
        j["lemma1"] = {{"contours", s.contours},
                       {"passed", s.passed},
                       {"planInfeasible", s.planInfeasible},
                       {"maxArcsPerCenter", s.maxArcsPerCenter},
                       {"maxLocalMidpoints", s.maxLocalMidpoints},
                       {"minInsertionSeparation", std::isfinite(s.minInsertionSeparation) ? json(s.minInsertionSeparation) : json(nullptr)},
                       {"minClearance", std::isfinite(s.minClearance) ? json(s.minClearance) : json(nullptr)},
                       {"failures", failures}};
    }
    return j;
}

} // namespace hdperc
