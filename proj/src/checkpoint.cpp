#include "hdperc/checkpoint.hpp"

#include "hdperc/errors.hpp"
#include "hdperc/snapshot_io.hpp"

#include <boost/crc.hpp>

#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace hdperc {

namespace {

constexpr const char* kMagic = "HDPC-CHECKPOINT";

std::uint32_t crc32(const std::string& s)
{
    boost::crc_32_type crc;
    crc.process_bytes(s.data(), s.size());
    return crc.checksum();
}

std::string hex(double d)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", d);
    return buf;
}

class Reader
{
  public:
    explicit Reader(const std::string& body) : in_(body) {}

    std::string word()
    {
        std::string w;
        if (!(in_ >> w))
            throw CorruptCheckpoint("checkpoint: unexpected end of data");
        return w;
    }
    void expect(const char* tag)
    {
        if (word() != tag)
            throw CorruptCheckpoint(std::string("checkpoint: expected '") + tag + "'");
    }
    double real()
    {
        const std::string w = word();
        char* end = nullptr;
        const double d = std::strtod(w.c_str(), &end);
        if (end != w.c_str() + w.size())
            throw CorruptCheckpoint("checkpoint: bad number '" + w + "'");
        return d;
    }
    std::uint64_t integer()
    {
        const std::string w = word();
        char* end = nullptr;
        const auto v = std::strtoull(w.c_str(), &end, 10);
        if (w.empty() || end != w.c_str() + w.size())
            throw CorruptCheckpoint("checkpoint: bad integer '" + w + "'");
        return v;
    }
    std::istream& stream() { return in_; }

  private:
    std::istringstream in_;
};

} // namespace

std::string serializeCheckpoint(const ChainState& s, const CheckpointExtras& extras)
{
    std::ostringstream os;
    const auto& p = s.params;
    os << kMagic << ' ' << kCheckpointVersion << '\n';
    os << "params " << hex(p.r) << ' ' << hex(p.L) << ' ' << hex(p.delta) << ' ' << hex(p.epsilon) << ' '
       << hex(p.z) << ' ' << hex(p.boxHalfWidth) << '\n';
    os << "boundary " << static_cast<int>(s.boundary.kind) << ' ' << s.boundary.fixed.size() << '\n';
    for (Point q : s.boundary.fixed)
        os << hex(q.x) << ' ' << hex(q.y) << '\n';
    const auto& o = s.options;
    os << "options " << (o.exclusion ? 1 : 0) << ' ' << hex(o.maxDisp) << ' ' << hex(o.insertProb) << ' '
       << hex(o.deleteProb) << ' ' << (o.checkEverySweep ? 1 : 0) << '\n';
    os << "stats " << s.stats.sweeps;
    for (auto v : s.stats.proposed)
        os << ' ' << v;
    for (auto v : s.stats.accepted)
        os << ' ' << v;
    os << '\n';
    os << "rng " << s.rng << '\n';
    os << "points " << s.size() << '\n';
    for (Point q : s.config())
        os << hex(q.x) << ' ' << hex(q.y) << '\n';
    for (const auto& [key, value] : extras) {
        if (key.empty() || key.find_first_of(" \t\n") != std::string::npos)
            throw Error("checkpoint: extra keys must be single words");
        os << "extra " << key << ' ' << value << '\n';
    }
    os << "end\n";
    std::string body = os.str();
    char crc[32];
    std::snprintf(crc, sizeof crc, "crc %08x\n", crc32(body));
    return body + crc;
}

ChainState deserializeCheckpoint(const std::string& text, CheckpointExtras* extras)
{
    const std::string magic = std::string(kMagic) + ' ';
    if (text.compare(0, magic.size(), magic) != 0)
        throw CorruptCheckpoint("checkpoint: bad magic");
    {
        const auto eol = text.find('\n');
        const std::string v = text.substr(magic.size(), eol == std::string::npos ? std::string::npos : eol - magic.size());
        char* end = nullptr;
        const auto version = std::strtoul(v.c_str(), &end, 10);
        if (v.empty() || *end != '\0')
            throw CorruptCheckpoint("checkpoint: bad version field");
        if (version != kCheckpointVersion)
            throw VersionMismatch("checkpoint version " + v + " but this build reads version " +
                                  std::to_string(kCheckpointVersion));
    }
    const auto crcPos = text.rfind("crc ");
    if (crcPos == std::string::npos || crcPos == 0 || text[crcPos - 1] != '\n')
        throw CorruptCheckpoint("checkpoint: missing checksum");
    const std::string body = text.substr(0, crcPos);
    const std::string tail = text.substr(crcPos + 4);
    char* end = nullptr;
    const auto stored = std::strtoul(tail.c_str(), &end, 16);
    if (end == tail.c_str() || (*end != '\n' && *end != '\0') || stored != crc32(body))
        throw CorruptCheckpoint("checkpoint: checksum mismatch");

    Reader in(body);
    in.word();
    in.word();
    ModelParams p;
    in.expect("params");
    p.r = in.real();
    p.L = in.real();
    p.delta = in.real();
    p.epsilon = in.real();
    p.z = in.real();
    p.boxHalfWidth = in.real();

    BoundaryCondition b;
    in.expect("boundary");
    const auto kind = in.integer();
    if (kind > 2)
        throw CorruptCheckpoint("checkpoint: bad boundary kind");
    b.kind = static_cast<BoundaryKind>(kind);
    b.fixed.resize(in.integer());
    for (auto& q : b.fixed) {
        q.x = in.real();
        q.y = in.real();
    }

    SamplerOptions o;
    in.expect("options");
    o.exclusion = in.integer() != 0;
    o.maxDisp = in.real();
    o.insertProb = in.real();
    o.deleteProb = in.real();
    o.checkEverySweep = in.integer() != 0;

    MoveStats stats;
    in.expect("stats");
    stats.sweeps = in.integer();
    for (auto& v : stats.proposed)
        v = in.integer();
    for (auto& v : stats.accepted)
        v = in.integer();

    ChainState state = [&] {
        try {
            return initChain(p, b, 0, o);
        } catch (const Error& e) {
            throw CorruptCheckpoint(std::string("checkpoint: ") + e.what());
        }
    }();
    state.stats = stats;
    in.expect("rng");
    if (!(in.stream() >> state.rng))
        throw CorruptCheckpoint("checkpoint: bad RNG state");
    in.expect("points");
    const auto n = in.integer();
    for (std::uint64_t k = 0; k < n; ++k) {
        const double x = in.real();
        const double y = in.real();
        state.index.add({x, y});
    }
    for (std::string tag = in.word(); tag != "end"; tag = in.word()) {
        if (tag != "extra")
            throw CorruptCheckpoint("checkpoint: unexpected '" + tag + "'");
        const std::string key = in.word();
        const auto value = in.integer();
        if (extras)
            (*extras)[key] = value;
    }
    try {
        checkHardCore(state);
    } catch (const std::logic_error& e) {
        throw CorruptCheckpoint(std::string("checkpoint: ") + e.what());
    }
    return state;
}

void saveCheckpoint(const std::filesystem::path& path, const ChainState& state, const CheckpointExtras& extras)
{
    writeFileAtomic(path, serializeCheckpoint(state, extras));
}

ChainState loadCheckpoint(const std::filesystem::path& path, CheckpointExtras* extras)
{
    return deserializeCheckpoint(readFile(path), extras);
}

} // namespace hdperc
