#include "hdperc/snapshot_io.hpp"

#include "hdperc/errors.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace hdperc {

namespace {

constexpr std::array<char, 4> kMagic{'H', 'D', 'P', 'C'};

template <class T> void putLE(std::ostream& os, T v)
{
    std::array<char, sizeof(T)> buf{};
    for (std::size_t k = 0; k < sizeof(T); ++k)
        buf[k] = static_cast<char>((v >> (8 * k)) & 0xff);
    os.write(buf.data(), buf.size());
}

template <class T> bool getLE(std::istream& is, T& v)
{
    std::array<unsigned char, sizeof(T)> buf{};
    if (!is.read(reinterpret_cast<char*>(buf.data()), buf.size()))
        return false;
    v = 0;
    for (std::size_t k = 0; k < sizeof(T); ++k)
        v |= static_cast<T>(buf[k]) << (8 * k);
    return true;
}

void putDouble(std::ostream& os, double d) { putLE(os, std::bit_cast<std::uint64_t>(d)); }

} // namespace

void writeFrame(std::ostream& os, const Snapshot& snapshot)
{
    os.write(kMagic.data(), kMagic.size());
    putLE<std::uint32_t>(os, kSnapshotFrameVersion);
    putLE<std::uint64_t>(os, snapshot.sweep);
    putLE<std::uint32_t>(os, static_cast<std::uint32_t>(snapshot.points.size()));
    for (Point p : snapshot.points) {
        putDouble(os, p.x);
        putDouble(os, p.y);
    }
}

std::optional<Snapshot> readFrame(std::istream& is)
{
    std::array<char, 4> magic{};
    is.read(magic.data(), magic.size());
    if (is.gcount() == 0)
        return std::nullopt;
    if (is.gcount() != 4 || magic != kMagic)
        throw Error("snapshot frame: bad magic");
    std::uint32_t version = 0, n = 0;
    Snapshot s;
    if (!getLE(is, version))
        throw Error("snapshot frame: truncated header");
    if (version != kSnapshotFrameVersion)
        throw VersionMismatch("snapshot frame: unsupported version " + std::to_string(version));
    if (!getLE(is, s.sweep) || !getLE(is, n))
        throw Error("snapshot frame: truncated header");
    s.points.resize(n);
    for (auto& p : s.points) {
        std::uint64_t x = 0, y = 0;
        if (!getLE(is, x) || !getLE(is, y))
            throw Error("snapshot frame: truncated point data");
        p = {std::bit_cast<double>(x), std::bit_cast<double>(y)};
    }
    return s;
}

std::vector<Snapshot> readFrames(std::istream& is)
{
    std::vector<Snapshot> out;
    while (auto s = readFrame(is))
        out.push_back(std::move(*s));
    return out;
}

void writeSnapshotCsvHeader(std::ostream& os) { os << "schemaVersion,sweep,index,x,y\n"; }

void writeSnapshotCsv(std::ostream& os, const Snapshot& snapshot)
{
    os << std::setprecision(17);
    for (std::size_t i = 0; i < snapshot.points.size(); ++i)
        os << kSnapshotCsvSchemaVersion << ',' << snapshot.sweep << ',' << i << ',' << snapshot.points[i].x << ','
           << snapshot.points[i].y << '\n';
}

void writeFileAtomic(const std::filesystem::path& path, const std::string& content)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f)
            throw Error("cannot open " + tmp.string() + " for writing");
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!f.flush())
            throw Error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string readFile(const std::filesystem::path& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw Error("cannot open " + path.string());
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

} // namespace hdperc
