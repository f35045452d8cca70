#pragma once

#include "hdperc/sampler.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hdperc {

inline constexpr std::uint32_t kSnapshotFrameVersion = 1;
inline constexpr int kSnapshotCsvSchemaVersion = 1;

/// Frame: "HDPC", u32 version, u64 sweep, u32 N, N (x, y) float64 pairs; all little-endian.
void writeFrame(std::ostream& os, const Snapshot& snapshot);
/// nullopt at a clean end of stream. Throws Error on a bad magic, version or truncated frame.
std::optional<Snapshot> readFrame(std::istream& is);
std::vector<Snapshot> readFrames(std::istream& is);

/// Header once, then one row per point: schemaVersion,sweep,index,x,y.
void writeSnapshotCsvHeader(std::ostream& os);
void writeSnapshotCsv(std::ostream& os, const Snapshot& snapshot);

/// Writes to a sibling temporary file and renames it over `path`.
void writeFileAtomic(const std::filesystem::path& path, const std::string& content);
std::string readFile(const std::filesystem::path& path);

} // namespace hdperc
