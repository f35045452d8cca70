#pragma once

#include "hdperc/sampler.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

namespace hdperc {

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Text checkpoint of a chain: parameters, boundary, options, statistics, exact RNG state
/// and points as hexadecimal floats, closed by a CRC-32 line over everything before it.
/// `extras` carries caller bookkeeping (for example output offsets) under the same checksum.
using CheckpointExtras = std::map<std::string, std::uint64_t>;

std::string serializeCheckpoint(const ChainState& state, const CheckpointExtras& extras = {});
/// Throws CorruptCheckpoint (bad magic, checksum or body) or VersionMismatch.
ChainState deserializeCheckpoint(const std::string& text, CheckpointExtras* extras = nullptr);

void saveCheckpoint(const std::filesystem::path& path, const ChainState& state, const CheckpointExtras& extras = {});
ChainState loadCheckpoint(const std::filesystem::path& path, CheckpointExtras* extras = nullptr);

} // namespace hdperc
