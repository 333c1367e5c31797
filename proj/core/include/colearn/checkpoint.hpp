#pragma once

#include <cstdint>
#include <filesystem>

#include "colearn/model.hpp"

namespace colearn {

// Checkpoint file layout: magic "CLRN", format version (u16 LE), parameter
// count (u64 LE), then the values as 64-bit little-endian IEEE-754.
inline constexpr char kCheckpointMagic[4] = {'C', 'L', 'R', 'N'};
inline constexpr std::uint16_t kCheckpointVersion = 1;

void save_checkpoint(const std::filesystem::path& path,
                     const ParameterVector& params);

// Rejects wrong magic or version, truncated files and non-finite values.
ParameterVector load_checkpoint(const std::filesystem::path& path);

}  // namespace colearn
