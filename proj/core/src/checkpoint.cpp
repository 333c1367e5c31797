#include "colearn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "colearn/errors.hpp"

namespace colearn {
namespace {

void append_le(std::string& out, std::uint64_t value, int bytes) {
  for (int i = 0; i < bytes; ++i) {
    out.push_back(static_cast<char>((value >> (8 * i)) & 0xffULL));
  }
}

std::uint64_t read_le(const std::string& in, std::size_t offset, int bytes) {
  std::uint64_t value = 0;
  for (int i = 0; i < bytes; ++i) {
    value |= static_cast<std::uint64_t>(
                 static_cast<unsigned char>(in[offset + i]))
             << (8 * i);
  }
  return value;
}

constexpr std::size_t kHeaderBytes = 4 + 2 + 8;

}  // namespace

void save_checkpoint(const std::filesystem::path& path,
                     const ParameterVector& params) {
  std::string buffer;
  buffer.reserve(kHeaderBytes + 8 * params.size());
  buffer.append(kCheckpointMagic, sizeof kCheckpointMagic);
  append_le(buffer, kCheckpointVersion, 2);
  append_le(buffer, params.size(), 8);
  for (double v : params.values()) {
    append_le(buffer, std::bit_cast<std::uint64_t>(v), 8);
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw CheckpointError("cannot open checkpoint for writing: " +
                          path.string());
  }
  out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
  if (!out) {
    throw CheckpointError("short write to checkpoint: " + path.string());
  }
}

ParameterVector load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw CheckpointError("cannot open checkpoint: " + path.string());
  }
  std::string buffer((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
  if (buffer.size() < kHeaderBytes) {
    throw CheckpointError("truncated checkpoint header: " + path.string());
  }
  if (std::memcmp(buffer.data(), kCheckpointMagic, sizeof kCheckpointMagic) !=
      0) {
    throw CheckpointError("bad checkpoint magic: " + path.string());
  }
  const auto version = static_cast<std::uint16_t>(read_le(buffer, 4, 2));
  if (version != kCheckpointVersion) {
    throw CheckpointError("unsupported checkpoint version " +
                          std::to_string(version) + ": " + path.string());
  }
  const std::uint64_t count = read_le(buffer, 6, 8);
  if (buffer.size() != kHeaderBytes + 8 * count) {
    throw CheckpointError("checkpoint size does not match its header: " +
                          path.string());
  }
  std::vector<double> values(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    values[i] =
        std::bit_cast<double>(read_le(buffer, kHeaderBytes + 8 * i, 8));
  }
  try {
    return ParameterVector(std::move(values));
  } catch (const InvalidInputError&) {
    throw CheckpointError("checkpoint holds non-finite values: " +
                          path.string());
  }
}

}  // namespace colearn
