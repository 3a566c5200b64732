#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xorlrc/codes.hpp"
#include "xorlrc/repair.hpp"

namespace xorlrc {

/// On-disk description of an encoded object (manifest.json).
struct ShardManifest {
  int format_version = 1;
  std::string code;
  std::size_t n = 0;
  /// Message dimension of the code; the inner dimension for UM codes.
  std::size_t k = 0;
  /// Horizon for UM codes, absent for block codes.
  std::optional<std::size_t> s;
  std::uint64_t payload_length = 0;
  std::uint64_t fragment_length = 0;
  /// CRC32 of each shard, 8 lowercase hex digits, indexed by node.
  std::vector<std::string> checksums;

  /// k for block codes, (s+1)k for UM codes.
  std::size_t message_fragment_count() const { return s ? (*s + 1) * k : k; }
  bool operator==(const ShardManifest&) const = default;
};

struct Shard {
  std::size_t index = 0;
  std::vector<std::uint8_t> data;

  bool operator==(const Shard&) const = default;
};

struct EncodedObject {
  ShardManifest manifest;
  std::vector<Shard> shards;
};

enum class RepairStrategy {
  /// Easy repair when it completes, otherwise decode and re-encode.
  Auto,
  DecodeOnly,
};

struct ShardRepair {
  std::vector<Shard> repaired;
  RepairPlan plan;
};

std::string crc32_hex(std::span<const std::uint8_t> bytes);

std::string manifest_to_json(const ShardManifest& manifest);
ShardManifest manifest_from_json(std::string_view text);

/// Splits the payload into zero-padded fragments and computes shard j as
/// the XOR of the fragments selected by generator column j.
EncodedObject encode_object(const LinearCode& code, std::span<const std::uint8_t> payload);

/// Same column rule on sliding_generator(code, s).
EncodedObject encode_stream(const ConvCode& code, std::span<const std::uint8_t> payload, std::size_t s);

/// Recovers the exact payload from any correctable set of shards.
std::vector<std::uint8_t> decode_object(const ShardManifest& manifest, std::span<const Shard> available);

/// Regenerates `missing` shards. Every shard not in `available` counts as
/// erased; `missing` must be a subset of those.
ShardRepair repair_shards(const ShardManifest& manifest, std::span<const Shard> available,
                          std::span<const std::size_t> missing, RepairStrategy strategy = RepairStrategy::Auto);

// ---------------------------------------------------------------- files

std::filesystem::path shard_path(const std::filesystem::path& dir, std::size_t index);
/// Writes via a temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_shard(const std::filesystem::path& dir, const Shard& shard);
void write_object(const std::filesystem::path& dir, const EncodedObject& object);
ShardManifest read_manifest(const std::filesystem::path& dir);
/// Shards present on disk; missing files are skipped.
std::vector<Shard> read_available_shards(const std::filesystem::path& dir, const ShardManifest& manifest);
std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

}  // namespace xorlrc
