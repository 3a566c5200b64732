#include "xorlrc/storage.hpp"

#include <zlib.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iterator>
#include "json.hpp"
#include <sstream>

#include "xorlrc/error.hpp"

namespace xorlrc {

namespace {

using json = nlohmann::json;

void xor_into(std::vector<std::uint8_t>& dst, std::span<const std::uint8_t> src) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= src[i];
}

LinearCode code_for(const ShardManifest& manifest) {
  LinearCode code = parse_code_id(manifest.code);
  const std::size_t k = code.family == Family::UmSimplex ? code.params.base_k : code.k;
  if (code.n != manifest.n || k != manifest.k) {
    throw Error(ErrorKind::LengthMismatch, "manifest n/k disagree with code " + manifest.code);
  }
  if (manifest.checksums.size() != manifest.n) throw Error(ErrorKind::LengthMismatch, "checksum count differs from n");
  return code;
}

EncodedObject encode_with(const LinearCode& code, std::span<const std::uint8_t> payload,
                          std::optional<std::size_t> horizon, std::size_t manifest_k) {
  if (payload.empty()) throw Error(ErrorKind::EmptyPayload, "cannot encode an empty payload");
  const std::size_t m = code.k;
  const std::size_t len = (payload.size() + m - 1) / m;

  std::vector<std::vector<std::uint8_t>> fragments(m, std::vector<std::uint8_t>(len, 0));
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t begin = i * len;
    if (begin >= payload.size()) break;
    const std::size_t count = std::min(len, payload.size() - begin);
    std::copy_n(payload.begin() + static_cast<std::ptrdiff_t>(begin), count, fragments[i].begin());
  }

  EncodedObject out;
  out.manifest.code = code.id;
  out.manifest.n = code.n;
  out.manifest.k = manifest_k;
  out.manifest.s = horizon;
  out.manifest.payload_length = payload.size();
  out.manifest.fragment_length = len;
  out.shards.reserve(code.n);
  for (std::size_t j = 0; j < code.n; ++j) {
    Shard shard{j, std::vector<std::uint8_t>(len, 0)};
    for (std::size_t i = 0; i < m; ++i) {
      if (code.generator.get(i, j)) xor_into(shard.data, fragments[i]);
    }
    out.manifest.checksums.push_back(crc32_hex(shard.data));
    out.shards.push_back(std::move(shard));
  }
  return out;
}

// Validates shards against the manifest; returns one per index, sorted.
std::vector<const Shard*> index_shards(const ShardManifest& manifest, std::span<const Shard> available) {
  std::vector<const Shard*> by_index(manifest.n, nullptr);
  for (const auto& shard : available) {
    if (shard.index >= manifest.n) throw Error(ErrorKind::LengthMismatch, "shard index out of range");
    if (shard.data.size() != manifest.fragment_length) {
      throw Error(ErrorKind::LengthMismatch, "shard " + std::to_string(shard.index) + " has wrong length");
    }
    if (crc32_hex(shard.data) != manifest.checksums[shard.index]) {
      throw Error(ErrorKind::ChecksumMismatch, "shard " + std::to_string(shard.index) + " fails its checksum");
    }
    if (by_index[shard.index] == nullptr) by_index[shard.index] = &shard;
  }
  return by_index;
}

// For each message fragment, the live positions (into `live`) whose XOR
// yields it: the rows of a right inverse of the live sub-generator.
std::vector<BitVector> fragment_recipes(const LinearCode& code, const std::vector<std::size_t>& live) {
  const BitMatrix sub = code.generator.select_columns(live);
  if (!is_right_invertible(sub)) throw Error(ErrorKind::NotCorrectable, "available shards do not determine the object");
  const BitMatrix sub_t = sub.transpose();
  std::vector<BitVector> recipes;
  recipes.reserve(code.k);
  for (std::size_t i = 0; i < code.k; ++i) {
    BitVector unit_i(code.k);
    unit_i.set(i);
    recipes.push_back(solve_right(sub_t, unit_i));
  }
  return recipes;
}

std::vector<std::size_t> live_indices(const std::vector<const Shard*>& by_index) {
  std::vector<std::size_t> live;
  for (std::size_t j = 0; j < by_index.size(); ++j) {
    if (by_index[j] != nullptr) live.push_back(j);
  }
  return live;
}

}  // namespace

std::string crc32_hex(std::span<const std::uint8_t> bytes) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed large buffers in chunks.
  std::size_t offset = 0;
  while (offset < bytes.size()) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(bytes.size() - offset, 1U << 30));
    crc = ::crc32(crc, bytes.data() + offset, chunk);
    offset += chunk;
  }
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08lx", static_cast<unsigned long>(crc & 0xffffffffUL));
  return buf;
}

std::string manifest_to_json(const ShardManifest& m) {
  json j;
  j["format_version"] = m.format_version;
  j["code"] = m.code;
  j["n"] = m.n;
  j["k"] = m.k;
  j["s"] = m.s ? json(*m.s) : json(nullptr);
  j["payload_length"] = m.payload_length;
  j["fragment_length"] = m.fragment_length;
  j["checksums"] = m.checksums;
  return j.dump(2) + "\n";
}

ShardManifest manifest_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    ShardManifest m;
    m.format_version = j.at("format_version").get<int>();
    if (m.format_version != 1) throw Error(ErrorKind::Parse, "unsupported manifest format_version");
    m.code = j.at("code").get<std::string>();
    m.n = j.at("n").get<std::size_t>();
    m.k = j.at("k").get<std::size_t>();
    if (!j.at("s").is_null()) m.s = j.at("s").get<std::size_t>();
    m.payload_length = j.at("payload_length").get<std::uint64_t>();
    m.fragment_length = j.at("fragment_length").get<std::uint64_t>();
    m.checksums = j.at("checksums").get<std::vector<std::string>>();
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("manifest: ") + e.what());
  }
}

EncodedObject encode_object(const LinearCode& code, std::span<const std::uint8_t> payload) {
  if (code.family == Family::UmSimplex) return encode_with(code, payload, code.params.s, code.params.base_k);
  return encode_with(code, payload, std::nullopt, code.k);
}

EncodedObject encode_stream(const ConvCode& conv, std::span<const std::uint8_t> payload, std::size_t s) {
  LinearCode code = make_um(conv.base_k, s);
  code.generator = sliding_generator(conv, s);
  return encode_with(code, payload, s, conv.k);
}

std::vector<std::uint8_t> decode_object(const ShardManifest& manifest, std::span<const Shard> available) {
  const LinearCode code = code_for(manifest);
  const auto by_index = index_shards(manifest, available);
  const auto live = live_indices(by_index);
  const auto recipes = fragment_recipes(code, live);

  std::vector<std::uint8_t> payload;
  payload.reserve(code.k * manifest.fragment_length);
  std::vector<std::uint8_t> fragment(manifest.fragment_length);
  for (const auto& recipe : recipes) {
    std::fill(fragment.begin(), fragment.end(), 0);
    for (std::size_t p = 0; p < live.size(); ++p) {
      if (recipe.get(p)) xor_into(fragment, by_index[live[p]]->data);
    }
    payload.insert(payload.end(), fragment.begin(), fragment.end());
  }
  payload.resize(manifest.payload_length);
  return payload;
}

ShardRepair repair_shards(const ShardManifest& manifest, std::span<const Shard> available,
                          std::span<const std::size_t> missing, RepairStrategy strategy) {
  const LinearCode code = code_for(manifest);
  const auto by_index = index_shards(manifest, available);
  for (auto m : missing) {
    if (m >= manifest.n) throw Error(ErrorKind::LengthMismatch, "missing index out of range");
    if (by_index[m] != nullptr) throw Error(ErrorKind::LengthMismatch, "shard " + std::to_string(m) + " is not missing");
  }
  std::vector<std::size_t> erased;
  for (std::size_t j = 0; j < manifest.n; ++j) {
    if (by_index[j] == nullptr) erased.push_back(j);
  }
  const ErasurePattern pattern(manifest.n, erased);
  if (!is_correctable(code, pattern)) throw Error(ErrorKind::NotCorrectable, "available shards do not determine the object");

  ShardRepair out;
  std::vector<std::vector<std::uint8_t>> data(manifest.n);
  for (std::size_t j = 0; j < manifest.n; ++j) {
    if (by_index[j] != nullptr) data[j] = by_index[j]->data;
  }

  bool done = false;
  if (strategy == RepairStrategy::Auto && !missing.empty()) {
    auto outcome = easy_repair_plan(code, pattern);
    if (outcome.success) {
      out.plan = std::move(outcome.plan);
      done = true;
    }
  }
  if (!done) {
    // Shard t = sum_i G[i][t] u_i and u_i = sum_p recipe_i[p] live_p, so each
    // missing shard is one XOR over live shards.
    const auto live = live_indices(by_index);
    const auto recipes = fragment_recipes(code, live);
    out.plan.mode = PlanMode::Decode;
    for (auto t : missing) {
      BitVector coeff(live.size());
      for (std::size_t i = 0; i < code.k; ++i) {
        if (code.generator.get(i, t)) coeff ^= recipes[i];
      }
      RepairStep step{t, {}, out.plan.steps.size()};
      for (std::size_t p = 0; p < live.size(); ++p) {
        if (coeff.get(p)) step.helpers.push_back(live[p]);
      }
      out.plan.r_bound = std::max(out.plan.r_bound, step.helpers.size());
      out.plan.steps.push_back(std::move(step));
    }
  }

  for (const auto& step : out.plan.steps) {
    std::vector<std::uint8_t> bytes(manifest.fragment_length, 0);
    for (auto h : step.helpers) xor_into(bytes, data[h]);
    data[step.target] = std::move(bytes);
  }
  for (auto t : missing) {
    if (crc32_hex(data[t]) != manifest.checksums[t]) {
      throw Error(ErrorKind::ChecksumMismatch, "repaired shard " + std::to_string(t) + " fails its checksum");
    }
    out.repaired.push_back(Shard{t, data[t]});
  }
  return out;
}

// ---------------------------------------------------------------- files

std::filesystem::path shard_path(const std::filesystem::path& dir, std::size_t index) {
  std::ostringstream name;
  name << "shard_" << std::setw(4) << std::setfill('0') << index << ".bin";
  return dir / name.str();
}

void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot open " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorKind::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::Io, "rename to " + path.string() + ": " + ec.message());
}

void write_shard(const std::filesystem::path& dir, const Shard& shard) {
  write_file_atomic(shard_path(dir, shard.index), shard.data);
}

void write_object(const std::filesystem::path& dir, const EncodedObject& object) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
  for (const auto& shard : object.shards) write_shard(dir, shard);
  const std::string text = manifest_to_json(object.manifest);
  write_file_atomic(dir / "manifest.json",
                    std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

ShardManifest read_manifest(const std::filesystem::path& dir) {
  const auto bytes = read_file(dir / "manifest.json");
  return manifest_from_json(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

std::vector<Shard> read_available_shards(const std::filesystem::path& dir, const ShardManifest& manifest) {
  std::vector<Shard> shards;
  for (std::size_t j = 0; j < manifest.n; ++j) {
    const auto path = shard_path(dir, j);
    if (!std::filesystem::exists(path)) continue;
    shards.push_back(Shard{j, read_file(path)});
  }
  return shards;
}

}  // namespace xorlrc
