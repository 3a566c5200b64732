#pragma once

#include <bitset>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "xorlrc/codes.hpp"

namespace xorlrc {

inline constexpr std::size_t kMaxRepairNodes = 256;
inline constexpr std::size_t kMaxRepairK = 64;
inline constexpr std::size_t kMaxGroupSize = 6;

using NodeSet = std::bitset<kMaxRepairNodes>;

/// Split of node indices {0..n-1} into erased and live sets.
class ErasurePattern {
 public:
  ErasurePattern() = default;
  /// Sorts and deduplicates; throws DimensionMismatch on an index >= n.
  ErasurePattern(std::size_t n, std::vector<std::size_t> erased);
  static ErasurePattern from_set(std::size_t n, const NodeSet& erased);

  std::size_t n() const noexcept { return n_; }
  const std::vector<std::size_t>& erased() const noexcept { return erased_; }
  const std::vector<std::size_t>& live() const noexcept { return live_; }
  NodeSet erased_set() const;
  bool is_erased(std::size_t i) const;

  bool operator==(const ErasurePattern&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> erased_;
  std::vector<std::size_t> live_;
};

/// helpers XOR to the target column. An empty helper list is used only for
/// nodes whose generator column is zero: they always hold zero.
struct RepairGroup {
  std::size_t target = 0;
  std::vector<std::size_t> helpers;

  bool operator==(const RepairGroup&) const = default;
  auto operator<=>(const RepairGroup&) const = default;
};

struct RepairStep {
  std::size_t target = 0;
  std::vector<std::size_t> helpers;
  std::size_t order = 0;

  bool operator==(const RepairStep&) const = default;
};

/// Decode marks a fallback plan whose steps are full re-encoding recipes
/// over live nodes rather than local repairs.
enum class PlanMode { Sequential, Parallel, Decode };

struct RepairPlan {
  std::vector<RepairStep> steps;
  PlanMode mode = PlanMode::Sequential;
  std::size_t r_bound = 0;

  /// Number of two-input XORs needed to execute every step.
  std::size_t xor_count() const;
  bool operator==(const RepairPlan&) const = default;
};

/// `# mode: sequential|parallel r=<r>|decode` header, then one
/// `repair <target> <- <h1>[+<h2>...]` line per step (`zero` for no helpers).
std::string serialize(const RepairPlan& plan);
RepairPlan parse_plan(std::string_view text);

struct EasyRepairOutcome {
  bool success = false;
  RepairPlan plan;
  /// Nodes still erased when the greedy loop stopped.
  ErasurePattern residual;
  /// Set when a code family with an Easy Repair theorem fails on a
  /// correctable pattern.
  bool theorem_violation = false;
};

struct ParallelRepairOutcome {
  bool success = false;
  RepairPlan plan;
  /// Erased nodes without an all-live group of size <= r.
  std::vector<std::size_t> unrepairable;
};

struct Packing {
  std::size_t count = 0;
  std::vector<RepairGroup> witness;
};

struct AvailabilityProfile {
  std::size_t r_max = 0;
  /// per_node[i][r-1]: disjoint groups of size <= r for node i.
  std::vector<std::vector<std::size_t>> per_node;
  /// Nodes with a zero generator column; they are excluded from t.
  std::vector<bool> constant_node;
  /// t[r-1]: minimum of per_node[i][r-1] over non-constant nodes.
  std::vector<std::size_t> t;
};

/// Columns of a generator packed into words, with a value -> node index.
/// Shared by all repair operations; immutable after construction.
class RepairContext {
 public:
  explicit RepairContext(const LinearCode& code);

  std::size_t n() const noexcept { return columns_.size(); }
  std::size_t k() const noexcept { return k_; }
  Family family() const noexcept { return family_; }
  std::uint64_t column(std::size_t i) const { return columns_.at(i); }
  const NodeSet& all_nodes() const noexcept { return all_; }

  /// Live columns have rank k.
  bool is_correctable(const NodeSet& erased) const;

  /// First erased node (ascending) that is a replica of, or the XOR of two,
  /// available nodes. Zero-column nodes repair with no helpers.
  std::optional<RepairStep> find_easy_repairable(const NodeSet& available, const NodeSet& pending) const;
  EasyRepairOutcome easy_repair_plan(const ErasurePattern& pattern) const;

  /// Smallest-size, then lexicographically first, subset of `allowed` that
  /// XORs to the target column, with at most r members.
  std::optional<std::vector<std::size_t>> find_group_within(std::size_t target, const NodeSet& allowed,
                                                            std::size_t r) const;
  ParallelRepairOutcome parallel_repair_plan(const ErasurePattern& pattern, std::size_t r) const;

  /// All minimal groups of size <= max_size, ordered by size then helpers.
  std::vector<RepairGroup> enumerate_repair_groups(std::size_t target, std::size_t max_size) const;

  /// First node index in `allowed` holding `value`, at index > after.
  std::optional<std::size_t> find_value(std::uint64_t value, const NodeSet& allowed,
                                        std::size_t after = kNone) const;

  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

 private:
  const std::vector<std::uint32_t>* nodes_with_value(std::uint64_t value) const;

  std::size_t k_ = 0;
  Family family_ = Family::Simplex;
  std::vector<std::uint64_t> columns_;
  NodeSet all_;
  // Dense table when k is small, hash map otherwise.
  std::vector<std::vector<std::uint32_t>> dense_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> sparse_;
};

/// Precomputed minimal groups for every node, for repeated parallel checks.
class GroupTable {
 public:
  GroupTable(const RepairContext& context, std::size_t max_size);

  std::size_t max_size() const noexcept { return max_size_; }
  /// True when every erased node has a group of size <= r avoiding all
  /// erased nodes. Requires r <= max_size().
  bool parallel_repairable(const NodeSet& erased, std::size_t r) const;

 private:
  struct Entry {
    NodeSet members;
    std::size_t size;
  };
  const RepairContext* context_;
  std::size_t max_size_;
  std::vector<std::vector<Entry>> groups_;
};

bool is_correctable(const LinearCode& code, const ErasurePattern& pattern);
/// The same verdict through the parity check: erased columns of H are
/// linearly independent.
bool is_correctable_via_parity_check(const LinearCode& code, const ErasurePattern& pattern);

std::optional<RepairStep> find_easy_repairable(const LinearCode& code, const ErasurePattern& pattern);
EasyRepairOutcome easy_repair_plan(const LinearCode& code, const ErasurePattern& pattern);
ParallelRepairOutcome parallel_repair_plan(const LinearCode& code, const ErasurePattern& pattern, std::size_t r);
std::vector<RepairGroup> enumerate_repair_groups(const LinearCode& code, std::size_t target, std::size_t max_size);

/// Exact maximum number of pairwise-disjoint groups of size <= max_size for
/// a target, with the lexicographically smallest witness packing.
Packing max_disjoint_groups(const LinearCode& code, std::size_t target, std::size_t max_size);
/// Count-only variant; skips witness construction.
std::size_t max_disjoint_group_count(const RepairContext& context, std::size_t target, std::size_t max_size);

AvailabilityProfile availability_profile(const LinearCode& code, std::size_t r_max);

/// Largest over non-constant nodes of the smallest repair group size.
/// nullopt when some node has no group within kMaxGroupSize helpers.
std::optional<std::size_t> locality(const LinearCode& code);

/// Applies a plan to a codeword whose erased coordinates are unknown.
/// Returns nullopt if a step reads a node that is neither live nor
/// repaired by an earlier step.
std::optional<BitVector> replay_plan(const RepairPlan& plan, const BitVector& received, const ErasurePattern& pattern);

}  // namespace xorlrc
