#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "xorlrc/codes.hpp"
#include "xorlrc/repair.hpp"

namespace xorlrc {

// ---------------------------------------------------------------- distances

enum class DistanceMethod { Exhaustive, Guarded };

struct DistanceReport {
  std::string code_id;
  std::size_t d = 0;
  DistanceMethod method = DistanceMethod::Exhaustive;
  std::uint64_t codewords_examined = 0;
};

/// Exact minimum distance over all 2^k - 1 nonzero messages (k <= 24).
DistanceReport min_distance(const LinearCode& code);

/// Minimum weight of the first j+1 output blocks over message sequences
/// with u_0 != 0. Requires base_k * (j+1) <= 20.
std::size_t column_distance(const ConvCode& code, std::size_t j);

/// Minimum distance of the block code generated by sliding_generator(code, s).
/// Requires (s+1) * k <= 20.
std::size_t sliding_block_distance(const ConvCode& code, std::size_t s);

struct ColumnDistanceReport {
  std::size_t base_k = 0;
  std::vector<std::pair<std::size_t, std::size_t>> column_distances;  // (j, d_j)
  std::vector<std::pair<std::size_t, std::size_t>> sliding_distances; // (s, d)
  /// Minimum over the sliding block distances, evidence for d_free.
  std::size_t d_free_evidence = 0;
};

/// d_j for j <= j_max and sliding distances for s in {1..4}, each where the
/// enumeration guard allows.
ColumnDistanceReport column_distance_report(const ConvCode& code, std::size_t j_max);

// ---------------------------------------------------------------- sweeps

struct SweepOptions {
  bool exhaustive = true;
  /// Exhaustive: only patterns with at most this many erasures.
  /// Sampled: draws uniformly from patterns with at most this many erasures.
  std::optional<std::size_t> max_erasures;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  std::size_t workers = 1;
};

inline constexpr std::uint64_t kMaxExhaustivePatterns = std::uint64_t{1} << 25;

struct EasyRepairVerdict {
  bool passed = true;
  std::uint64_t examined = 0;
  std::uint64_t correctable = 0;
  /// First failing pattern in sweep order, if any.
  std::optional<ErasurePattern> counterexample;
  std::optional<EasyRepairOutcome> counterexample_outcome;
};

/// Every examined correctable pattern must be fully repaired by the greedy
/// easy-repair plan.
EasyRepairVerdict verify_easy_repair_property(const LinearCode& code, const SweepOptions& options);

struct ParallelVerdict {
  bool passed = true;
  std::uint64_t examined = 0;
  std::optional<ErasurePattern> counterexample;
};

/// Every examined pattern with exactly `erasures` erased nodes must admit a
/// parallel repair with groups of size <= r.
ParallelVerdict verify_parallel_capacity(const LinearCode& code, std::size_t r, std::size_t erasures,
                                         const SweepOptions& options);

// ---------------------------------------------------------------- tables

struct ComparisonRow {
  std::string label;    // e.g. "UM_2^(4)" or "C0^(4,2)=C1^(4,2)"
  std::string code_id;  // e.g. "umx:4:2" or "c0:4:2=c1:4:2"
  std::size_t n = 0;
  std::size_t d = 0;
  /// d/n in lowest terms.
  std::size_t ratio_num = 0;
  std::size_t ratio_den = 1;
};

/// Rows for the simplex, C1, repeated and tensor UM families at dimension k,
/// sorted by n descending. Requires 2 <= k <= 12.
std::vector<ComparisonRow> comparison_table(std::size_t k);

/// `code\tn\td\td_over_n` with a header line.
std::string format_table_tsv(const std::vector<ComparisonRow>& rows);
/// Aligned columns Code, n, d, d/n.
std::string format_table_text(const std::vector<ComparisonRow>& rows);

// ---------------------------------------------------------------- simulation

struct ErasureModel {
  enum class Kind { FixedCount, PerNodeProbability };
  Kind kind = Kind::FixedCount;
  std::size_t count = 0;
  double probability = 0.0;

  static ErasureModel fixed(std::size_t count) { return {Kind::FixedCount, count, 0.0}; }
  static ErasureModel per_node(double p) { return {Kind::PerNodeProbability, 0, p}; }
};

struct SimulationReport {
  std::string code_id;
  std::uint64_t trials = 0;
  std::uint64_t master_seed = 0;
  /// erasure_histogram[e]: trials with e erasures.
  std::vector<std::uint64_t> erasure_histogram;
  double fraction_correctable = 0.0;
  double fraction_easy_repaired = 0.0;
  /// fraction_parallel[r-1] for r in 1..r_max.
  std::vector<double> fraction_parallel;
  double mean_xor_per_repaired_node = 0.0;

  bool operator==(const SimulationReport&) const = default;
};

SimulationReport monte_carlo_repair(const LinearCode& code, std::uint64_t trials, const ErasureModel& model,
                                    std::uint64_t seed, std::size_t r_max = 3, std::size_t workers = 1);

std::string format_report(const SimulationReport& report);

}  // namespace xorlrc
