#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "xorlrc/gf2.hpp"

namespace xorlrc {

enum class Family { Simplex, C1, C2, UmSimplex, BlockDiagRepeat, TensorUm, Um2Prime };

std::string_view to_string(Family family);

/// Simplex, C1, C2 and UM simplex carry a proven Easy Repair Property.
bool has_easy_repair_theorem(Family family);

struct CodeParams {
  std::size_t x = 1;       // repeat count (BlockDiagRepeat) or G_c size (TensorUm)
  std::size_t s = 0;       // message-block horizon (UmSimplex)
  std::size_t base_k = 0;  // dimension of the inner simplex / C1 block
  /// BlockDiagRepeat only: whether the repeated block is simplex or C1.
  Family inner = Family::Simplex;
};

/// A block code instance. The generator is k x n with full row rank.
struct LinearCode {
  Family family = Family::Simplex;
  std::size_t k = 0;
  std::size_t n = 0;
  BitMatrix generator;
  CodeParams params;
  /// Canonical CLI identifier, e.g. "simplex:3" or "um:2:4".
  std::string id;
};

/// Unit-memory convolutional code G(D) = G0 + G1 D.
struct ConvCode {
  std::size_t k = 0;
  std::size_t n_block = 0;
  BitMatrix g0;
  BitMatrix g1;
  /// Dimension of the inner simplex code for UM simplex codes.
  std::size_t base_k = 0;
};

inline constexpr std::size_t kMaxSimplexK = 20;
inline constexpr std::size_t kMaxUmBaseK = 10;

/// k x (2^k - 1); columns sorted by weight, then by integer value (row 1 is
/// the most significant bit) descending.
BitMatrix simplex_generator(std::size_t k);
/// (n-k) x n parity check [A^T | I] for the systematic simplex generator [I | A].
BitMatrix simplex_parity_check(std::size_t k);

/// Weight-2 columns e_i + e_j, i < j, in lexicographic (i, j) order.
BitMatrix weight2_columns(std::size_t k);
/// [I_k | weight2_columns(k)].
BitMatrix c1_generator(std::size_t k);

/// (e1, e1, e1+e2, e2, e2+e3, e3, ..., e_{k-1}+e_k, e_k, e_k). Defined for
/// k >= 1 (k = 1 gives [1 1 1]); the C2 code itself requires k >= 2.
BitMatrix staircase_generator(std::size_t k);
BitMatrix c2_generator(std::size_t k);

ConvCode um_simplex(std::size_t base_k);
/// (s+1)k x (s+2)n_block banded matrix with G0, G1 on the staircase.
BitMatrix sliding_generator(const ConvCode& code, std::size_t s);

/// Replaces each 1 of `outer` with `inner` and each 0 with a zero block.
BitMatrix tensor_expand(const BitMatrix& outer, const BitMatrix& inner);
BitMatrix block_diag_repeat(const BitMatrix& inner, std::size_t x);
/// (G G 0; 0 G G) with G the k = 2 simplex generator.
BitMatrix um2prime_generator();

/// Generic parity check for any full-rank generator: a basis of the dual
/// code, reduced so the last n-k columns form an identity when possible.
BitMatrix parity_check(const BitMatrix& generator);

LinearCode make_simplex(std::size_t k);
LinearCode make_c1(std::size_t k);
LinearCode make_c2(std::size_t k);
LinearCode make_um(std::size_t base_k, std::size_t s);
/// C0^(k,x): x diagonal copies of simplex(k/x).
LinearCode make_c0_repeat(std::size_t k, std::size_t x);
/// C1^(k,x): x diagonal copies of C1(k/x).
LinearCode make_c1_repeat(std::size_t k, std::size_t x);
/// UM_x^(k): staircase_generator(x) expanded by simplex(k/x).
LinearCode make_umx(std::size_t k, std::size_t x);
LinearCode make_um2prime();

/// Parses `simplex:k`, `c1:k`, `c2:k`, `um:k:s`, `c0:k:x`, `c1:k:x`,
/// `umx:k:x` or `um2p4`. Throws Error(Parse) or Error(InvalidDimension).
LinearCode parse_code_id(std::string_view id);

/// For UmSimplex codes, the convolutional code they slide.
std::optional<ConvCode> conv_code_of(const LinearCode& code);

}  // namespace xorlrc
