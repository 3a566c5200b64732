#include "xorlrc/codes.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <vector>

#include "xorlrc/error.hpp"

namespace xorlrc {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::InvalidDimension, what);
}

// Column vector of length k whose row r holds bit (k-1-r) of value.
BitVector msb_first_column(std::uint64_t value, std::size_t k) {
  BitVector v(k);
  for (std::size_t r = 0; r < k; ++r) {
    if ((value >> (k - 1 - r)) & 1U) v.set(r);
  }
  return v;
}

BitVector unit(std::size_t i, std::size_t k) {
  BitVector v(k);
  v.set(i);
  return v;
}

std::size_t parse_size(std::string_view text, std::string_view whole) {
  std::size_t value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw Error(ErrorKind::Parse, "bad number in code id '" + std::string(whole) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

std::string_view to_string(Family family) {
  switch (family) {
    case Family::Simplex: return "Simplex";
    case Family::C1: return "C1";
    case Family::C2: return "C2";
    case Family::UmSimplex: return "UmSimplex";
    case Family::BlockDiagRepeat: return "BlockDiagRepeat";
    case Family::TensorUm: return "TensorUm";
    case Family::Um2Prime: return "Um2Prime";
  }
  return "Unknown";
}

bool has_easy_repair_theorem(Family family) {
  return family == Family::Simplex || family == Family::C1 || family == Family::C2 ||
         family == Family::UmSimplex;
}

BitMatrix simplex_generator(std::size_t k) {
  require(k >= 1 && k <= kMaxSimplexK, "simplex dimension must be in [1, 20]");
  std::vector<std::uint64_t> values((std::uint64_t{1} << k) - 1);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = i + 1;
  std::stable_sort(values.begin(), values.end(), [](std::uint64_t a, std::uint64_t b) {
    const int wa = std::popcount(a);
    const int wb = std::popcount(b);
    return wa != wb ? wa < wb : a > b;
  });
  std::vector<BitVector> columns;
  columns.reserve(values.size());
  for (auto v : values) columns.push_back(msb_first_column(v, k));
  return BitMatrix::from_columns(columns, k);
}

BitMatrix parity_check(const BitMatrix& generator) {
  const BitMatrix dual = null_space(generator);
  const std::size_t n = generator.cols();
  // Reduce with pivots preferred from the right, then restore column order.
  std::vector<std::size_t> reversed(n);
  for (std::size_t c = 0; c < n; ++c) reversed[c] = n - 1 - c;
  BitMatrix flipped = dual.select_columns(reversed);
  rref_in_place(flipped);
  BitMatrix restored = flipped.select_columns(reversed);
  // Row i of `restored` pivots at column n-1-i; list rows bottom-up so the
  // pivots run left to right.
  std::vector<BitVector> rows(restored.row_vectors().rbegin(), restored.row_vectors().rend());
  return BitMatrix::from_rows(std::move(rows), n);
}

BitMatrix simplex_parity_check(std::size_t k) { return parity_check(simplex_generator(k)); }

BitMatrix weight2_columns(std::size_t k) {
  require(k >= 2 && k <= kMaxSimplexK, "C1 dimension must be in [2, 20]");
  std::vector<BitVector> columns;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      BitVector v(k);
      v.set(i);
      v.set(j);
      columns.push_back(std::move(v));
    }
  }
  return BitMatrix::from_columns(columns, k);
}

BitMatrix c1_generator(std::size_t k) { return BitMatrix::identity(k).hconcat(weight2_columns(k)); }

BitMatrix staircase_generator(std::size_t k) {
  require(k >= 1, "staircase dimension must be positive");
  std::vector<BitVector> columns{unit(0, k), unit(0, k)};
  for (std::size_t i = 0; i + 1 < k; ++i) {
    columns.push_back(unit(i, k) ^ unit(i + 1, k));
    columns.push_back(unit(i + 1, k));
  }
  columns.push_back(unit(k - 1, k));
  return BitMatrix::from_columns(columns, k);
}

BitMatrix c2_generator(std::size_t k) {
  require(k >= 2, "C2 dimension must be at least 2");
  return staircase_generator(k);
}

ConvCode um_simplex(std::size_t base_k) {
  require(base_k >= 1 && base_k <= kMaxUmBaseK, "UM simplex base dimension must be in [1, 10]");
  const BitMatrix g = simplex_generator(base_k);
  ConvCode code;
  code.k = base_k;
  code.n_block = 2 * g.cols();
  code.g0 = g.hconcat(g);
  code.g1 = g.hconcat(BitMatrix(base_k, g.cols()));
  code.base_k = base_k;
  return code;
}

BitMatrix sliding_generator(const ConvCode& code, std::size_t s) {
  BitMatrix total((s + 1) * code.k, (s + 2) * code.n_block);
  for (std::size_t t = 0; t <= s; ++t) {
    total.place(code.g0, t * code.k, t * code.n_block);
    total.place(code.g1, t * code.k, (t + 1) * code.n_block);
  }
  return total;
}

BitMatrix tensor_expand(const BitMatrix& outer, const BitMatrix& inner) {
  BitMatrix out(outer.rows() * inner.rows(), outer.cols() * inner.cols());
  for (std::size_t r = 0; r < outer.rows(); ++r) {
    for (std::size_t c = 0; c < outer.cols(); ++c) {
      if (outer.get(r, c)) out.place(inner, r * inner.rows(), c * inner.cols());
    }
  }
  return out;
}

BitMatrix block_diag_repeat(const BitMatrix& inner, std::size_t x) {
  if (x == 0) throw Error(ErrorKind::InvalidDimension, "repeat count must be positive");
  return tensor_expand(BitMatrix::identity(x), inner);
}

BitMatrix um2prime_generator() {
  const BitMatrix g = simplex_generator(2);
  return tensor_expand(BitMatrix::from_strings({"110", "011"}), g);
}

// ---------------------------------------------------------------- LinearCode

namespace {

LinearCode finish(Family family, BitMatrix generator, CodeParams params, std::string id) {
  LinearCode code;
  code.family = family;
  code.k = generator.rows();
  code.n = generator.cols();
  code.generator = std::move(generator);
  code.params = params;
  code.id = std::move(id);
  return code;
}

std::size_t checked_quotient(std::size_t k, std::size_t x) {
  require(x >= 1 && k % x == 0, "x must be a positive divisor of k");
  return k / x;
}

}  // namespace

LinearCode make_simplex(std::size_t k) {
  return finish(Family::Simplex, simplex_generator(k), {.x = 1, .s = 0, .base_k = k}, "simplex:" + std::to_string(k));
}

LinearCode make_c1(std::size_t k) {
  return finish(Family::C1, c1_generator(k), {.x = 1, .s = 0, .base_k = k, .inner = Family::C1},
                "c1:" + std::to_string(k));
}

LinearCode make_c2(std::size_t k) {
  return finish(Family::C2, c2_generator(k), {.x = 1, .s = 0, .base_k = k, .inner = Family::C2},
                "c2:" + std::to_string(k));
}

LinearCode make_um(std::size_t base_k, std::size_t s) {
  require(s <= 64, "UM horizon must be at most 64");
  return finish(Family::UmSimplex, sliding_generator(um_simplex(base_k), s),
                {.x = 1, .s = s, .base_k = base_k, .inner = Family::Simplex},
                "um:" + std::to_string(base_k) + ":" + std::to_string(s));
}

LinearCode make_c0_repeat(std::size_t k, std::size_t x) {
  const std::size_t inner_k = checked_quotient(k, x);
  return finish(Family::BlockDiagRepeat, block_diag_repeat(simplex_generator(inner_k), x),
                {.x = x, .s = 0, .base_k = inner_k, .inner = Family::Simplex},
                "c0:" + std::to_string(k) + ":" + std::to_string(x));
}

LinearCode make_c1_repeat(std::size_t k, std::size_t x) {
  const std::size_t inner_k = checked_quotient(k, x);
  return finish(Family::BlockDiagRepeat, block_diag_repeat(c1_generator(inner_k), x),
                {.x = x, .s = 0, .base_k = inner_k, .inner = Family::C1},
                "c1:" + std::to_string(k) + ":" + std::to_string(x));
}

LinearCode make_umx(std::size_t k, std::size_t x) {
  const std::size_t inner_k = checked_quotient(k, x);
  return finish(Family::TensorUm, tensor_expand(staircase_generator(x), simplex_generator(inner_k)),
                {.x = x, .s = 0, .base_k = inner_k, .inner = Family::Simplex},
                "umx:" + std::to_string(k) + ":" + std::to_string(x));
}

LinearCode make_um2prime() {
  return finish(Family::Um2Prime, um2prime_generator(), {.x = 2, .s = 0, .base_k = 2, .inner = Family::Simplex},
                "um2p4");
}

LinearCode parse_code_id(std::string_view id) {
  const auto parts = split(id, ':');
  const auto& head = parts[0];
  auto arg = [&](std::size_t i) { return parse_size(parts[i], id); };

  if (head == "um2p4" && parts.size() == 1) return make_um2prime();
  if (head == "simplex" && parts.size() == 2) return make_simplex(arg(1));
  if (head == "c1" && parts.size() == 2) return make_c1(arg(1));
  if (head == "c2" && parts.size() == 2) return make_c2(arg(1));
  if (head == "um" && parts.size() == 3) return make_um(arg(1), arg(2));
  if (head == "c0" && parts.size() == 3) return make_c0_repeat(arg(1), arg(2));
  if (head == "c1" && parts.size() == 3) return make_c1_repeat(arg(1), arg(2));
  if (head == "umx" && parts.size() == 3) return make_umx(arg(1), arg(2));
  throw Error(ErrorKind::Parse, "unknown code id '" + std::string(id) + "'");
}

std::optional<ConvCode> conv_code_of(const LinearCode& code) {
  if (code.family != Family::UmSimplex) return std::nullopt;
  return um_simplex(code.params.base_k);
}

}  // namespace xorlrc
