#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace xorlrc {

/// Packed GF(2) vector. Bits are stored least-significant-first inside
/// 64-bit words; bits past size() are always zero so equality is exact.
class BitVector {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  BitVector() = default;
  explicit BitVector(std::size_t len);

  /// Parses a string of '0'/'1' characters.
  static BitVector from_string(std::string_view bits);
  /// Low `len` bits of `value`; bit i of the vector is bit i of value.
  static BitVector from_word(Word value, std::size_t len);

  std::size_t size() const noexcept { return len_; }
  bool empty() const noexcept { return len_ == 0; }

  bool get(std::size_t i) const;
  void set(std::size_t i, bool value = true);
  void flip(std::size_t i);

  std::size_t weight() const noexcept;
  bool is_zero() const noexcept;
  /// Inner product over GF(2).
  bool dot(const BitVector& other) const;
  /// Index of the lowest set bit, or size() when zero.
  std::size_t first_set() const noexcept;

  BitVector& operator^=(const BitVector& other);
  friend BitVector operator^(BitVector lhs, const BitVector& rhs) {
    lhs ^= rhs;
    return lhs;
  }

  bool operator==(const BitVector& other) const = default;
  /// Lexicographic by bit index; used only for deterministic ordering.
  bool operator<(const BitVector& other) const;

  std::span<const Word> words() const noexcept { return words_; }
  std::span<Word> words() noexcept { return words_; }

  std::string to_string() const;

 private:
  std::size_t len_ = 0;
  std::vector<Word> words_;
};

class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols);

  static BitMatrix identity(std::size_t n);
  static BitMatrix from_rows(std::vector<BitVector> rows, std::size_t cols);
  static BitMatrix from_strings(std::initializer_list<std::string_view> rows);
  /// Builds a rows x columns.size() matrix from column vectors.
  static BitMatrix from_columns(std::span<const BitVector> columns, std::size_t rows);

  std::size_t rows() const noexcept { return rows_.size(); }
  std::size_t cols() const noexcept { return cols_; }

  bool get(std::size_t r, std::size_t c) const { return rows_.at(r).get(c); }
  void set(std::size_t r, std::size_t c, bool value = true) { rows_.at(r).set(c, value); }

  const BitVector& row(std::size_t r) const { return rows_.at(r); }
  const std::vector<BitVector>& row_vectors() const noexcept { return rows_; }
  BitVector column(std::size_t c) const;
  /// Column c packed into a single word (bit i = row i). Requires rows() <= 64.
  std::uint64_t column_word(std::size_t c) const;
  bool is_zero() const noexcept;

  BitMatrix transpose() const;
  BitMatrix select_columns(std::span<const std::size_t> columns) const;
  BitMatrix drop_columns(std::span<const std::size_t> columns) const;
  BitMatrix first_columns(std::size_t count) const;
  BitMatrix hconcat(const BitMatrix& right) const;
  BitMatrix vconcat(const BitMatrix& below) const;
  /// Copies `block` into this matrix with its top-left corner at (r0, c0).
  void place(const BitMatrix& block, std::size_t r0, std::size_t c0);

  /// Row-vector product u * M.
  BitVector left_multiply(const BitVector& u) const;
  BitMatrix operator*(const BitMatrix& rhs) const;

  bool operator==(const BitMatrix& other) const = default;

 private:
  std::size_t cols_ = 0;
  std::vector<BitVector> rows_;
};

std::size_t rank(const BitMatrix& m);

/// True iff the rows are linearly independent (some X has m * X = I).
bool is_right_invertible(const BitMatrix& m);

/// Finds u with u * m == target. Among several solutions returns the one
/// whose free variables are zero under leftmost-pivot reduced row echelon
/// form. Returns nullopt when target is outside the row space.
std::optional<BitVector> try_solve_right(const BitMatrix& m, const BitVector& target);

/// As try_solve_right, but throws Error(NoSolution) instead of nullopt.
BitVector solve_right(const BitMatrix& m, const BitVector& target);

/// Reduced row echelon form with leftmost pivots; returns the pivot columns.
std::vector<std::size_t> rref_in_place(BitMatrix& m);

/// Basis (as rows) of { x : m * x^T = 0 }.
BitMatrix null_space(const BitMatrix& m);

/// Minimum weight over all nonzero row combinations, by Gray-code
/// enumeration. Requires 1 <= rows <= 24 and rank >= 1.
std::size_t min_weight_nonzero_rowspan(const BitMatrix& m);

inline constexpr std::size_t kMaxEnumerationRows = 24;

/// Text format: "rows cols" then one line of '0'/'1' per row.
std::string to_text(const BitMatrix& m);
BitMatrix parse_text(std::string_view text);

}  // namespace xorlrc
