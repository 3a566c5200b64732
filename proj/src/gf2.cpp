#include "xorlrc/gf2.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <sstream>

#include "xorlrc/error.hpp"

namespace xorlrc {

namespace {

std::size_t word_count(std::size_t bits) { return (bits + BitVector::kWordBits - 1) / BitVector::kWordBits; }

void check_index(std::size_t i, std::size_t len) {
  if (i >= len) {
    throw Error(ErrorKind::DimensionMismatch,
                "bit index " + std::to_string(i) + " out of range " + std::to_string(len));
  }
}

}  // namespace

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NoSolution: return "NoSolution";
    case ErrorKind::RankZero: return "RankZero";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::InvalidDimension: return "InvalidDimension";
    case ErrorKind::InvalidBound: return "InvalidBound";
    case ErrorKind::EmptyPayload: return "EmptyPayload";
    case ErrorKind::NotCorrectable: return "NotCorrectable";
    case ErrorKind::ChecksumMismatch: return "ChecksumMismatch";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

// ---------------------------------------------------------------- BitVector

BitVector::BitVector(std::size_t len) : len_(len), words_(word_count(len), 0) {}

BitVector BitVector::from_string(std::string_view bits) {
  BitVector v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      v.set(i);
    } else if (bits[i] != '0') {
      throw Error(ErrorKind::Parse, "unexpected character in bit string");
    }
  }
  return v;
}

BitVector BitVector::from_word(Word value, std::size_t len) {
  if (len > kWordBits) throw Error(ErrorKind::DimensionMismatch, "from_word supports at most 64 bits");
  BitVector v(len);
  if (len > 0) v.words_[0] = len == kWordBits ? value : value & ((Word{1} << len) - 1);
  return v;
}

bool BitVector::get(std::size_t i) const {
  check_index(i, len_);
  return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
}

void BitVector::set(std::size_t i, bool value) {
  check_index(i, len_);
  const Word mask = Word{1} << (i % kWordBits);
  if (value) {
    words_[i / kWordBits] |= mask;
  } else {
    words_[i / kWordBits] &= ~mask;
  }
}

void BitVector::flip(std::size_t i) {
  check_index(i, len_);
  words_[i / kWordBits] ^= Word{1} << (i % kWordBits);
}

std::size_t BitVector::weight() const noexcept {
  std::size_t w = 0;
  for (Word x : words_) w += static_cast<std::size_t>(std::popcount(x));
  return w;
}

bool BitVector::is_zero() const noexcept {
  return std::all_of(words_.begin(), words_.end(), [](Word x) { return x == 0; });
}

bool BitVector::dot(const BitVector& other) const {
  if (other.len_ != len_) throw Error(ErrorKind::DimensionMismatch, "dot of unequal lengths");
  Word acc = 0;
  for (std::size_t i = 0; i < words_.size(); ++i) acc ^= words_[i] & other.words_[i];
  return std::popcount(acc) & 1;
}

std::size_t BitVector::first_set() const noexcept {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if (words_[w] != 0) return w * kWordBits + static_cast<std::size_t>(std::countr_zero(words_[w]));
  }
  return len_;
}

BitVector& BitVector::operator^=(const BitVector& other) {
  if (other.len_ != len_) throw Error(ErrorKind::DimensionMismatch, "xor of unequal lengths");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  return *this;
}

bool BitVector::operator<(const BitVector& other) const {
  if (len_ != other.len_) return len_ < other.len_;
  for (std::size_t i = 0; i < len_; ++i) {
    const bool a = get(i);
    const bool b = other.get(i);
    if (a != b) return !a;
  }
  return false;
}

std::string BitVector::to_string() const {
  std::string s(len_, '0');
  for (std::size_t i = 0; i < len_; ++i) {
    if (get(i)) s[i] = '1';
  }
  return s;
}

// ---------------------------------------------------------------- BitMatrix

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, BitVector(cols)) {}

BitMatrix BitMatrix::identity(std::size_t n) {
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i);
  return m;
}

BitMatrix BitMatrix::from_rows(std::vector<BitVector> rows, std::size_t cols) {
  for (const auto& r : rows) {
    if (r.size() != cols) throw Error(ErrorKind::DimensionMismatch, "row length differs from column count");
  }
  BitMatrix m;
  m.cols_ = cols;
  m.rows_ = std::move(rows);
  return m;
}

BitMatrix BitMatrix::from_strings(std::initializer_list<std::string_view> rows) {
  std::vector<BitVector> out;
  std::size_t cols = rows.size() == 0 ? 0 : rows.begin()->size();
  for (auto r : rows) out.push_back(BitVector::from_string(r));
  return from_rows(std::move(out), cols);
}

BitMatrix BitMatrix::from_columns(std::span<const BitVector> columns, std::size_t rows) {
  BitMatrix m(rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != rows) throw Error(ErrorKind::DimensionMismatch, "column length differs from row count");
    for (std::size_t r = 0; r < rows; ++r) {
      if (columns[c].get(r)) m.set(r, c);
    }
  }
  return m;
}

BitVector BitMatrix::column(std::size_t c) const {
  BitVector v(rows());
  for (std::size_t r = 0; r < rows(); ++r) {
    if (rows_[r].get(c)) v.set(r);
  }
  return v;
}

std::uint64_t BitMatrix::column_word(std::size_t c) const {
  if (rows() > 64) throw Error(ErrorKind::TooLarge, "column_word needs at most 64 rows");
  std::uint64_t w = 0;
  for (std::size_t r = 0; r < rows(); ++r) {
    if (rows_[r].get(c)) w |= std::uint64_t{1} << r;
  }
  return w;
}

bool BitMatrix::is_zero() const noexcept {
  return std::all_of(rows_.begin(), rows_.end(), [](const BitVector& r) { return r.is_zero(); });
}

BitMatrix BitMatrix::transpose() const {
  BitMatrix t(cols_, rows());
  for (std::size_t r = 0; r < rows(); ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      if (rows_[r].get(c)) t.set(c, r);
    }
  }
  return t;
}

BitMatrix BitMatrix::select_columns(std::span<const std::size_t> columns) const {
  BitMatrix m(rows(), columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j] >= cols_) throw Error(ErrorKind::DimensionMismatch, "column index out of range");
    for (std::size_t r = 0; r < rows(); ++r) {
      if (rows_[r].get(columns[j])) m.set(r, j);
    }
  }
  return m;
}

BitMatrix BitMatrix::drop_columns(std::span<const std::size_t> columns) const {
  std::vector<bool> drop(cols_, false);
  for (auto c : columns) {
    if (c >= cols_) throw Error(ErrorKind::DimensionMismatch, "column index out of range");
    drop[c] = true;
  }
  std::vector<std::size_t> keep;
  for (std::size_t c = 0; c < cols_; ++c) {
    if (!drop[c]) keep.push_back(c);
  }
  return select_columns(keep);
}

BitMatrix BitMatrix::first_columns(std::size_t count) const {
  std::vector<std::size_t> keep(std::min(count, cols_));
  for (std::size_t c = 0; c < keep.size(); ++c) keep[c] = c;
  return select_columns(keep);
}

BitMatrix BitMatrix::hconcat(const BitMatrix& right) const {
  if (right.rows() != rows()) throw Error(ErrorKind::DimensionMismatch, "hconcat row counts differ");
  BitMatrix m(rows(), cols_ + right.cols_);
  m.place(*this, 0, 0);
  m.place(right, 0, cols_);
  return m;
}

BitMatrix BitMatrix::vconcat(const BitMatrix& below) const {
  if (below.cols_ != cols_) throw Error(ErrorKind::DimensionMismatch, "vconcat column counts differ");
  BitMatrix m(rows() + below.rows(), cols_);
  m.place(*this, 0, 0);
  m.place(below, rows(), 0);
  return m;
}

void BitMatrix::place(const BitMatrix& block, std::size_t r0, std::size_t c0) {
  if (r0 + block.rows() > rows() || c0 + block.cols() > cols_) {
    throw Error(ErrorKind::DimensionMismatch, "block does not fit");
  }
  for (std::size_t r = 0; r < block.rows(); ++r) {
    for (std::size_t c = 0; c < block.cols(); ++c) {
      rows_[r0 + r].set(c0 + c, block.get(r, c));
    }
  }
}

BitVector BitMatrix::left_multiply(const BitVector& u) const {
  if (u.size() != rows()) throw Error(ErrorKind::DimensionMismatch, "message length differs from row count");
  BitVector out(cols_);
  for (std::size_t r = 0; r < rows(); ++r) {
    if (u.get(r)) out ^= rows_[r];
  }
  return out;
}

BitMatrix BitMatrix::operator*(const BitMatrix& rhs) const {
  if (cols_ != rhs.rows()) throw Error(ErrorKind::DimensionMismatch, "matrix product shape mismatch");
  BitMatrix out(rows(), rhs.cols());
  for (std::size_t r = 0; r < rows(); ++r) out.rows_[r] = rhs.left_multiply(rows_[r]);
  return out;
}

// ---------------------------------------------------------------- algorithms

std::vector<std::size_t> rref_in_place(BitMatrix& m) {
  // Work on a row copy so we can swap rows cheaply.
  std::vector<BitVector> rows = m.row_vectors();
  std::vector<std::size_t> pivots;
  std::size_t next = 0;
  for (std::size_t c = 0; c < m.cols() && next < rows.size(); ++c) {
    std::size_t p = next;
    while (p < rows.size() && !rows[p].get(c)) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[next], rows[p]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r != next && rows[r].get(c)) rows[r] ^= rows[next];
    }
    pivots.push_back(c);
    ++next;
  }
  m = BitMatrix::from_rows(std::move(rows), m.cols());
  return pivots;
}

std::size_t rank(const BitMatrix& m) {
  BitMatrix copy = m;
  return rref_in_place(copy).size();
}

bool is_right_invertible(const BitMatrix& m) { return rank(m) == m.rows(); }

std::optional<BitVector> try_solve_right(const BitMatrix& m, const BitVector& target) {
  if (target.size() != m.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "target length differs from column count");
  }
  // u * m = target  <=>  m^T u^T = target^T. Augment m^T with the target as
  // an extra last column and reduce; the unknowns are the rows of m.
  const std::size_t vars = m.rows();
  BitMatrix aug(m.cols(), vars + 1);
  for (std::size_t j = 0; j < m.cols(); ++j) {
    for (std::size_t i = 0; i < vars; ++i) {
      if (m.get(i, j)) aug.set(j, i);
    }
    if (target.get(j)) aug.set(j, vars);
  }
  const auto pivots = rref_in_place(aug);
  BitVector u(vars);
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    if (pivots[r] == vars) return std::nullopt;  // 0 = 1
    if (aug.get(r, vars)) u.set(pivots[r]);
  }
  return u;
}

BitVector solve_right(const BitMatrix& m, const BitVector& target) {
  auto u = try_solve_right(m, target);
  if (!u) throw Error(ErrorKind::NoSolution, "target is not in the row space");
  return *std::move(u);
}

BitMatrix null_space(const BitMatrix& m) {
  BitMatrix reduced = m;
  const auto pivots = rref_in_place(reduced);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;

  std::vector<BitVector> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    BitVector x(m.cols());
    x.set(f);
    for (std::size_t r = 0; r < pivots.size(); ++r) {
      if (reduced.get(r, f)) x.set(pivots[r]);
    }
    basis.push_back(std::move(x));
  }
  return BitMatrix::from_rows(std::move(basis), m.cols());
}

std::size_t min_weight_nonzero_rowspan(const BitMatrix& m) {
  if (m.rows() > kMaxEnumerationRows) {
    throw Error(ErrorKind::TooLarge, std::to_string(m.rows()) + " rows exceed the enumeration guard of 24");
  }
  if (rank(m) == 0) throw Error(ErrorKind::RankZero, "row space is trivial");

  BitVector acc(m.cols());
  std::size_t best = std::numeric_limits<std::size_t>::max();
  const std::uint64_t count = std::uint64_t{1} << m.rows();
  for (std::uint64_t i = 1; i < count; ++i) {
    acc ^= m.row(static_cast<std::size_t>(std::countr_zero(i)));
    const std::size_t w = acc.weight();
    if (w != 0 && w < best) best = w;
  }
  return best;
}

std::string to_text(const BitMatrix& m) {
  std::string out = std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
  for (const auto& r : m.row_vectors()) {
    out += r.to_string();
    out += '\n';
  }
  return out;
}

BitMatrix parse_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::size_t rows = 0;
  std::size_t cols = 0;
  if (!(in >> rows >> cols)) throw Error(ErrorKind::Parse, "missing 'rows cols' header");
  std::vector<BitVector> out;
  out.reserve(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    std::string line;
    if (cols == 0) {
      out.emplace_back(0);
      continue;
    }
    if (!(in >> line)) throw Error(ErrorKind::Parse, "expected " + std::to_string(rows) + " rows");
    if (line.size() != cols) throw Error(ErrorKind::Parse, "row " + std::to_string(r) + " has wrong length");
    out.push_back(BitVector::from_string(line));
  }
  std::string extra;
  if (in >> extra) throw Error(ErrorKind::Parse, "trailing data after matrix");
  return BitMatrix::from_rows(std::move(out), cols);
}

}  // namespace xorlrc
