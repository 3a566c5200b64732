#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "xorlrc/error.hpp"
#include "xorlrc/gf2.hpp"

using namespace xorlrc;

namespace {

BitMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, double p = 0.5) {
  std::bernoulli_distribution coin(p);
  BitMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (coin(rng)) m.set(r, c);
  return m;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::Io;
}

}  // namespace

TEST_CASE("bit vector basics") {
  auto v = BitVector::from_string("1011001");
  CHECK(v.size() == 7);
  CHECK(v.weight() == 4);
  CHECK(v.to_string() == "1011001");
  CHECK(v.first_set() == 0);
  v.flip(0);
  CHECK(v.first_set() == 2);
  CHECK(BitVector(5).is_zero());
  CHECK(BitVector(5).first_set() == 5);

  const auto w = BitVector::from_word(0b101, 3);
  CHECK(w.to_string() == "101");
  CHECK(w.dot(BitVector::from_string("111")) == false);
  CHECK(w.dot(BitVector::from_string("100")) == true);

  CHECK(kind_of([] { BitVector::from_string("10x"); }) == ErrorKind::Parse);
  CHECK(kind_of([] { BitVector(3) ^= BitVector(4); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("tail bits stay clear across word boundaries") {
  for (std::size_t len : {1U, 63U, 64U, 65U, 130U}) {
    BitVector a(len);
    for (std::size_t i = 0; i < len; ++i) a.set(i);
    CHECK(a.weight() == len);
    BitVector b(len);
    b.set(len - 1);
    a ^= b;
    CHECK(a.weight() == len - 1);
    CHECK(!a.get(len - 1));
  }
}

TEST_CASE("rank agrees with dense elimination") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rows = 1 + rng() % 12;
    const std::size_t cols = 1 + rng() % 70;
    const auto m = random_matrix(rng, rows, cols, trial % 3 == 0 ? 0.1 : 0.5);
    CHECK(rank(m) == oracle::rank(oracle::dense(m)));
    CHECK(is_right_invertible(m) == (oracle::rank(oracle::dense(m)) == rows));
  }
  CHECK(rank(BitMatrix::identity(70)) == 70);
  CHECK(rank(BitMatrix(4, 9)) == 0);
}

TEST_CASE("transpose and products") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_matrix(rng, 1 + rng() % 9, 1 + rng() % 80);
    const auto b = random_matrix(rng, a.cols(), 1 + rng() % 9);
    CHECK(a.transpose().transpose() == a);
    CHECK(oracle::dense(a * b) == oracle::multiply(oracle::dense(a), oracle::dense(b)));
    CHECK(a * BitMatrix::identity(a.cols()) == a);
  }
  CHECK(kind_of([] { (void)(BitMatrix(2, 3) * BitMatrix(2, 3)); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("column selection and concatenation") {
  const auto m = BitMatrix::from_strings({"1010", "0111"});
  const std::vector<std::size_t> pick{3, 0};
  CHECK(m.select_columns(pick) == BitMatrix::from_strings({"01", "10"}));
  CHECK(m.drop_columns(pick) == BitMatrix::from_strings({"01", "11"}));
  CHECK(m.first_columns(2) == BitMatrix::from_strings({"10", "01"}));
  CHECK(m.hconcat(m) == BitMatrix::from_strings({"10101010", "01110111"}));
  CHECK(m.vconcat(m).rows() == 4);
  CHECK(m.column(1) == BitVector::from_string("01"));
  CHECK(m.column_word(2) == 0b11);
  BitMatrix big(3, 6);
  big.place(m, 1, 2);
  CHECK(big == BitMatrix::from_strings({"000000", "001010", "000111"}));
}

TEST_CASE("solve_right returns a valid preimage") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const auto m = random_matrix(rng, 1 + rng() % 10, 1 + rng() % 20);
    BitVector u(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
      if (rng() & 1U) u.set(i);
    const auto target = m.left_multiply(u);
    const auto x = try_solve_right(m, target);
    REQUIRE(x.has_value());
    CHECK(m.left_multiply(*x) == target);
  }
  // A target outside the row space.
  const auto m = BitMatrix::from_strings({"110", "011"});
  CHECK(!try_solve_right(m, BitVector::from_string("100")).has_value());
  CHECK(kind_of([&] { solve_right(m, BitVector::from_string("100")); }) == ErrorKind::NoSolution);
}

TEST_CASE("solve_right picks zero free variables") {
  // Rows 0 and 2 are equal, so either produces the target; row 2 is free.
  const auto m = BitMatrix::from_strings({"1100", "0011", "1100"});
  CHECK(solve_right(m, BitVector::from_string("1111")).to_string() == "110");
}

TEST_CASE("rref pivots are leftmost") {
  auto m = BitMatrix::from_strings({"0110", "0101", "0011"});
  const auto pivots = rref_in_place(m);
  CHECK(pivots == std::vector<std::size_t>{1, 2});
  CHECK(m.row(0).to_string() == "0101");
  CHECK(m.row(1).to_string() == "0011");
  CHECK(m.row(2).is_zero());
}

TEST_CASE("null space is orthogonal with the right dimension") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = random_matrix(rng, 1 + rng() % 8, 1 + rng() % 16);
    const auto ns = null_space(m);
    CHECK(ns.rows() == m.cols() - rank(m));
    if (ns.rows() > 0) {
      CHECK(rank(ns) == ns.rows());
      CHECK((m * ns.transpose()).is_zero());
    }
  }
}

TEST_CASE("minimum weight enumeration matches brute force") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    auto m = random_matrix(rng, 1 + rng() % 8, 2 + rng() % 20, 0.4);
    if (rank(m) == 0) m.set(0, 0);
    CHECK(min_weight_nonzero_rowspan(m) == oracle::min_distance(oracle::dense(m)));
  }
  CHECK(kind_of([] { min_weight_nonzero_rowspan(BitMatrix(3, 4)); }) == ErrorKind::RankZero);
  CHECK(kind_of([] { min_weight_nonzero_rowspan(BitMatrix::identity(25)); }) == ErrorKind::TooLarge);
}

TEST_CASE("text format round trip") {
  std::mt19937_64 rng(2);
  const auto m = random_matrix(rng, 5, 13);
  const auto text = to_text(m);
  CHECK(text.substr(0, 5) == "5 13\n");
  CHECK(parse_text(text) == m);
  CHECK(kind_of([] { parse_text("2 3\n101\n"); }) == ErrorKind::Parse);
  CHECK(kind_of([] { parse_text("1 3\n1011\n"); }) == ErrorKind::Parse);
  CHECK(kind_of([] { parse_text("1 3\n1a1\n"); }) == ErrorKind::Parse);
}
