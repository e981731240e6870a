#include "kvtrace/exactlin.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace kvtrace;

namespace {

SparseVector vec(std::initializer_list<int> xs) {
  std::vector<SparseVector::Entry> e;
  std::size_t i = 0;
  for (int v : xs) e.emplace_back(i++, Scalar(v));
  return SparseVector::from_pairs(e);
}

Matrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, double density) {
  std::uniform_int_distribution<int> val(-4, 4);
  std::bernoulli_distribution keep(density);
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (keep(rng)) {
        Scalar v(val(rng), 1 + (val(rng) + 4) % 3);
        v.canonicalize();
        m.set(i, j, v);
      }
  return m;
}

Subspace random_subspace(std::mt19937_64& rng, std::size_t n, std::size_t k) {
  Matrix m = random_matrix(rng, k, n, 0.4);
  return Subspace::span(n, m.row_data());
}

}  // namespace

TEST(Scalar, LowestTerms) {
  Scalar s(6, -4);
  s.canonicalize();
  EXPECT_EQ(s.get_num(), -3);
  EXPECT_EQ(s.get_den(), 2);
}

TEST(Scalar, BeyondMachineIntegers) {
  Scalar big(1);
  for (int i = 0; i < 40; ++i) big *= Scalar(1000003, 7);
  EXPECT_GT(big.get_num().get_str().size(), 200u);
  EXPECT_EQ(big / big, 1);
}

TEST(EchelonKernel, Identity) {
  auto r = echelon_kernel(Matrix::identity(3));
  EXPECT_EQ(r.rank, 3u);
  EXPECT_EQ(r.kernel.dim(), 0u);
}

TEST(EchelonKernel, ZeroMap) {
  auto r = echelon_kernel(Matrix(2, 5));
  EXPECT_EQ(r.rank, 0u);
  EXPECT_EQ(r.kernel.dim(), 5u);
}

TEST(EchelonKernel, RankOneTwoByTwo) {
  Matrix m = Matrix::from_rows(2, {vec({1, 2}), vec({2, 4})});
  auto r = echelon_kernel(m);
  EXPECT_EQ(r.rank, 1u);
  ASSERT_EQ(r.kernel.dim(), 1u);
  EXPECT_TRUE(r.kernel.contains(vec({-2, 1})));
}

TEST(EchelonKernel, RandomKernelVectorsAnnihilated) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t rows = 1 + rng() % 8, cols = 1 + rng() % 10;
    Matrix m = random_matrix(rng, rows, cols, 0.5);
    auto r = echelon_kernel(m);
    EXPECT_EQ(r.rank + r.kernel.dim(), cols);
    for (const auto& v : r.kernel.basis()) EXPECT_TRUE(m.apply(v).empty());
  }
}

TEST(Subspace, EchelonIdempotent) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    Subspace s = random_subspace(rng, 9, 1 + rng() % 6);
    Subspace again = Subspace::span(9, s.basis());
    EXPECT_TRUE(again == s);
    auto piv = s.pivot_cols();
    EXPECT_TRUE(std::is_sorted(piv.begin(), piv.end()));
    for (const auto& row : s.basis()) {
      EXPECT_EQ(row.leading_value(), 1);
      for (auto p : piv) {
        if (p != row.leading_index()) {
          EXPECT_EQ(row.at(p), 0);
        }
      }
    }
  }
}

TEST(Subspace, SumExample) {
  Subspace a = Subspace::span(2, {vec({1, 0})});
  Subspace b = Subspace::span(2, {vec({0, 1})});
  EXPECT_TRUE(sum(a, b) == Subspace::full(2));
}

TEST(Subspace, IntersectExample) {
  Subspace a = Subspace::span(2, {vec({1, 1})});
  Subspace b = Subspace::span(2, {vec({1, 0})});
  EXPECT_EQ(intersect(a, b).dim(), 0u);
}

TEST(Subspace, ContainsScalarMultiple) {
  EXPECT_TRUE(contains_vector(Subspace::span(2, {vec({1, 2})}), vec({2, 4})));
  EXPECT_FALSE(contains_vector(Subspace::span(2, {vec({1, 2})}), vec({2, 3})));
}

TEST(Subspace, GrassmannFormula) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 3 + rng() % 7;
    Subspace a = random_subspace(rng, n, rng() % n + 1);
    Subspace b = random_subspace(rng, n, rng() % n + 1);
    Subspace s = sum(a, b), i = intersect(a, b);
    EXPECT_EQ(a.dim() + b.dim(), s.dim() + i.dim());
    EXPECT_TRUE(contains_subspace(a, i));
    EXPECT_TRUE(contains_subspace(b, i));
    EXPECT_TRUE(contains_subspace(s, a));
    EXPECT_EQ(quotient_dim(a, b), s.dim() - b.dim());
  }
}

TEST(Subspace, MismatchedAmbient) {
  Subspace a(2), b(3);
  EXPECT_THROW(sum(a, b), MismatchedAmbient);
  EXPECT_THROW(intersect(a, b), MismatchedAmbient);
  EXPECT_THROW(quotient_dim(a, b), MismatchedAmbient);
  EXPECT_THROW(contains_vector(a, vec({0, 0, 1})), MismatchedAmbient);
}

TEST(Solve, ParticularSolution) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 30; ++trial) {
    Matrix m = random_matrix(rng, 6, 8, 0.5);
    std::vector<SparseVector::Entry> xe;
    for (std::size_t j = 0; j < 8; ++j) xe.emplace_back(j, Scalar(int(rng() % 7) - 3));
    SparseVector b = m.apply(SparseVector::from_pairs(xe));
    auto sol = solve(m, b);
    ASSERT_TRUE(sol.has_value());
    EXPECT_TRUE(m.apply(*sol) == b);
  }
}

TEST(Solve, Inconsistent) {
  Matrix m = Matrix::from_rows(2, {vec({1, 1}), vec({2, 2})});
  EXPECT_FALSE(solve(m, vec({1, 0})).has_value());
}

TEST(Matrix, FromColumnsTransposesFromRows) {
  std::vector<SparseVector> cols = {vec({1, 0, 2}), vec({0, 3, 0})};
  Matrix m = Matrix::from_columns(3, cols);
  EXPECT_EQ(m.rows(), 3u);
  EXPECT_EQ(m.cols(), 2u);
  EXPECT_EQ(m.at(2, 0), 2);
  EXPECT_EQ(m.at(1, 1), 3);
  EXPECT_TRUE(m.apply(SparseVector::unit(1)) == cols[1]);
}
