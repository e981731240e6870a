#include "kvtrace/omega.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

using namespace kvtrace;
using namespace kvtrace::testing;

namespace {

Polynomial P(Letter l) { return Polynomial::letter(l); }

// Brute-force span of |a w b| over all words a, b of total weight d - 2.
Subspace brute_force_ideal(int g, int d) {
  const auto& idx = necklace_index({g, 0}, d);
  Subspace s(idx.size());
  for (const auto& p : two_sided_ideal_generators(g, d)) s.insert(idx.coords(trace_project(p)));
  return s;
}

Derivation random_descending(Rng& rng, int g, int k) {
  auto basis = lie_derivation_basis(g, k);
  auto w = descending_derivations(g, k).basis();
  Derivation f;
  for (const auto& v : w) f += random_scalar(rng) * combine(basis, v);
  return f;
}

}  // namespace

TEST(OmegaFamily, Shapes) {
  for (int g = 1; g <= 3; ++g) {
    auto f = omega_family({g, 0});
    EXPECT_EQ(f.omega.max_weight(), 2);
    EXPECT_TRUE(f.omega.is_homogeneous());
    EXPECT_TRUE(is_lie(f.omega));
    EXPECT_EQ(f.omega_prime, f.omega - bracket(P(x(g)), P(y(g))));
    EXPECT_EQ(f.omega_dprime, f.omega_prime - (g >= 2 ? bracket(P(x(g - 1)), P(y(g - 1))) : Polynomial()));
  }
  auto fz = omega_family({1, 2});
  EXPECT_EQ(fz.omega.coeff({z(2)}), 1);
}

TEST(IdealTraceSpan, Examples) {
  EXPECT_EQ(ideal_trace_span(1, 2).dim(), 0u);
  EXPECT_EQ(ideal_trace_span(1, 3).dim(), 0u);
  // g = 2, d = 3: the 8 x 24 coefficient matrix of {|x_i w|, |y_i w|, |w x_i|, |w y_i|}.
  const auto& idx = necklace_index({2, 0}, 3);
  ASSERT_EQ(idx.size(), 24u);
  std::vector<SparseVector> rows;
  for (auto l : Ambient{2, 0}.generators()) {
    rows.push_back(idx.coords(trace_project(P(l) * omega(2))));
    rows.push_back(idx.coords(trace_project(omega(2) * P(l))));
  }
  auto k = echelon_kernel(Matrix::from_rows(24, rows));
  EXPECT_EQ(ideal_trace_span(2, 3).dim(), k.rank);
}

TEST(IdealTraceSpan, LeftMultiplesSufficeForTwoSidedIdeal) {
  for (int g = 1; g <= 3; ++g)
    for (int d = 2; d <= (g == 3 ? 5 : 6); ++d)
      EXPECT_TRUE(ideal_trace_span(g, d) == brute_force_ideal(g, d)) << g << " " << d;
}

TEST(QuotientModel, DimensionAndBlocks) {
  for (int g = 1; g <= 3; ++g)
    for (int d = 1; d <= 5; ++d) {
      const auto& m = quotient_model(g, d);
      Subspace span = ideal_trace_span(g, d);
      EXPECT_EQ(m.dim(), m.trace_dim() - span.dim());
      EXPECT_TRUE(m.ideal_span() == span);
    }
  // g = 1: |T(H)_w| is the commutative polynomial ring in x, y.
  for (int d = 0; d <= 6; ++d) EXPECT_EQ(quotient_model(1, d).dim(), static_cast<std::size_t>(d + 1));
}

TEST(QuotientModel, IdealElementsProjectToZero) {
  Rng rng(31);
  for (int g = 2; g <= 3; ++g)
    for (int d = 2; d <= 5; ++d) {
      const auto& m = quotient_model(g, d);
      for (int t = 0; t < 10; ++t) {
        Polynomial a = random_homogeneous(rng, {g, 0}, d - 2, 3);
        Polynomial b = random_homogeneous(rng, {g, 0}, 0, 1);
        Word split = random_word(rng, {g, 0}, d - 2);
        Polynomial lhs(Word(split.begin(), split.begin() + split.size() / 2));
        Polynomial rhs(Word(split.begin() + split.size() / 2, split.end()));
        EXPECT_TRUE(m.project(trace_project(a * omega(g))).empty());
        EXPECT_TRUE(m.project(trace_project(lhs * omega(g) * rhs * b)).empty());
      }
    }
}

TEST(QuotientModel, RhoRelationVanishes) {
  for (int g = 2; g <= 3; ++g) {
    const auto f = omega_family({g, 0});
    // b empty, and b = x_1.
    for (const Polynomial& b : {Polynomial::constant(1), P(x(1)), P(y(1)) * P(x(g))}) {
      const int d = b.max_weight() + 2;
      TracePolynomial t = trace_project(b * P(y(g)) * P(x(g))) - trace_project(b * P(x(g)) * P(y(g))) -
                          trace_project(b * f.omega_prime);
      EXPECT_TRUE(quotient_model(g, d).project(t).empty());
    }
  }
}

TEST(QuotientModel, SectionIsRightInverse) {
  for (int g = 1; g <= 3; ++g)
    for (int d = 0; d <= 4; ++d) {
      const auto& m = quotient_model(g, d);
      for (std::size_t q = 0; q < m.dim(); ++q)
        EXPECT_TRUE(m.project(TracePolynomial(m.section_word(q))) == SparseVector::unit(q));
    }
}

TEST(QuotientModel, WellDefinedOnTraces) {
  Rng rng(32);
  for (int t = 0; t < 20; ++t) {
    Polynomial p = random_homogeneous(rng, {2, 0}, 2), q = random_homogeneous(rng, {2, 0}, 3);
    const auto& m = quotient_model(2, 5);
    EXPECT_TRUE(m.project(trace_project(p * q)) == m.project(trace_project(q * p)));
  }
}

TEST(QuotientModel, DegreeMismatch) {
  EXPECT_THROW(quotient_model(2, 3).project(trace({x(1)})), DegreeMismatch);
}

TEST(LieIdeal, DescendingAndIdealValued) {
  for (int g = 1; g <= 2; ++g)
    for (int k = 1; k <= 2; ++k) {
      Subspace w = descending_derivations(g, k);
      Subspace z = ideal_valued_derivations(g, k);
      EXPECT_TRUE(contains_subspace(w, z));
      auto basis = lie_derivation_basis(g, k);
      for (const auto& v : w.basis()) EXPECT_TRUE(in_lie_ideal(g, combine(basis, v).apply(omega(g))));
    }
}

TEST(Lift, ZeroAndAlreadyPreserving) {
  EXPECT_TRUE(omega_preserving_lift(2, Derivation()).lifted.is_zero());
  Derivation inner = inner_derivation({2, 0}, omega(2));
  EXPECT_TRUE(inner.apply(omega(2)).is_zero());
  auto res = omega_preserving_lift(2, inner);
  EXPECT_EQ(res.lifted, inner);
  EXPECT_TRUE(res.defect.is_zero());
}

TEST(Lift, RandomDescendingDerivations) {
  Rng rng(33);
  for (int g = 2; g <= 3; ++g)
    for (int k = 1; k <= (g == 2 ? 3 : 2); ++k)
      for (int t = 0; t < 5; ++t) {
        Derivation f = random_descending(rng, g, k);
        auto res = omega_preserving_lift(g, f);
        EXPECT_TRUE(res.lifted.apply(omega(g)).is_zero());
        for (auto l : Ambient{g, 0}.generators()) {
          Polynomial diff = res.lifted.image(l) - f.image(l);
          EXPECT_TRUE(in_lie_ideal(g, diff));
          EXPECT_TRUE(is_lie(res.lifted.image(l)));
        }
      }
}

TEST(Lift, RejectsNonDescending) {
  // x_1 -> [x_1, y_1] does not preserve the ideal at g = 2.
  Derivation f({{x(1), bracket(P(x(1)), P(y(1)))}});
  EXPECT_THROW(omega_preserving_lift(2, f), NoSolution);
  Derivation bad({{x(1), P(x(1)) * P(y(1))}});
  EXPECT_THROW(omega_preserving_lift(2, bad), NotLie);
}

TEST(CommutatorSolve, Examples) {
  Polynomial b = bracket(P(x(1)), P(y(1)) * P(x(1)));
  auto c = commutator_solve(2, {x(1)}, b);
  ASSERT_TRUE(c.has_value());
  EXPECT_TRUE(in_two_sided_ideal(2, b - bracket(P(x(1)), *c)));
  EXPECT_FALSE(commutator_solve(2, {x(1)}, P(x(1))).has_value());
}

TEST(CommutatorSolve, QualifyingInstancesSolve) {
  Rng rng(34);
  const std::vector<Word> zs = {{x(1)}, {y(2)}, {x(1), x(2)}, {x(1), y(1)}};
  for (int t = 0; t < 24; ++t) {
    const Word& zw = zs[t % zs.size()];
    const int d = weight(zw) + 1 + static_cast<int>(rng() % (5 - weight(zw)));
    Polynomial c = random_homogeneous(rng, {2, 0}, d - weight(zw), 3);
    Polynomial b = bracket(Polynomial(zw), c);
    // |[z, c] z^l| vanishes already in |T(H)|; the added ideal element vanishes in the quotient.
    const int ell = d + 2;
    ASSERT_TRUE(trace_project(b * power(Polynomial(zw), ell)).is_zero());
    if (d >= 2) {
      Word m1 = random_word(rng, {2, 0}, (d - 2) / 2), m2 = random_word(rng, {2, 0}, d - 2 - (d - 2) / 2);
      b += random_scalar(rng) * (Polynomial(m1) * omega(2) * Polynomial(m2));
    }
    auto sol = commutator_solve(2, zw, b);
    ASSERT_TRUE(sol.has_value());
    EXPECT_TRUE(in_two_sided_ideal(2, b - bracket(Polynomial(zw), *sol)));
  }
}

TEST(CommutatorSolve, TraceKernelIsCommutatorSpace) {
  // {b : |b z^l| = 0 in |T(H)_w|} equals [z, T(H)] + <w> for z = x_1, l = d + 2.
  const int g = 2;
  const Word zw = {x(1)};
  for (int d = 1; d <= 2; ++d) {
    const int ell = d + 2;
    const auto& model = quotient_model(g, d + ell);
    const auto words = words_of_weight({g, 0}, d);
    std::vector<SparseVector> cols;
    for (const auto& w : words) cols.push_back(model.project(trace_project(Polynomial(w) * power(Polynomial(zw), ell))));
    auto ker = echelon_kernel(Matrix::from_columns(model.dim(), cols)).kernel;
    Subspace comm(words.size());
    for (const auto& w : words_of_weight({g, 0}, d - 1)) comm.insert(word_coords(bracket(Polynomial(zw), Polynomial(w)), g));
    for (const auto& p : two_sided_ideal_generators(g, d)) comm.insert(word_coords(p, g));
    EXPECT_TRUE(ker == comm) << d;
  }
}
