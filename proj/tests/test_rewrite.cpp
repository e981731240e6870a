#include "kvtrace/rewrite.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

using namespace kvtrace;
using namespace kvtrace::testing;

namespace {

Polynomial P(Letter l) { return Polynomial::letter(l); }

bool vanishes(int g, const TracePolynomial& t) { return project_by_degree(g, t).empty(); }

// Pairs (y_g at i, x_g at j) with every letter cyclically between them in {x_g, y_g}.
Irregularity irregularity_by_pairs(const Word& w, int g) {
  const std::size_t n = w.size();
  long count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (w[i] != y(g)) continue;
    for (std::size_t k = 1; k < n; ++k) {
      const Letter l = w[(i + k) % n];
      if (l != x(g) && l != y(g)) break;
      if (l == x(g)) ++count;
      if (k == n - 1) {
        // went all the way round: only g-letters
        bool has_x = false;
        for (auto m : w) has_x |= m == x(g);
        if (has_x) return Irregularity::infinity();
      }
    }
  }
  return {false, count};
}

TracePolynomial random_finite_trace(Rng& rng, int g, int d, int terms) {
  TracePolynomial t;
  while (static_cast<int>(t.size()) < terms) {
    Word w = random_word(rng, {g, 0}, d);
    if (!irregularity_is_infinite(w, g)) t.add_term(CyclicWord(w), random_nonzero(rng));
  }
  return t;
}

}  // namespace

TEST(Irregularity, Examples) {
  const int g = 2;
  EXPECT_EQ(irregularity(Word{y(g), x(g), x(1)}, g), (Irregularity{false, 1}));
  EXPECT_EQ(irregularity(Word{y(g), x(g), x(g), y(g), x(g), y(1)}, g), (Irregularity{false, 4}));
  EXPECT_TRUE(irregularity(Word{y(g), x(g), x(g)}, g).infinite);
  EXPECT_EQ(irregularity(Word{y(g)}, g), (Irregularity{false, 0}));
  EXPECT_EQ(irregularity(Word{}, g), (Irregularity{false, 0}));
  EXPECT_EQ(irregularity(Word{x(g), x(g)}, g), (Irregularity{false, 0}));
}

TEST(Irregularity, MatchesPairCountAndIsCyclic) {
  Rng rng(41);
  for (int g = 1; g <= 3; ++g)
    for (int trial = 0; trial < 200; ++trial) {
      Word w = random_word(rng, {g, 0}, 1 + static_cast<int>(rng() % 8));
      const auto irr = irregularity(w, g);
      EXPECT_EQ(irr, irregularity_by_pairs(w, g)) << to_string(w);
      EXPECT_EQ(irr, irregularity(rotate(w, rng() % w.size()), g));
    }
}

TEST(Rho, StepIsSoundAndDecreasing) {
  Rng rng(42);
  for (int g = 2; g <= 3; ++g)
    for (int trial = 0; trial < 60; ++trial) {
      Word w = random_word(rng, {g, 0}, 2 + static_cast<int>(rng() % 5));
      CyclicWord c(w);
      const auto irr = irregularity(c, g);
      if (irr.infinite) continue;
      for (auto p : rho_occurrences(c.rep(), g)) {
        TracePolynomial t(c, 3);
        TracePolynomial s = rho_step(t, c, p, g);
        EXPECT_TRUE(vanishes(g, s - t));
        const TracePolynomial step = rho_rewrite_word(c.rep(), p, g);
        for (const auto& [out, _] : step.terms()) EXPECT_TRUE(irregularity(out, g) < irr);
      }
    }
}

TEST(Rho, StepRejectsNonOccurrence) {
  CyclicWord c(Word{x(2), y(2), x(1)});
  EXPECT_THROW(rho_rewrite_word(c.rep(), 0, 2), NoOccurrence);
}

TEST(Rho, StrategiesConverge) {
  Rng rng(43);
  for (int g = 2; g <= 3; ++g)
    for (int trial = 0; trial < 20; ++trial) {
      const int d = 3 + static_cast<int>(rng() % 4);
      TracePolynomial t = random_finite_trace(rng, g, d, 3);
      TracePolynomial nf = rho_normalize(t, g);
      for (const auto& [c, _] : nf.terms()) EXPECT_EQ(irregularity(c, g), (Irregularity{false, 0}));
      EXPECT_TRUE(vanishes(g, nf - t));
      for (int run = 0; run < 3; ++run) {
        auto r = rho_normalize_random(t, g, rng);
        EXPECT_TRUE(r.decreasing);
        EXPECT_EQ(r.result, nf);
      }
    }
}

TEST(Rho, InfiniteIrregularityIsReported) {
  TracePolynomial t = trace({y(2), x(2), x(1)}) + trace({y(2), x(2), x(2)});
  try {
    rho_normalize(t, 2);
    FAIL();
  } catch (const InfiniteIrregularity& e) {
    ASSERT_EQ(e.words().size(), 1u);
    EXPECT_EQ(e.words()[0], CyclicWord(Word{x(2), x(2), y(2)}));
  }
}

TEST(Collapse, ReachesBlockWithSoundRemainder) {
  Rng rng(44);
  for (int g = 1; g <= 3; ++g)
    for (int trial = 0; trial < 40; ++trial) {
      const int n = 2 + static_cast<int>(rng() % 6);
      Word w;
      for (int i = 0; i < n; ++i) w.push_back(rng() % 2 ? x(g) : y(g));
      if (!irregularity_is_infinite(w, g)) continue;
      CyclicWord c(w);
      auto col = collapse_infinite(c, g);
      EXPECT_TRUE(in_Y(col.normal, g));
      EXPECT_FALSE(irregularity(col.remainder, g).infinite);
      EXPECT_TRUE(vanishes(g, TracePolynomial(c) - TracePolynomial(col.normal) - col.remainder));
      if (g == 1) {
        EXPECT_TRUE(col.remainder.is_zero());
      }
    }
  EXPECT_THROW(collapse_infinite(CyclicWord(Word{x(2), y(1)}), 2), FiniteIrregularity);
}

TEST(Holonomy, DataIdentities) {
  for (int g = 2; g <= 3; ++g)
    for (int s = 1; s <= 3; ++s)
      for (int t = 1; t <= 3; ++t) {
        auto h = holonomy_data(s, t, g);
        EXPECT_EQ(h.r.max_weight(), s + t - 2);
        for (const auto& [w, _] : h.r_prime.terms())
          for (std::size_t i = 0; i + 1 < w.size(); ++i) EXPECT_FALSE(w[i] == y(g) && w[i + 1] == x(g));
        const Polynomial wp = symplectic_sum(g - 1);
        EXPECT_EQ(rho_normalize(trace_project(h.r * wp), g), trace_project(h.r_prime * wp));
        EXPECT_EQ(h.r_prime - h.b, Scalar(s) * power(P(x(g)), s - 1) * power(P(y(g)), t - 1));
      }
}

TEST(Holonomy, LinearRewritingMatchesDefinition) {
  // r'_{1,2} = y_g; r'_{2,1} = 2 x_g; r'_{2,2} = x_g y_g + (x_g y_g + w') = 2 x_g y_g + w'.
  const int g = 2;
  EXPECT_EQ(holonomy_data(1, 2, g).r_prime, P(y(g)));
  EXPECT_EQ(holonomy_data(2, 1, g).r_prime, Scalar(2) * P(x(g)));
  EXPECT_EQ(holonomy_data(2, 2, g).r_prime, Scalar(2) * P(x(g)) * P(y(g)) + omega_family({g, 0}).omega_prime);
  EXPECT_THROW(holonomy_data(0, 2, g), std::invalid_argument);
}

TEST(Beads, StandardLoopHolonomy) {
  for (int g = 2; g <= 3; ++g)
    for (int s = 1; s <= 3; ++s)
      for (int t = 1; t <= 3; ++t) {
        auto h = holonomy_data(s, t, g);
        TracePolynomial expected = Scalar(t) * trace_project(h.r_prime * symplectic_sum(g - 1));
        EXPECT_EQ(bead_loop_holonomy(BeadConfig::base(s, t), standard_loop(s, t), g), expected) << s << " " << t;
      }
}

TEST(Beads, IllegalMoveAndOpenPath) {
  BeadConfig base = BeadConfig::base(2, 2);
  EXPECT_FALSE(base.legal(1));  // y1 is followed by y2
  EXPECT_TRUE(base.legal(2));
  EXPECT_THROW(bead_loop_holonomy(base, {1}, 2), IllegalMove);
  EXPECT_THROW(bead_loop_holonomy(base, {2}, 2), NotALoop);
  EXPECT_THROW(BeadConfig(2, 1, {{true, 2}, {false, 1}, {false, 1}}), std::invalid_argument);
}

TEST(Rho2, RelationHoldsInQuotient) {
  for (int g = 2; g <= 3; ++g)
    for (int s = 1; s <= 3; ++s)
      for (int t = 1; t <= 3; ++t) {
        if (s + t < 3 || (g == 3 && s + t > 5)) continue;
        CyclicWord pat = rho2_pattern(g, s, t);
        auto m = rho2_match(pat, g);
        ASSERT_TRUE(m.has_value());
        EXPECT_EQ(*m, (std::pair{s, t}));
        EXPECT_TRUE(vanishes(g, TracePolynomial(pat) - rho2_rhs(g, s, t))) << g << " " << s << " " << t;
      }
  EXPECT_FALSE(rho2_match(rho2_pattern(2, 1, 1), 2).has_value());
  EXPECT_FALSE(rho2_match(CyclicWord(Word{x(2), x(1), y(1)}), 2).has_value());
}

TEST(NormalForm, BasisSizeMatchesQuotient) {
  for (int g = 1; g <= 3; ++g)
    for (int d = 0; d <= (g == 3 ? 5 : 6); ++d) {
      auto basis = basis_XY(g, d);
      const auto& m = quotient_model(g, d);
      EXPECT_EQ(basis.size(), m.dim()) << g << " " << d;
      Subspace img(m.dim());
      for (const auto& c : basis) img.insert(m.project(TracePolynomial(c)));
      EXPECT_EQ(img.dim(), basis.size()) << g << " " << d;
    }
}

TEST(NormalForm, SoundAndInBasis) {
  Rng rng(45);
  for (int g = 1; g <= 3; ++g)
    for (int trial = 0; trial < 20; ++trial) {
      const int d = 2 + static_cast<int>(rng() % 4);
      TracePolynomial t = random_trace(rng, {g, 0}, d, 4);
      TracePolynomial nf = normal_form(t, g);
      auto basis = basis_XY(g, d);
      for (const auto& [c, _] : nf.terms()) EXPECT_TRUE(std::binary_search(basis.begin(), basis.end(), c)) << to_string(c);
      EXPECT_TRUE(vanishes(g, nf - t));
      EXPECT_EQ(normal_form(nf, g), nf);
    }
}

TEST(NormalForm, IdealElementsNormalizeToZero) {
  Rng rng(46);
  for (int g = 2; g <= 3; ++g)
    for (int trial = 0; trial < 10; ++trial) {
      const int d = 2 + static_cast<int>(rng() % 3);
      Polynomial m = random_homogeneous(rng, {g, 0}, d - 2, 3);
      EXPECT_TRUE(normal_form(trace_project(m * omega(g)), g).is_zero());
    }
}

TEST(NormalForm, GenusOneIsCommutative) {
  TracePolynomial t = trace({x(1), y(1), x(1), y(1)}) - trace({x(1), x(1), y(1), y(1)});
  EXPECT_TRUE(normal_form(t, 1).is_zero());
  EXPECT_EQ(basis_XY(1, 3).size(), 4u);
}
