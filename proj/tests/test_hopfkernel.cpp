#include "kvtrace/hopfkernel.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

using namespace kvtrace;
using namespace kvtrace::testing;

namespace {

Polynomial P(Letter l) { return Polynomial::letter(l); }

using Tensor3 = std::map<std::tuple<Word, Word, Word>, Scalar>;

void add(Tensor3& t, const Word& a, const Word& b, const Word& c, const Scalar& s) {
  auto& v = t[{a, b, c}];
  v += s;
  if (v == 0) t.erase({a, b, c});
}

Tensor3 coproduct_left(const Polynomial& p) {
  Tensor3 out;
  const auto outer = coproduct(p);
  for (const auto& [k, c] : outer.terms()) {
    const auto inner = coproduct(Polynomial(k.first));
    for (const auto& [k2, c2] : inner.terms()) add(out, k2.first, k2.second, k.second, c * c2);
  }
  return out;
}

Tensor3 coproduct_right(const Polynomial& p) {
  Tensor3 out;
  const auto outer = coproduct(p);
  for (const auto& [k, c] : outer.terms()) {
    const auto inner = coproduct(Polynomial(k.second));
    for (const auto& [k2, c2] : inner.terms()) add(out, k.first, k2.first, k2.second, c * c2);
  }
  return out;
}

// Product in T(H) (x) T(H).
TensorPolynomial2 tensor_product(const TensorPolynomial2& a, const TensorPolynomial2& b) {
  TensorPolynomial2 out;
  for (const auto& [k, s] : a.terms())
    for (const auto& [l, t] : b.terms()) out.add_term({concat(k.first, l.first), concat(k.second, l.second)}, s * t);
  return out;
}

Subspace unblocked_kernel(int g, int d, Model m) { return echelon_kernel(reduced_coproduct_matrix(g, d, m)).kernel; }

}  // namespace

TEST(Coproduct, Examples) {
  const Letter a = x(1), b = y(1);
  EXPECT_EQ(coproduct(P(a)), tensor(P(a), Polynomial::constant(1)) + tensor(Polynomial::constant(1), P(a)));
  TensorPolynomial2 expected;
  expected.add_term({{a, b}, {}}, 1);
  expected.add_term({{a}, {b}}, 1);
  expected.add_term({{b}, {a}}, 1);
  expected.add_term({{}, {a, b}}, 1);
  EXPECT_EQ(coproduct(P(a) * P(b)), expected);
  EXPECT_TRUE(reduced_coproduct(bracket(P(a), P(b))).is_zero());
}

TEST(Coproduct, IsMultiplicative) {
  Rng rng(51);
  for (int trial = 0; trial < 30; ++trial) {
    Polynomial p = random_polynomial(rng, {2, 0}, 3, 3), q = random_polynomial(rng, {2, 0}, 3, 3);
    EXPECT_EQ(coproduct(p * q), tensor_product(coproduct(p), coproduct(q)));
  }
}

TEST(Coproduct, Coassociative) {
  for (int d = 0; d <= 5; ++d)
    for (const auto& w : words_of_weight({1, 0}, d)) EXPECT_EQ(coproduct_left(Polynomial(w)), coproduct_right(Polynomial(w)));
  for (int d = 0; d <= 4; ++d)
    for (const auto& w : words_of_weight({2, 0}, d)) EXPECT_EQ(coproduct_left(Polynomial(w)), coproduct_right(Polynomial(w)));
}

TEST(Antipode, Examples) {
  EXPECT_EQ(antipode(P(x(1))), -1 * P(x(1)));
  EXPECT_EQ(antipode(P(x(1)) * P(y(1))), P(y(1)) * P(x(1)));
}

TEST(Antipode, HopfAxiom) {
  auto id = [](const Polynomial& p) { return p; };
  auto s = [](const Polynomial& p) { return antipode(p); };
  for (int g = 1; g <= 2; ++g)
    for (int d = 0; d <= (g == 1 ? 5 : 4); ++d)
      for (const auto& w : words_of_weight({g, 0}, d)) {
        const Polynomial p(w);
        const Polynomial unit = Polynomial::constant(counit(p));
        EXPECT_EQ(multiply(apply_tensor(coproduct(p), s, id)), unit);
        EXPECT_EQ(multiply(apply_tensor(coproduct(p), id, s)), unit);
      }
}

TEST(Primitivity, LyndonElements) {
  for (int g = 1; g <= 2; ++g)
    for (int d = 1; d <= (g == 1 ? 6 : 5); ++d)
      for (const auto& l : lyndon_lie_basis({g, 0}, d)) EXPECT_TRUE(reduced_coproduct(l.poly).is_zero()) << l.poly.to_string();
}

TEST(ReducedCoproductMatrix, Examples) {
  // |xy| -> |x| (x) |y| + |y| (x) |x|
  TraceTensor2 expected;
  expected.add_term({CyclicWord(Word{x(1)}), CyclicWord(Word{y(1)})}, 1);
  expected.add_term({CyclicWord(Word{y(1)}), CyclicWord(Word{x(1)})}, 1);
  EXPECT_EQ(trace_reduced_coproduct(trace({x(1), y(1)})), expected);
  Matrix m1 = reduced_coproduct_matrix(2, 1, Model::Free);
  EXPECT_EQ(m1.rows(), 0u);
  EXPECT_EQ(m1.cols(), 4u);
  // |x l| for Lie l of degree >= 2
  for (int d = 3; d <= 5; ++d)
    for (const auto& l : lyndon_lie_basis({2, 0}, d - 1))
      EXPECT_TRUE(trace_reduced_coproduct(trace_project(P(x(2)) * l.poly)).is_zero());
}

TEST(Kernel, BlockedEqualsUnblocked) {
  for (int g = 1; g <= 2; ++g)
    for (int d = 1; d <= 4; ++d)
      for (Model m : {Model::Free, Model::Omega}) {
        auto rep = kernel_reduced_coproduct(g, d, m);
        EXPECT_TRUE(rep.kernel == unblocked_kernel(g, d, m)) << g << " " << d << " " << to_string(m);
        Matrix mat = reduced_coproduct_matrix(g, d, m);
        for (const auto& v : rep.kernel.basis()) EXPECT_TRUE(mat.apply(v).empty());
      }
}

TEST(Kernel, SmallDegrees) {
  for (int g = 1; g <= 3; ++g)
    for (Model m : {Model::Free, Model::Omega}) {
      EXPECT_EQ(kernel_reduced_coproduct(g, 1, m).dim(), static_cast<std::size_t>(2 * g));
      EXPECT_EQ(kernel_reduced_coproduct(g, 2, m).dim(), 0u);
    }
  auto k = kernel_reduced_coproduct(2, 3, Model::Free);
  EXPECT_EQ(k.dim(), 4u);
  EXPECT_TRUE(k.kernel == canonical_subspace(2, 3, Canonical::Wedge, Model::Free));
}

TEST(Kernel, FreeModelThroughDegreeFour) {
  for (int g = 1; g <= 3; ++g) {
    EXPECT_TRUE(kernel_reduced_coproduct(g, 1, Model::Free).kernel == canonical_subspace(g, 1, Canonical::Wedge, Model::Free));
    EXPECT_TRUE(kernel_reduced_coproduct(g, 3, Model::Free).kernel == canonical_subspace(g, 3, Canonical::Wedge, Model::Free));
    EXPECT_TRUE(kernel_reduced_coproduct(g, 4, Model::Free).kernel ==
                canonical_subspace(g, 4, Canonical::HTimesL, Model::Free));
  }
}

TEST(Kernel, ContainsHTimesL) {
  for (int g = 1; g <= 2; ++g)
    for (int d = 3; d <= (g == 1 ? 6 : 5); ++d)
      EXPECT_TRUE(contains_subspace(kernel_reduced_coproduct(g, d, Model::Free).kernel,
                                    canonical_subspace(g, d, Canonical::HTimesL, Model::Free)))
          << g << " " << d;
}

TEST(Kernel, OmegaModel) {
  for (int g = 1; g <= 3; ++g) {
    EXPECT_TRUE(kernel_reduced_coproduct(g, 3, Model::Omega).kernel ==
                canonical_subspace(g, 3, Canonical::HTimesL, Model::Omega));
    auto k4 = kernel_reduced_coproduct(g, 4, Model::Omega);
    auto hl = canonical_subspace(g, 4, Canonical::HTimesL, Model::Omega);
    EXPECT_TRUE(contains_subspace(k4.kernel, hl));
    if (g == 2) {
      EXPECT_GT(k4.dim(), hl.dim());
    } else {
      EXPECT_TRUE(k4.kernel == hl) << g;
    }
  }
}

TEST(Canonical, Examples) {
  EXPECT_EQ(canonical_subspace(1, 3, Canonical::Wedge, Model::Free).dim(), 0u);
  EXPECT_LE(canonical_subspace(1, 3, Canonical::HTimesL, Model::Free).dim(), 2u);
  EXPECT_EQ(canonical_generators(1, 3, Canonical::HTimesL).size(), 2u);
  EXPECT_EQ(canonical_subspace(2, 4, Canonical::BoundaryTargets, Model::Free).dim(), 1u);
  EXPECT_EQ(canonical_subspace(2, 3, Canonical::BoundaryTargets, Model::Free).dim(), 0u);
}

TEST(Surjectivity, ProbeReportsImageInsideKernel) {
  for (int g = 1; g <= 2; ++g)
    for (int d = 1; d <= 4; ++d) {
      auto r = surjectivity_probe(g, d);
      EXPECT_TRUE(r.image_inside);
      EXPECT_LE(r.image_dim, r.omega_kernel_dim);
    }
}
