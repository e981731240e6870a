#pragma once

// Graded Hopf structure on T(H) (primitive generators) and kernels of the reduced
// coproduct on trace spaces, in the free model |T(H)| and the quotient |T(H)_w|.

#include "kvtrace/omega.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

namespace kvtrace {

enum class Model { Free, Omega };

inline std::string to_string(Model m) { return m == Model::Free ? "free" : "omega"; }

inline TensorPolynomial2 tensor(const Polynomial& a, const Polynomial& b) {
  TensorPolynomial2 out;
  for (const auto& [u, s] : a.terms())
    for (const auto& [v, t] : b.terms()) out.add_term({u, v}, s * t);
  return out;
}

namespace detail {

// Calls f(left, right) for every split of w into the subword on a position mask and
// its complement.
template <class F>
void for_each_split(const Word& w, bool reduced, F&& f) {
  const std::size_t n = w.size();
  const unsigned long full = (1ul << n) - 1;
  for (unsigned long mask = 0; mask <= full; ++mask) {
    if (reduced && (mask == 0 || mask == full)) continue;
    Word a, b;
    for (std::size_t i = 0; i < n; ++i) ((mask >> i) & 1 ? a : b).push_back(w[i]);
    f(a, b);
  }
}

}  // namespace detail

inline TensorPolynomial2 coproduct(const Polynomial& p) {
  TensorPolynomial2 out;
  for (const auto& [w, c] : p.terms())
    detail::for_each_split(w, false, [&](const Word& a, const Word& b) { out.add_term({a, b}, c); });
  return out;
}

/// Delta(p) - p (x) 1 - 1 (x) p
inline TensorPolynomial2 reduced_coproduct(const Polynomial& p) {
  TensorPolynomial2 out;
  for (const auto& [w, c] : p.terms())
    detail::for_each_split(w, true, [&](const Word& a, const Word& b) { out.add_term({a, b}, c); });
  return out;
}

inline Polynomial antipode(const Polynomial& p) {
  Polynomial out;
  for (const auto& [w, c] : p.terms()) {
    Word r(w.rbegin(), w.rend());
    out.add_term(r, w.size() % 2 ? -c : c);
  }
  return out;
}

inline Scalar counit(const Polynomial& p) { return p.coeff({}); }

inline Polynomial multiply(const TensorPolynomial2& t) {
  Polynomial out;
  for (const auto& [k, c] : t.terms()) out.add_term(concat(k.first, k.second), c);
  return out;
}

/// f (x) g applied termwise.
template <class F, class G>
TensorPolynomial2 apply_tensor(const TensorPolynomial2& t, F&& f, G&& g) {
  TensorPolynomial2 out;
  for (const auto& [k, c] : t.terms()) out += c * tensor(f(Polynomial(k.first)), g(Polynomial(k.second)));
  return out;
}

/// |Delta-bar| on traces: well defined since rotating a word permutes the splits.
inline TraceTensor2 trace_reduced_coproduct(const TracePolynomial& t) {
  TraceTensor2 out;
  for (const auto& [c, a] : t.terms())
    detail::for_each_split(c.rep(), true,
                           [&](const Word& l, const Word& r) { out.add_term({CyclicWord(l), CyclicWord(r)}, a); });
  return out;
}

// ---------------------------------------------------------------------------
// Coordinates.

inline std::size_t model_dim(int g, int d, Model m) {
  return m == Model::Free ? necklace_index({g, 0}, d).size() : quotient_model(g, d).dim();
}

inline SparseVector model_coords(int g, int d, Model m, const TracePolynomial& t) {
  return m == Model::Free ? necklace_index({g, 0}, d).coords(t) : quotient_model(g, d).project(t);
}

/// Trace polynomial standing for basis vector i of the model.
inline CyclicWord model_basis_word(int g, int d, Model m, std::size_t i) {
  return m == Model::Free ? necklace_index({g, 0}, d).at(i) : quotient_model(g, d).section_word(i);
}

/// Coordinates on the direct sum over 1 <= i <= d-1 of |.|^(i) (x) |.|^(d-i).
class CoproductTarget {
 public:
  CoproductTarget(int g, int d, Model m) : g_(g), d_(d), model_(m) {
    std::size_t off = 0;
    for (int i = 1; i < d; ++i) {
      offset_[i] = off;
      off += model_dim(g, i, m) * model_dim(g, d - i, m);
    }
    dim_ = off;
  }

  std::size_t dim() const { return dim_; }

  SparseVector coords(const TraceTensor2& t) {
    std::map<std::size_t, Scalar> acc;
    for (const auto& [k, a] : t.terms()) {
      const int i = weight(k.first);
      const std::size_t right_dim = model_dim(g_, d_ - i, model_);
      const SparseVector& l = factor(i, k.first);
      const SparseVector& r = factor(d_ - i, k.second);
      for (const auto& [p, u] : l.entries())
        for (const auto& [q, v] : r.entries()) acc[offset_.at(i) + p * right_dim + q] += a * u * v;
    }
    return SparseVector::from_map(acc);
  }

 private:
  const SparseVector& factor(int i, const CyclicWord& c) {
    auto it = memo_.find(c);
    if (it == memo_.end()) it = memo_.emplace(c, model_coords(g_, i, model_, TracePolynomial(c))).first;
    return it->second;
  }

  int g_, d_;
  Model model_;
  std::size_t dim_ = 0;
  std::map<int, std::size_t> offset_;
  std::map<CyclicWord, SparseVector> memo_;
};

inline Matrix reduced_coproduct_matrix(int g, int d, Model m) {
  if (d < 1) throw std::invalid_argument("reduced_coproduct_matrix: degree must be >= 1");
  CoproductTarget target(g, d, m);
  std::vector<SparseVector> cols;
  for (std::size_t i = 0; i < model_dim(g, d, m); ++i)
    cols.push_back(target.coords(trace_reduced_coproduct(TracePolynomial(model_basis_word(g, d, m, i)))));
  return Matrix::from_columns(target.dim(), cols);
}

struct KernelReport {
  int g = 0, n = 0, degree = 0;
  Model model = Model::Free;
  Subspace kernel;
  std::size_t ambient_dim = 0;
  std::size_t dim() const { return kernel.dim(); }
};

/// Domain coordinates grouped so that distinct groups have disjoint images:
/// multidegree in the free model, D-class in the quotient.
inline std::vector<std::vector<std::size_t>> kernel_blocks(int g, int d, Model m) {
  if (m == Model::Omega) return quotient_model(g, d).coordinate_blocks();
  const auto& idx = necklace_index({g, 0}, d);
  std::map<std::vector<int>, std::vector<std::size_t>> by;
  for (std::size_t i = 0; i < idx.size(); ++i) by[grade(idx.at(i).rep(), {g, 0}).multidegree].push_back(i);
  std::vector<std::vector<std::size_t>> out;
  for (auto& [_, v] : by) out.push_back(std::move(v));
  return out;
}

inline KernelReport kernel_reduced_coproduct(int g, int d, Model m) {
  if (d < 1) throw std::invalid_argument("kernel_reduced_coproduct: degree must be >= 1");
  KernelReport rep;
  rep.g = g;
  rep.degree = d;
  rep.model = m;
  rep.ambient_dim = model_dim(g, d, m);
  rep.kernel = Subspace(rep.ambient_dim);
  CoproductTarget target(g, d, m);
  for (const auto& block : kernel_blocks(g, d, m)) {
    std::vector<SparseVector> cols;
    for (auto i : block)
      cols.push_back(target.coords(trace_reduced_coproduct(TracePolynomial(model_basis_word(g, d, m, i)))));
    const auto ker = echelon_kernel(Matrix::from_columns(target.dim(), cols)).kernel;
    for (const auto& v : ker.basis()) {
      std::vector<SparseVector::Entry> e;
      for (const auto& [l, a] : v.entries()) e.emplace_back(block[l], a);
      rep.kernel.insert(SparseVector::from_pairs(std::move(e)));
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Canonical subspaces.

enum class Canonical { Wedge, HTimesL, BoundaryTargets };

inline std::vector<TracePolynomial> canonical_generators(int g, int d, Canonical which) {
  const Ambient amb{g, 0};
  const auto gens = amb.generators();
  std::vector<TracePolynomial> out;
  switch (which) {
    case Canonical::Wedge: {
      if (d < 1 || d > static_cast<int>(gens.size())) break;
      std::vector<bool> pick(gens.size(), false);
      std::fill(pick.begin(), pick.begin() + d, true);
      do {
        std::vector<int> perm;
        for (std::size_t i = 0; i < gens.size(); ++i)
          if (pick[i]) perm.push_back(static_cast<int>(i));
        TracePolynomial t;
        std::vector<int> order(perm.size());
        std::iota(order.begin(), order.end(), 0);
        do {
          int inversions = 0;
          for (std::size_t a = 0; a < order.size(); ++a)
            for (std::size_t b = a + 1; b < order.size(); ++b) inversions += order[a] > order[b];
          Word w;
          for (int o : order) w.push_back(gens[perm[o]]);
          t.add_term(CyclicWord(w), inversions % 2 ? -1 : 1);
        } while (std::next_permutation(order.begin(), order.end()));
        out.push_back(t);
      } while (std::prev_permutation(pick.begin(), pick.end()));
      break;
    }
    case Canonical::HTimesL:
      if (d < 2) break;
      for (auto v : gens)
        for (const auto& l : lyndon_lie_basis(amb, d - 1)) out.push_back(trace_project(Polynomial::letter(v) * l.poly));
      break;
    case Canonical::BoundaryTargets:
      if (d >= 4 && d % 2 == 0) out.push_back(trace_project(power(omega(g), d / 2)));
      break;
  }
  return out;
}

inline Subspace canonical_subspace(int g, int d, Canonical which, Model m) {
  Subspace s(model_dim(g, d, m));
  for (const auto& t : canonical_generators(g, d, which)) s.insert(model_coords(g, d, m, t));
  return s;
}

/// Image of Ker(|Delta-bar|)^(d) in |T(H)_w|^(d), compared with Ker(|Delta-bar_w|)^(d).
struct SurjectivityReport {
  int g = 0, degree = 0;
  std::size_t free_kernel_dim = 0, omega_kernel_dim = 0, image_dim = 0;
  bool image_inside = true;
  bool surjective() const { return image_inside && image_dim == omega_kernel_dim; }
};

inline SurjectivityReport surjectivity_probe(int g, int d) {
  SurjectivityReport r;
  r.g = g;
  r.degree = d;
  const auto free = kernel_reduced_coproduct(g, d, Model::Free);
  const auto om = kernel_reduced_coproduct(g, d, Model::Omega);
  r.free_kernel_dim = free.dim();
  r.omega_kernel_dim = om.dim();
  const auto& idx = necklace_index({g, 0}, d);
  const auto& qm = quotient_model(g, d);
  Subspace img(qm.dim());
  for (const auto& v : free.kernel.basis()) img.insert(qm.project(idx.element(v)));
  r.image_dim = img.dim();
  r.image_inside = contains_subspace(om.kernel, img);
  return r;
}

}  // namespace kvtrace
