#pragma once

// Divergence cocycles, the framed KV / KRV membership tests, the necklace bracket,
// Hamiltonian derivations and the graded cobracket on |T(H)_w|.

#include "kvtrace/hopfkernel.hpp"
#include "kvtrace/rewrite.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kvtrace {

// Sign conventions, fixed once: <x_k, y_l> = delta_kl = -<y_l, x_k>; z letters pair to 0.
// The cobracket orientation constant was calibrated against the double-divergence route.
inline constexpr int kCobracketSign = 1;

inline int pairing(Letter a, Letter b) {
  if (a.index != b.index) return 0;
  if (a.kind == Kind::X && b.kind == Kind::Y) return 1;
  if (a.kind == Kind::Y && b.kind == Kind::X) return -1;
  return 0;
}

// ---------------------------------------------------------------------------
// Truncated series.

inline Polynomial exp_series(const Polynomial& p, int N) {
  if (p.coeff({}) != 0) throw std::invalid_argument("exp_series: constant term must vanish");
  Polynomial out = Polynomial::constant(1), term = Polynomial::constant(1);
  for (int k = 1; k <= N; ++k) {
    term = multiply(term, p, N);
    term *= Scalar(1) / k;
    if (term.is_zero()) break;
    out += term;
  }
  return out;
}

/// log(1 + q) for q without constant term.
inline Polynomial log1p_series(const Polynomial& q, int N) {
  if (q.coeff({}) != 0) throw std::invalid_argument("log1p_series: constant term must vanish");
  Polynomial out, term = Polynomial::constant(1);
  for (int k = 1; k <= N; ++k) {
    term = multiply(term, q, N);
    if (term.is_zero()) break;
    out += Scalar(k % 2 ? 1 : -1, k) * term;
  }
  return out;
}

/// Coefficients r_0..r_N of r(s) = log((e^s - 1) / s).
inline std::vector<Scalar> r_series(int N) {
  // q(s) = (e^s - 1)/s - 1 = sum_{k>=1} s^k / (k+1)!
  std::vector<Scalar> q(N + 1);
  mpz_class fact = 1;
  for (int k = 1; k <= N; ++k) {
    fact *= k + 1;
    q[k] = Scalar(mpz_class(1), fact);
  }
  std::vector<Scalar> out(N + 1), pw(N + 1);
  pw[0] = 1;
  for (int m = 1; m <= N; ++m) {
    std::vector<Scalar> next(N + 1);
    for (int i = 0; i <= N; ++i)
      if (pw[i] != 0)
        for (int j = 1; i + j <= N; ++j) next[i + j] += pw[i] * q[j];
    pw = next;
    const Scalar c(m % 2 ? 1 : -1, m);
    for (int i = 0; i <= N; ++i) out[i] += c * pw[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Framing data and the special elements.

struct FramingData {
  std::vector<long> a, b;  // rotation numbers of alpha_i, beta_i (i = 1..g)
  std::vector<long> c;     // rotation numbers of gamma_j (j = 1..n)

  static FramingData zero(Ambient amb) {
    return {std::vector<long>(amb.g, 0), std::vector<long>(amb.g, 0), std::vector<long>(amb.n, 0)};
  }
};

struct SpecialElements {
  int N = 0;
  Polynomial xi;
  TracePolynomial r_bold, r_bold_prime, p_fr;
};

/// sum_{k <= N / weight(l)} coeffs[k] |l^k|
inline TracePolynomial trace_series(Letter l, const std::vector<Scalar>& coeffs, int N) {
  TracePolynomial t;
  for (int k = 1; k < static_cast<int>(coeffs.size()) && k * weight(l) <= N; ++k)
    if (coeffs[k] != 0) t.add_term(CyclicWord(Word(k, l)), coeffs[k]);
  return t;
}

inline Polynomial xi_element(Ambient amb, int N) {
  Polynomial prod = Polynomial::constant(1);
  for (int i = 1; i <= amb.g; ++i) {
    const Polynomial X = Polynomial::letter(x(i)), Y = Polynomial::letter(y(i));
    for (const Polynomial& f : {exp_series(X, N), exp_series(Y, N), exp_series(-1 * X, N), exp_series(-1 * Y, N)})
      prod = multiply(prod, f, N);
  }
  for (int j = 1; j <= amb.n; ++j) prod = multiply(prod, exp_series(Polynomial::letter(z(j)), N), N);
  return log1p_series(prod - Polynomial::constant(1), N);
}

inline SpecialElements special_elements(Ambient amb, const FramingData& fr, int N) {
  if (N < 2) throw std::invalid_argument("special_elements: truncation must be >= 2");
  SpecialElements se;
  se.N = N;
  se.xi = xi_element(amb, N);
  const auto r = r_series(N);
  for (int i = 1; i <= amb.g; ++i) {
    se.r_bold += trace_series(x(i), r, N);
    se.r_bold += trace_series(y(i), r, N);
  }
  se.r_bold_prime = se.r_bold;
  for (int j = 1; j <= amb.n; ++j) se.r_bold_prime += trace_series(z(j), r, N);
  for (int i = 1; i <= amb.g; ++i) {
    se.p_fr.add_term(CyclicWord(Word{y(i)}), Scalar(fr.a.at(i - 1)));
    se.p_fr.add_term(CyclicWord(Word{x(i)}), Scalar(-fr.b.at(i - 1)));
  }
  return se;
}

// ---------------------------------------------------------------------------
// Tangential derivations and single divergences.

struct TangentialDerivation {
  Ambient amb;
  Derivation u;
  std::map<int, Polynomial> tangential;  // u_j with u(z_j) = [z_j, u_j]

  /// Fills in u(z_j) = [z_j, u_j].
  static TangentialDerivation make(Ambient amb, const Derivation& on_xy, std::map<int, Polynomial> uj) {
    TangentialDerivation t{amb, on_xy, std::move(uj)};
    for (int j = 1; j <= amb.n; ++j) {
      auto it = t.tangential.find(j);
      t.u.set(z(j), it == t.tangential.end() ? Polynomial() : bracket(Polynomial::letter(z(j)), it->second));
    }
    return t;
  }

  bool consistent() const {
    for (int j = 1; j <= amb.n; ++j) {
      auto it = tangential.find(j);
      const Polynomial uj = it == tangential.end() ? Polynomial() : it->second;
      if (!(u.image(z(j)) - bracket(Polynomial::letter(z(j)), uj)).is_zero()) return false;
    }
    return true;
  }
};

/// sum over generators w of |d_w u(w)|
inline TracePolynomial sdiv(const Derivation& u, Ambient amb) {
  TracePolynomial t;
  for (auto w : amb.generators()) t += trace_project(fox_d(w, u.image(w)));
  return t;
}

inline TracePolynomial sdiv_xyz(const TangentialDerivation& ut) { return sdiv(ut.u, ut.amb); }

enum class Cocycle { BFr, SdivFr, SdivFrGr };

inline TracePolynomial truncated(const TracePolynomial& t, int N) {
  return t.filtered([N](const CyclicWord& c) { return weight(c) <= N; });
}

inline TracePolynomial framed_cocycle(const TangentialDerivation& ut, const FramingData& fr, const SpecialElements& se,
                                      Cocycle which) {
  TracePolynomial b;
  for (const auto& [j, uj] : ut.tangential) b += Scalar(fr.c.at(j - 1)) * trace_project(uj);
  if (which == Cocycle::BFr) return truncated(b, se.N);
  TracePolynomial s = sdiv_xyz(ut) - b;
  if (which == Cocycle::SdivFr) s += apply(ut.u, se.r_bold - se.p_fr, se.N);
  return truncated(s, se.N);
}

/// sum_k u^k psi / (k+1)!, truncated at weight N.
inline TracePolynomial integrate_cocycle(const Derivation& u, const TracePolynomial& psi, int N) {
  TracePolynomial out = truncated(psi, N), term = out;
  for (int k = 1; k <= N && !term.is_zero(); ++k) {
    term = Scalar(1, k + 1) * apply(u, term, N);
    out += term;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Membership tests.

struct Membership {
  bool member = true;
  std::optional<int> witness_weight;  // first weight where a condition fails
  std::string reason;
};

namespace detail {

// Smallest d <= N such that the part of t of weight <= d is not in the span of the
// targets truncated at d.
inline std::optional<int> first_span_failure(Ambient amb, const TracePolynomial& t,
                                             const std::vector<TracePolynomial>& targets, int N) {
  std::vector<std::size_t> offset(N + 2, 0);
  for (int d = 1; d <= N; ++d) offset[d + 1] = offset[d] + necklace_index(amb, d).size();
  auto coords = [&](const TracePolynomial& p, int upto) {
    std::map<std::size_t, Scalar> acc;
    for (const auto& [c, a] : p.terms()) {
      const int w = weight(c);
      if (w < 1 || w > upto) continue;
      acc[offset[w] + necklace_index(amb, w).index(c)] += a;
    }
    return SparseVector::from_map(acc);
  };
  if (t.coeff(CyclicWord()) != 0) return 0;
  for (int d = 1; d <= N; ++d) {
    Subspace span(offset[N + 1]);
    for (const auto& g : targets) span.insert(coords(g, d));
    if (!span.contains(coords(t, d))) return d;
  }
  return std::nullopt;
}

inline std::optional<int> first_nonzero_weight(const Polynomial& p, int N) {
  std::optional<int> w;
  for (const auto& [m, _] : p.terms()) {
    const int k = weight(m);
    if (k <= N && (!w || k < *w)) w = k;
  }
  return w;
}

}  // namespace detail

inline Membership krv_fr_membership(const TangentialDerivation& ut, const FramingData& fr, int N) {
  Membership m;
  if (!ut.consistent()) throw std::invalid_argument("krv_fr_membership: u(z_j) != [z_j, u_j]");
  const Polynomial w = omega_family(ut.amb).omega;
  if (auto bad = detail::first_nonzero_weight(ut.u.apply(w, N), N)) {
    return {false, bad, "g(omega) != 0"};
  }
  const auto se = special_elements(ut.amb, fr, N);
  const TracePolynomial s = framed_cocycle(ut, fr, se, Cocycle::SdivFrGr);
  std::vector<TracePolynomial> targets;
  for (int j = 1; j <= ut.amb.n; ++j)
    for (int k = 1; 2 * k <= N; ++k) targets.push_back(trace(Word(k, z(j))));
  for (int k = 2; 2 * k <= N; ++k) targets.push_back(trace_project(power(w, k)));
  if (auto bad = detail::first_span_failure(ut.amb, s, targets, N)) return {false, bad, "sdiv_gr^fr outside boundary span"};
  return m;
}

inline Membership kv_fr_membership(const TangentialDerivation& ut, const FramingData& fr, int N) {
  if (N < 3) throw std::invalid_argument("kv_fr_membership: truncation must be >= 3");
  if (!ut.consistent()) throw std::invalid_argument("kv_fr_membership: u(z_j) != [z_j, u_j]");
  const auto se = special_elements(ut.amb, fr, N);
  if (auto bad = detail::first_nonzero_weight(ut.u.apply(se.xi, N), N)) return {false, bad, "g(xi) != 0"};
  const TracePolynomial s = framed_cocycle(ut, fr, se, Cocycle::SdivFr);
  std::vector<TracePolynomial> targets;
  for (int j = 1; j <= ut.amb.n; ++j)
    for (int k = 1; 2 * k <= N; ++k) targets.push_back(trace(Word(k, z(j))));
  for (int k = 2; 2 * k <= N; ++k) targets.push_back(trace_project(power(se.xi, k, N)));
  if (auto bad = detail::first_span_failure(ut.amb, s, targets, N)) return {false, bad, "sdiv^fr outside boundary span"};
  return {};
}

// ---------------------------------------------------------------------------
// Necklace bracket and Hamiltonian derivations.

/// [|a|, |b|] = sum_{i,j} <a_i, b_j> |a cut at i, b cut at j|
inline TracePolynomial necklace_bracket(const TracePolynomial& a, const TracePolynomial& b) {
  TracePolynomial out;
  for (const auto& [ca, sa] : a.terms()) {
    const Word& u = ca.rep();
    for (const auto& [cb, sb] : b.terms()) {
      const Word& v = cb.rep();
      for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) {
          const int p = pairing(u[i], v[j]);
          if (!p) continue;
          Word w;
          for (std::size_t k = 1; k < u.size(); ++k) w.push_back(u[(i + k) % u.size()]);
          for (std::size_t k = 1; k < v.size(); ++k) w.push_back(v[(j + k) % v.size()]);
          out.add_term(CyclicWord(w), sa * sb * p);
        }
    }
  }
  return out;
}

/// The bracket on |T(H)_w|, returned in X u Y normal form.
inline TracePolynomial necklace_bracket(const TracePolynomial& a, const TracePolynomial& b, Model m, int g) {
  TracePolynomial r = necklace_bracket(a, b);
  return m == Model::Free ? r : normal_form(r, g);
}

/// sigma(a): v -> sum_i <a_i, v> a_{i+1} ... a_{i-1}
inline Derivation hamiltonian_derivation(Ambient amb, const TracePolynomial& a) {
  Derivation::Images im;
  for (auto v : amb.generators()) {
    Polynomial p;
    for (const auto& [c, s] : a.terms()) {
      const Word& u = c.rep();
      for (std::size_t i = 0; i < u.size(); ++i) {
        const int k = pairing(u[i], v);
        if (!k) continue;
        Word w;
        for (std::size_t j = 1; j < u.size(); ++j) w.push_back(u[(i + j) % u.size()]);
        p.add_term(w, s * k);
      }
    }
    im[v] = p;
  }
  return Derivation(std::move(im));
}

// ---------------------------------------------------------------------------
// Double divergence and the graded cobracket.

/// Drops every term with a leg of weight 0 (reduction modulo |K1| on both legs).
inline TraceTensor2 reduce_mod_constants(const TraceTensor2& t) {
  return t.filtered([](const std::pair<CyclicWord, CyclicWord>& k) { return k.first.size() && k.second.size(); });
}

/// Div(u) = sum_w sum over occurrences of w in u(w): |prefix| (x) |suffix|
inline TraceTensor2 double_divergence(const Derivation& u, Ambient amb) {
  TraceTensor2 out;
  for (auto w : amb.generators()) {
    const Polynomial image = u.image(w);
    for (const auto& [m, c] : image.terms())
      for (std::size_t p = 0; p < m.size(); ++p)
        if (m[p] == w) out.add_term({CyclicWord(Word(m.begin(), m.begin() + p)), CyclicWord(Word(m.begin() + p + 1, m.end()))}, c);
  }
  return out;
}

/// |Delta~| = (id (x) antipode) o |Delta| on traces.
inline TraceTensor2 twisted_trace_coproduct(const TracePolynomial& t) {
  TraceTensor2 out;
  for (const auto& [c, a] : t.terms())
    detail::for_each_split(c.rep(), false, [&](const Word& l, const Word& r) {
      out.add_term({CyclicWord(l), CyclicWord(Word(r.rbegin(), r.rend()))}, r.size() % 2 ? -a : a);
    });
  return out;
}

/// Double-cut formula: sum_{i<j} <a_i, a_j> (|inner| (x) |outer| - |outer| (x) |inner|), free model.
inline TraceTensor2 double_cut_cobracket(const TracePolynomial& a) {
  TraceTensor2 out;
  for (const auto& [c, s] : a.terms()) {
    const Word& u = c.rep();
    const std::size_t n = u.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const int p = pairing(u[i], u[j]);
        if (!p) continue;
        CyclicWord inner(Word(u.begin() + i + 1, u.begin() + j));
        Word o(u.begin() + j + 1, u.end());
        o.insert(o.end(), u.begin(), u.begin() + i);
        CyclicWord outer(o);
        out.add_term({inner, outer}, s * p * kCobracketSign);
        out.add_term({outer, inner}, -s * p * kCobracketSign);
      }
  }
  return out;
}

/// Composite route: Div o sigma, reduced modulo |K1| on both legs.
inline TraceTensor2 cobracket_composite(Ambient amb, const TracePolynomial& a) {
  return reduce_mod_constants(double_divergence(hamiltonian_derivation(amb, a), amb));
}

inline TraceTensor2 normalize_legs(const TraceTensor2& t, int g) {
  TraceTensor2 out;
  for (const auto& [k, a] : t.terms()) {
    const TracePolynomial l = normal_form(TracePolynomial(k.first), g), r = normal_form(TracePolynomial(k.second), g);
    for (const auto& [p, s] : l.terms())
      for (const auto& [q, u] : r.terms()) out.add_term({p, q}, a * s * u);
  }
  return out;
}

/// delta_gr(a) in |T(H)_w|/|K1| (x) |T(H)_w|/|K1|, legs in X u Y normal form.
/// Terms of a above weight N are ignored.
inline TraceTensor2 turaev_cobracket_gr(int g, const TracePolynomial& a, int N) {
  return normalize_legs(reduce_mod_constants(double_cut_cobracket(truncated(a, N))), g);
}

// ---------------------------------------------------------------------------
// Closed-surface KRV.

/// Coordinates of t (homogeneous tensor of total weight d, legs of weight >= 1) in
/// sum_i Q^(i) (x) Q^(d-i); zero-length vector for d < 2.
inline SparseVector quotient_tensor_coords(int g, int d, const TraceTensor2& t) {
  if (d < 2) return {};
  CoproductTarget target(g, d, Model::Omega);
  return target.coords(t);
}

/// Image of the weight-k component of sdiv(lift f) under |Delta-bar_w|: zero iff f is in krv at degree k.
inline SparseVector krv_closed_residual(int g, const Derivation& f, int k) {
  const Derivation lifted = omega_preserving_lift(g, f).lifted;
  if (k < 2) return {};
  const TracePolynomial s = homogeneous_part(sdiv(lifted, {g, 0}), k);
  return quotient_tensor_coords(g, k, trace_reduced_coproduct(s));
}

inline std::map<int, Derivation> homogeneous_components(const Derivation& f) {
  std::map<int, Derivation::Images> parts;
  for (const auto& [l, p] : f.images())
    for (const auto& [w, c] : p.terms()) parts[weight(w) - weight(l)][l].add_term(w, c);
  std::map<int, Derivation> out;
  for (auto& [k, im] : parts) out.emplace(k, Derivation(std::move(im)));
  return out;
}

/// f: derivation of L(H)_w given by Lie representatives of degree >= 1 (n = 0).
inline Membership krv_closed_membership(int g, const Derivation& f, int N) {
  for (const auto& [k, fk] : homogeneous_components(f)) {
    if (k < 1) throw std::invalid_argument("krv_closed_membership: derivation degree must be >= 1");
    if (k > N) continue;
    if (!krv_closed_residual(g, fk, k).empty()) return {false, k, "sdiv(lift) not in Ker |Delta-bar_w|"};
  }
  return {};
}

/// Linearized cobracket equivariance: delta(f a) - (f (x) 1 + 1 (x) f) delta(a) for every
/// quotient basis element a with weight(a) + k <= N, stacked into one vector. f homogeneous of degree k.
inline SparseVector cobracket_defect(int g, const Derivation& f, int k, int N) {
  std::vector<SparseVector::Entry> out;
  std::size_t offset = 0;
  for (int m = 1; m + k <= N; ++m) {
    const auto& qm = quotient_model(g, m);
    const int d = m + k - 2;
    const std::size_t width = d >= 2 ? CoproductTarget(g, d, Model::Omega).dim() : 0;
    for (std::size_t q = 0; q < qm.dim(); ++q) {
      const TracePolynomial a(qm.section_word(q));
      TraceTensor2 t = double_cut_cobracket(apply(f, a));
      const TraceTensor2 da = double_cut_cobracket(a);
      for (const auto& [key, c] : da.terms()) {
        const TracePolynomial l = apply(f, TracePolynomial(key.first)), r = apply(f, TracePolynomial(key.second));
        for (const auto& [p, s] : l.terms()) t.add_term({p, key.second}, -c * s);
        for (const auto& [p, s] : r.terms()) t.add_term({key.first, p}, -c * s);
      }
      if (width) {
        const SparseVector v = quotient_tensor_coords(g, d, reduce_mod_constants(t));
        for (const auto& [i, c] : v.entries()) out.emplace_back(offset + i, c);
      }
      offset += width;
    }
  }
  return SparseVector::from_pairs(std::move(out));
}

/// exp(f) acting on traces, truncated at weight N.
inline TracePolynomial exp_action(const Derivation& f, const TracePolynomial& a, int N) {
  TracePolynomial out = truncated(a, N), term = out;
  for (int k = 1; k <= N && !term.is_zero(); ++k) {
    term = Scalar(1, k) * apply(f, term, N);
    out += term;
  }
  return out;
}

/// delta(e^f a) = (e^f (x) e^f) delta(a) in the quotient, for all basis a of weight <= N,
/// comparing tensor components of total weight <= N - 2.
inline bool exp_preserves_cobracket(int g, const Derivation& f, int N) {
  for (int m = 1; m <= N; ++m) {
    const auto& qm = quotient_model(g, m);
    for (std::size_t q = 0; q < qm.dim(); ++q) {
      const TracePolynomial a(qm.section_word(q));
      TraceTensor2 t = double_cut_cobracket(exp_action(f, a, N));
      const TraceTensor2 da = double_cut_cobracket(a);
      for (const auto& [key, c] : da.terms()) {
        const TracePolynomial l = exp_action(f, TracePolynomial(key.first), N - 2);
        const TracePolynomial r = exp_action(f, TracePolynomial(key.second), N - 2);
        for (const auto& [p, s] : l.terms())
          for (const auto& [pp, ss] : r.terms())
            if (weight(p) + weight(pp) <= N - 2) t.add_term({p, pp}, -c * s * ss);
      }
      std::map<int, TraceTensor2> by_weight;
      const TraceTensor2 reduced = reduce_mod_constants(t);
      for (const auto& [key, c] : reduced.terms())
        by_weight[weight(key.first) + weight(key.second)].add_term(key, c);
      for (const auto& [d, part] : by_weight)
        if (d <= N - 2 && !quotient_tensor_coords(g, d, part).empty()) return false;
    }
  }
  return true;
}

/// The krv test and linearized cobracket equivariance on W^(k), both as kernels in
/// coordinates of lie_derivation_basis(g, k).
struct ClosedComparison {
  int g = 0, k = 0, N = 0;
  std::size_t w_dim = 0, z_dim = 0;
  Subspace members, equivariant;
  bool agree() const { return members == equivariant; }
};

inline ClosedComparison krv_closed_comparison(int g, int k, int N) {
  ClosedComparison out;
  out.g = g;
  out.k = k;
  out.N = N;
  const auto basis = lie_derivation_basis(g, k);
  const auto w = descending_derivations(g, k).basis();
  out.w_dim = w.size();
  out.z_dim = ideal_valued_derivations(g, k).dim();
  std::vector<SparseVector> phi, psi;
  std::size_t rows_phi = 0, rows_psi = 0;
  for (const auto& v : w) {
    const Derivation f = combine(basis, v);
    phi.push_back(krv_closed_residual(g, f, k));
    psi.push_back(cobracket_defect(g, f, k, N));
    rows_phi = std::max(rows_phi, phi.back().extent());
    rows_psi = std::max(rows_psi, psi.back().extent());
  }
  auto pull_back = [&](const Subspace& ker) {
    Subspace s(basis.size());
    for (const auto& c : ker.basis()) {
      SparseVector v;
      for (const auto& [i, a] : c.entries()) v.axpy(a, w[i]);
      s.insert(v);
    }
    return s;
  };
  out.members = pull_back(echelon_kernel(Matrix::from_columns(rows_phi, phi)).kernel);
  out.equivariant = pull_back(echelon_kernel(Matrix::from_columns(rows_psi, psi)).kernel);
  return out;
}

// ---------------------------------------------------------------------------
// Invariant tensors in g (x) g, g = |T(H)_w| / |K1|.

/// Degree-r elements of g (x) g killed by the diagonal bracket action of every trace
/// monomial of weight 1..probe_bound, as a subspace of sum_i Q^(i) (x) Q^(r-i).
inline Subspace invariant_tensor_probe(int g, int r, int probe_bound) {
  if (r < 2) return Subspace(0);
  std::vector<std::pair<CyclicWord, CyclicWord>> basis;
  for (int i = 1; i < r; ++i) {
    const auto &qa = quotient_model(g, i), &qb = quotient_model(g, r - i);
    for (std::size_t p = 0; p < qa.dim(); ++p)
      for (std::size_t q = 0; q < qb.dim(); ++q) basis.emplace_back(qa.section_word(p), qb.section_word(q));
  }
  std::vector<std::vector<SparseVector::Entry>> cols(basis.size());
  std::size_t offset = 0;
  for (int m = 1; m <= probe_bound; ++m) {
    const int d = r + m - 2;
    if (d < 2) continue;
    CoproductTarget target(g, d, Model::Omega);
    const auto& qm = quotient_model(g, m);
    for (std::size_t q = 0; q < qm.dim(); ++q) {
      const TracePolynomial b(qm.section_word(q));
      for (std::size_t e = 0; e < basis.size(); ++e) {
        const auto& [p, s] = basis[e];
        TraceTensor2 t;
        const TracePolynomial bl = necklace_bracket(b, TracePolynomial(p)), br = necklace_bracket(b, TracePolynomial(s));
        for (const auto& [c, a] : bl.terms()) t.add_term({c, s}, a);
        for (const auto& [c, a] : br.terms()) t.add_term({p, c}, a);
        const SparseVector v = target.coords(reduce_mod_constants(t));
        for (const auto& [i, a] : v.entries()) cols[e].emplace_back(offset + i, a);
      }
      offset += target.dim();
    }
  }
  std::vector<SparseVector> columns;
  for (auto& c : cols) columns.push_back(SparseVector::from_pairs(std::move(c)));
  return echelon_kernel(Matrix::from_columns(offset, columns)).kernel;
}

}  // namespace kvtrace
