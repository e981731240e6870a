#pragma once

// The symplectic element and the quotient T(H)_w = T(H)/<w> (closed surfaces, n = 0).

#include "kvtrace/traces.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace kvtrace {

struct OmegaFamily {
  Polynomial omega;         // sum_i [x_i, y_i] + sum_j z_j
  Polynomial omega_prime;   // sum_{i < g} [x_i, y_i]
  Polynomial omega_dprime;  // sum_{i < g-1} [x_i, y_i]
};

inline Polynomial symplectic_sum(int upto) {
  Polynomial p;
  for (int i = 1; i <= upto; ++i)
    p += bracket(Polynomial::letter(x(i)), Polynomial::letter(y(i)));
  return p;
}

inline OmegaFamily omega_family(Ambient amb) {
  OmegaFamily f;
  f.omega = symplectic_sum(amb.g);
  for (int j = 1; j <= amb.n; ++j) f.omega += Polynomial::letter(z(j));
  f.omega_prime = symplectic_sum(amb.g - 1);
  f.omega_dprime = symplectic_sum(amb.g - 2);
  return f;
}

inline Polynomial omega(int g) { return symplectic_sum(g); }

class DegreeMismatch : public std::invalid_argument {
 public:
  DegreeMismatch(int expected, int got)
      : std::invalid_argument("expected weight " + std::to_string(expected) + ", got " +
                              std::to_string(got)) {}
};

class NoSolution : public std::runtime_error {
 public:
  explicit NoSolution(const std::string& what) : std::runtime_error(what) {}
};

/// Position of a word among all words of its length (n = 0 alphabet, base 2g).
inline std::size_t word_index(const Word& w, int g) {
  std::size_t idx = 0;
  for (auto l : w) idx = idx * (2 * g) + static_cast<int>(l.kind) * g + (l.index - 1);
  return idx;
}

inline std::size_t word_count(int g, int d) {
  std::size_t c = 1;
  for (int i = 0; i < d; ++i) c *= 2 * g;
  return c;
}

inline SparseVector word_coords(const Polynomial& p, int g) {
  std::vector<SparseVector::Entry> e;
  for (const auto& [w, c] : p.terms()) e.emplace_back(word_index(w, g), c);
  return SparseVector::from_pairs(std::move(e));
}

/// Span of {|m w|} in the weight-d trace space; |a w b| = |(b a) w| makes these enough.
inline std::vector<TracePolynomial> ideal_trace_generators(int g, int d) {
  std::vector<TracePolynomial> out;
  if (d < 2) return out;
  const Polynomial w = omega(g);
  for (const auto& m : words_of_weight({g, 0}, d - 2)) {
    auto t = trace_project(Polynomial(m) * w);
    if (!t.is_zero()) out.push_back(std::move(t));
  }
  return out;
}

inline Subspace ideal_trace_span(int g, int d) {
  const auto& idx = necklace_index({g, 0}, d);
  Subspace s(idx.size());
  for (const auto& t : ideal_trace_generators(g, d)) s.insert(idx.coords(t));
  return s;
}

/// Coordinates on |T(H)_w|^{(d)}. The trace space splits into blocks by D-class
/// (w is D-homogeneous), each block reduced separately; quotient coordinates are
/// the non-pivot necklaces, ordered as in the necklace basis.
class QuotientModel {
 public:
  QuotientModel(int g, int d) : g_(g), d_(d), idx_(necklace_index({g, 0}, d)) {
    const Ambient amb{g, 0};
    block_of_.resize(idx_.size());
    local_of_.resize(idx_.size());
    std::map<std::vector<int>, std::size_t> key_to_block;
    for (std::size_t i = 0; i < idx_.size(); ++i) {
      auto key = grade(idx_.at(i).rep(), amb).d_class;
      auto [it, inserted] = key_to_block.try_emplace(key, blocks_.size());
      if (inserted) blocks_.emplace_back();
      Block& b = blocks_[it->second];
      block_of_[i] = it->second;
      local_of_[i] = b.members.size();
      b.members.push_back(i);
    }
    for (auto& b : blocks_) b.ideal = Subspace(b.members.size());
    for (const auto& t : ideal_trace_generators(g, d)) {
      const std::size_t bi = block_of_[idx_.index(t.terms().begin()->first)];
      blocks_[bi].ideal.insert(local(bi, t));
    }
    std::vector<std::size_t> free_globals;
    for (auto& b : blocks_)
      for (std::size_t l = 0; l < b.members.size(); ++l)
        if (!b.ideal.is_pivot(l)) free_globals.push_back(b.members[l]);
    std::sort(free_globals.begin(), free_globals.end());
    qcoord_of_.assign(idx_.size(), npos);
    for (std::size_t q = 0; q < free_globals.size(); ++q) qcoord_of_[free_globals[q]] = q;
    section_ = std::move(free_globals);
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  int genus() const { return g_; }
  int degree() const { return d_; }
  const NecklaceIndex& necklaces() const { return idx_; }
  std::size_t trace_dim() const { return idx_.size(); }
  std::size_t dim() const { return section_.size(); }
  std::size_t block_count() const { return blocks_.size(); }

  std::size_t ideal_dim() const {
    std::size_t s = 0;
    for (const auto& b : blocks_) s += b.ideal.dim();
    return s;
  }

  /// The ideal span in global necklace coordinates.
  Subspace ideal_span() const {
    Subspace s(idx_.size());
    for (const auto& b : blocks_)
      for (const auto& row : b.ideal.basis()) {
        std::vector<SparseVector::Entry> e;
        for (const auto& [l, a] : row.entries()) e.emplace_back(b.members[l], a);
        s.insert(SparseVector::from_pairs(std::move(e)));
      }
    return s;
  }

  const CyclicWord& section_word(std::size_t q) const { return idx_.at(section_.at(q)); }

  /// Class of t in quotient coordinates.
  SparseVector project(const TracePolynomial& t) const {
    std::map<std::size_t, TracePolynomial> parts;
    for (const auto& [c, a] : t.terms()) {
      if (weight(c) != d_) throw DegreeMismatch(d_, weight(c));
      parts[block_of_[idx_.index(c)]].add_term(c, a);
    }
    std::vector<SparseVector::Entry> out;
    for (const auto& [bi, part] : parts) {
      const Block& b = blocks_[bi];
      const SparseVector r = b.ideal.reduce(local(bi, part));
      for (const auto& [l, a] : r.entries()) out.emplace_back(qcoord_of_[b.members[l]], a);
    }
    return SparseVector::from_pairs(std::move(out));
  }

  /// Representative trace polynomial of quotient coordinates.
  TracePolynomial section(const SparseVector& q) const {
    TracePolynomial t;
    for (const auto& [i, a] : q.entries()) t.add_term(section_word(i), a);
    return t;
  }

  /// The quotient coordinates lying in the same D-class as necklace c.
  std::vector<std::size_t> block_coords_of(const CyclicWord& c) const {
    const Block& b = blocks_[block_of_[idx_.index(c)]];
    std::vector<std::size_t> out;
    for (auto gi : b.members)
      if (qcoord_of_[gi] != npos) out.push_back(qcoord_of_[gi]);
    return out;
  }

  /// Quotient coordinates grouped by D-class.
  std::vector<std::vector<std::size_t>> coordinate_blocks() const {
    std::vector<std::vector<std::size_t>> out;
    for (const auto& b : blocks_) {
      std::vector<std::size_t> v;
      for (auto gi : b.members)
        if (qcoord_of_[gi] != npos) v.push_back(qcoord_of_[gi]);
      if (!v.empty()) out.push_back(std::move(v));
    }
    return out;
  }

 private:
  struct Block {
    std::vector<std::size_t> members;  // global necklace indices, increasing
    Subspace ideal;
  };

  SparseVector local(std::size_t bi, const TracePolynomial& t) const {
    std::vector<SparseVector::Entry> e;
    for (const auto& [c, a] : t.terms()) {
      const std::size_t gi = idx_.index(c);
      if (block_of_[gi] != bi) throw std::logic_error("ideal generator spans two D-classes");
      e.emplace_back(local_of_[gi], a);
    }
    return SparseVector::from_pairs(std::move(e));
  }

  int g_, d_;
  const NecklaceIndex& idx_;
  std::vector<Block> blocks_;
  std::vector<std::size_t> block_of_, local_of_, qcoord_of_;
  std::vector<std::size_t> section_;
};

inline const QuotientModel& quotient_model(int g, int d) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<QuotientModel>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{g, d}];
  if (!slot) slot = std::make_unique<QuotientModel>(g, d);
  return *slot;
}

inline SparseVector project_quotient(const TracePolynomial& t, const QuotientModel& model) {
  return model.project(t);
}

/// Projection of an inhomogeneous trace polynomial, degree by degree.
inline std::map<int, SparseVector> project_by_degree(int g, const TracePolynomial& t) {
  std::map<int, TracePolynomial> parts;
  for (const auto& [c, a] : t.terms()) parts[weight(c)].add_term(c, a);
  std::map<int, SparseVector> out;
  for (const auto& [d, part] : parts) {
    auto v = quotient_model(g, d).project(part);
    if (!v.empty()) out.emplace(d, std::move(v));
  }
  return out;
}

inline bool in_trace_ideal(int g, const TracePolynomial& t) { return project_by_degree(g, t).empty(); }

// ---------------------------------------------------------------------------
// The two-sided ideal <w> inside T(H), per weight, in word coordinates.

/// Products m1 w m2 with wt(m1) + wt(m2) = d - 2.
inline std::vector<Polynomial> two_sided_ideal_generators(int g, int d) {
  std::vector<Polynomial> out;
  if (d < 2) return out;
  const Polynomial w = omega(g);
  for (int a = 0; a <= d - 2; ++a)
    for (const auto& m1 : words_of_weight({g, 0}, a))
      for (const auto& m2 : words_of_weight({g, 0}, d - 2 - a))
        out.push_back(Polynomial(m1) * w * Polynomial(m2));
  return out;
}

inline const Subspace& two_sided_ideal(int g, int d) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<Subspace>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{g, d}];
  if (!slot) {
    slot = std::make_unique<Subspace>(word_count(g, d));
    for (const auto& p : two_sided_ideal_generators(g, d)) slot->insert(word_coords(p, g));
  }
  return *slot;
}

inline bool in_two_sided_ideal(int g, const Polynomial& p) {
  std::map<int, Polynomial> parts;
  for (const auto& [w, c] : p.terms()) parts[weight(w)].add_term(w, c);
  for (const auto& [d, part] : parts)
    if (!two_sided_ideal(g, d).contains(word_coords(part, g))) return false;
  return true;
}

/// Basis of the Lie ideal generated by w in weight d, as polynomials:
/// iterated brackets [v_1, [v_2, ..., [v_{d-2}, w]]] reduced to independent ones.
inline std::vector<Polynomial> lie_ideal_basis(int g, int d) {
  std::vector<Polynomial> level;
  if (d < 2) return level;
  level.push_back(omega(g));
  const auto gens = Ambient{g, 0}.generators();
  for (int k = 2; k < d; ++k) {
    std::vector<Polynomial> next;
    Subspace seen(word_count(g, k + 1));
    for (auto v : gens)
      for (const auto& s : level) {
        Polynomial b = bracket(Polynomial::letter(v), s);
        if (seen.insert(word_coords(b, g))) next.push_back(std::move(b));
      }
    level = std::move(next);
  }
  return level;
}

inline const Subspace& lie_ideal_span(int g, int d) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<Subspace>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{g, d}];
  if (!slot) {
    slot = std::make_unique<Subspace>(word_count(g, std::max(d, 0)));
    for (const auto& p : lie_ideal_basis(g, d)) slot->insert(word_coords(p, g));
  }
  return *slot;
}

inline bool in_lie_ideal(int g, const Polynomial& p) {
  std::map<int, Polynomial> parts;
  for (const auto& [w, c] : p.terms()) parts[weight(w)].add_term(w, c);
  for (const auto& [d, part] : parts)
    if (!lie_ideal_span(g, d).contains(word_coords(part, g))) return false;
  return true;
}

/// Homogeneous degree-k derivations of L(H): one per (generator, Lyndon element of weight k+1).
inline std::vector<Derivation> lie_derivation_basis(int g, int k) {
  std::vector<Derivation> out;
  const auto lie = lyndon_lie_basis({g, 0}, k + 1);
  for (auto l : Ambient{g, 0}.generators())
    for (const auto& e : lie) out.push_back(Derivation({{l, e.poly}}));
  return out;
}

inline Derivation combine(const std::vector<Derivation>& basis, const SparseVector& coeffs) {
  Derivation d;
  for (const auto& [i, c] : coeffs.entries()) d += c * basis.at(i);
  return d;
}

/// Degree-k derivations of L(H) that descend to L(H)_w, i.e. f(w) lies in the Lie
/// ideal of w. Returned as coefficient vectors over lie_derivation_basis(g, k).
inline Subspace descending_derivations(int g, int k) {
  const auto basis = lie_derivation_basis(g, k);
  const Subspace& ideal = lie_ideal_span(g, k + 2);
  std::vector<SparseVector> cols;
  for (const auto& f : basis) cols.push_back(ideal.reduce(word_coords(f.apply(omega(g)), g)));
  return echelon_kernel(Matrix::from_columns(word_count(g, k + 2), cols)).kernel;
}

/// Degree-k derivations with every image in the Lie ideal of w: they act as zero on L(H)_w.
inline Subspace ideal_valued_derivations(int g, int k) {
  const auto basis = lie_derivation_basis(g, k);
  const auto lie = lyndon_lie_basis({g, 0}, k + 1);
  const auto gens = Ambient{g, 0}.generators();
  Subspace out(basis.size());
  for (const auto& p : lie_ideal_basis(g, k + 1)) {
    auto coords = lie_coordinates(p);
    std::map<Word, std::size_t> pos;
    for (std::size_t i = 0; i < lie.size(); ++i) pos.emplace(lie[i].lyndon, i);
    for (std::size_t gi = 0; gi < gens.size(); ++gi) {
      std::vector<SparseVector::Entry> e;
      for (const auto& [w, c] : *coords) e.emplace_back(gi * lie.size() + pos.at(w), c);
      out.insert(SparseVector::from_pairs(std::move(e)));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lifting derivations of L(H)_w to derivations of L(H) killing w.

struct LiftResult {
  Derivation lifted;        // f' with f'(w) = 0
  Polynomial defect;        // f~(w) before correction
  std::map<int, Polynomial> a, b;  // corrections: f'(x_i) = f~(x_i) + b_i, f'(y_i) = f~(y_i) - a_i
};

class NotLie : public std::invalid_argument {
 public:
  explicit NotLie(const std::string& what) : std::invalid_argument(what) {}
};

/// f is given by Lie representatives of its generator images (homogeneous degree k >= 1,
/// i.e. images of weight k + 1). Solves f~(w) = sum_i [x_i, a_i] + [y_i, b_i] with a_i, b_i
/// in the Lie ideal of w, then corrects the images so that the result kills w exactly.
inline LiftResult omega_preserving_lift(int g, const Derivation& f) {
  LiftResult res;
  for (const auto& [l, p] : f.images()) {
    if (l.kind == Kind::Z || l.index > g) throw LetterOutOfRange(l);
    if (!is_lie(p)) throw NotLie("image of " + to_string(l) + " is not a Lie element");
  }
  const Polynomial w = omega(g);
  res.defect = f.apply(w);
  res.lifted = f;
  if (res.defect.is_zero()) return res;
  if (!res.defect.is_homogeneous()) throw std::invalid_argument("omega_preserving_lift: f must be homogeneous");
  const int top = res.defect.max_weight();  // = k + 2
  const auto ideal = lie_ideal_basis(g, top - 1);
  std::vector<Polynomial> cols;
  for (int i = 1; i <= g; ++i) {
    for (const auto& s : ideal) cols.push_back(bracket(Polynomial::letter(x(i)), s));
    for (const auto& s : ideal) cols.push_back(bracket(Polynomial::letter(y(i)), s));
  }
  SpanSolver solver(word_count(g, top));
  for (const auto& c : cols) solver.add(word_coords(c, g));
  auto sol = solver.express(word_coords(res.defect, g));
  if (!sol) throw NoSolution("f~(omega) is not in sum_i [x_i, I] + [y_i, I]: the derivation does not descend to L(H)_omega");
  const std::size_t m = ideal.size();
  for (const auto& [j, c] : sol->entries()) {
    const int i = static_cast<int>(j / (2 * m)) + 1;
    const bool is_a = (j % (2 * m)) < m;
    const Polynomial& s = ideal[j % m];
    (is_a ? res.a : res.b)[i] += c * s;
  }
  for (const auto& [i, p] : res.b) res.lifted.set(x(i), res.lifted.image(x(i)) + p);
  for (const auto& [i, p] : res.a) res.lifted.set(y(i), res.lifted.image(y(i)) - p);
  if (!res.lifted.apply(w).is_zero()) throw NoSolution("post-check failed: f'(omega) != 0");
  return res;
}

// ---------------------------------------------------------------------------
// Commutator membership: b = [z, c] modulo <w>.

class CommutatorSolver {
 public:
  CommutatorSolver(int g, Word z, int d) : g_(g), z_(std::move(z)), d_(d), solver_(word_count(g, d)) {
    const int dc = d - weight(z_);
    if (dc >= 0) {
      unknowns_ = words_of_weight({g, 0}, dc);
      const Polynomial zp(z_);
      for (const auto& u : unknowns_) solver_.add(word_coords(bracket(zp, Polynomial(u)), g));
    }
    for (const auto& p : two_sided_ideal_generators(g, d)) solver_.add(word_coords(p, g));
  }

  std::optional<Polynomial> solve(const Polynomial& b) const {
    if (b.is_zero()) return Polynomial();
    if (!b.is_homogeneous() || b.max_weight() != d_) return std::nullopt;
    auto sol = solver_.express(word_coords(b, g_));
    if (!sol) return std::nullopt;
    Polynomial c;
    for (const auto& [j, a] : sol->entries())
      if (j < unknowns_.size()) c.add_term(unknowns_[j], a);
    return c;
  }

 private:
  int g_;
  Word z_;
  int d_;
  SpanSolver solver_;
  std::vector<Word> unknowns_;
};

inline const CommutatorSolver& commutator_solver(int g, const Word& z, int d) {
  static std::mutex mu;
  static std::map<std::tuple<int, Word, int>, std::unique_ptr<CommutatorSolver>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{g, z, d}];
  if (!slot) slot = std::make_unique<CommutatorSolver>(g, z, d);
  return *slot;
}

/// A witness c with b = [z, c] in T(H)_w, or nullopt when none exists.
inline std::optional<Polynomial> commutator_solve(int g, const Word& z, const Polynomial& b) {
  if (b.is_zero()) return Polynomial();
  if (!b.is_homogeneous()) return std::nullopt;
  return commutator_solver(g, z, b.max_weight()).solve(b);
}

}  // namespace kvtrace
