#pragma once

// Cyclic words and the trace space |T(H)| = T(H)/[T(H),T(H)].

#include "kvtrace/freetensor.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

namespace kvtrace {

/// Start index of the lexicographically least rotation (two-pointer scan, linear time).
inline std::size_t least_rotation(const Word& w) {
  const std::size_t n = w.size();
  std::size_t i = 0, j = 1, k = 0;
  while (i < n && j < n && k < n) {
    const Letter a = w[(i + k) % n], b = w[(j + k) % n];
    if (a == b) {
      ++k;
      continue;
    }
    if (b < a)
      i += k + 1;
    else
      j += k + 1;
    if (i == j) ++j;
    k = 0;
  }
  return n == 0 ? 0 : std::min(i, j);
}

inline Word rotate(const Word& w, std::size_t k) {
  Word r;
  r.reserve(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) r.push_back(w[(k + i) % w.size()]);
  return r;
}

/// A necklace, stored by its least rotation.
class CyclicWord {
 public:
  CyclicWord() = default;
  explicit CyclicWord(const Word& w) : rep_(rotate(w, least_rotation(w))) {}

  const Word& rep() const { return rep_; }
  std::size_t size() const { return rep_.size(); }

  auto operator<=>(const CyclicWord&) const = default;

 private:
  Word rep_;
};

inline int weight(const CyclicWord& c) { return weight(c.rep()); }

inline std::string to_string(const CyclicWord& c) { return "tr(" + to_string(c.rep()) + ")"; }

/// Finite linear combination of keys with exact coefficients; no zero entries.
template <class Key>
class Combination {
 public:
  using Terms = std::map<Key, Scalar>;

  Combination() = default;
  explicit Combination(Key k, Scalar c = 1) {
    if (c != 0) terms_.emplace(std::move(k), std::move(c));
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Scalar coeff(const Key& k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  void add_term(const Key& k, const Scalar& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Combination& operator+=(const Combination& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
  }
  Combination& operator-=(const Combination& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, -c);
    return *this;
  }
  Combination& operator*=(const Scalar& a) {
    if (a == 0) terms_.clear();
    for (auto& [k, c] : terms_) c *= a;
    return *this;
  }
  friend Combination operator+(Combination a, const Combination& b) { return a += b; }
  friend Combination operator-(Combination a, const Combination& b) { return a -= b; }
  friend Combination operator-(Combination a) { return a *= Scalar(-1); }
  friend Combination operator*(const Scalar& s, Combination a) { return a *= s; }
  friend bool operator==(const Combination& a, const Combination& b) { return a.terms_ == b.terms_; }

  template <class Pred>
  Combination filtered(Pred&& keep) const {
    Combination r;
    for (const auto& [k, c] : terms_)
      if (keep(k)) r.terms_.emplace(k, c);
    return r;
  }

 private:
  Terms terms_;
};

using TracePolynomial = Combination<CyclicWord>;
using TraceTensor2 = Combination<std::pair<CyclicWord, CyclicWord>>;
using TensorPolynomial2 = Combination<std::pair<Word, Word>>;

inline TracePolynomial trace(const Word& w, const Scalar& c = 1) {
  return TracePolynomial(CyclicWord(w), c);
}

inline TracePolynomial trace_project(const Polynomial& p) {
  TracePolynomial t;
  for (const auto& [w, c] : p.terms()) t.add_term(CyclicWord(w), c);
  return t;
}

/// The representative monomials as an element of T(H).
inline Polynomial representative(const TracePolynomial& t) {
  Polynomial p;
  for (const auto& [c, a] : t.terms()) p.add_term(c.rep(), a);
  return p;
}

inline TracePolynomial homogeneous_part(const TracePolynomial& t, int d) {
  return t.filtered([d](const CyclicWord& c) { return weight(c) == d; });
}

inline int max_weight(const TracePolynomial& t) {
  int m = -1;
  for (const auto& [c, _] : t.terms()) m = std::max(m, weight(c));
  return m;
}

/// A derivation acts on traces through representatives: D|w| = |D w|.
inline TracePolynomial apply(const Derivation& d, const TracePolynomial& t,
                             std::optional<int> truncate = std::nullopt) {
  return trace_project(d.apply(representative(t), truncate));
}

inline std::string to_string(const TracePolynomial& t) {
  if (t.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [c, a] : t.terms()) {
    s += scalar_prefix(a, first, false) + to_string(c);
    first = false;
  }
  return s;
}

inline std::string to_string(const TraceTensor2& t) {
  if (t.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [k, a] : t.terms()) {
    s += scalar_prefix(a, first, false) + to_string(k.first) + " (x) " + to_string(k.second);
    first = false;
  }
  return s;
}

/// Necklaces of the given weight in canonical order.
inline std::vector<CyclicWord> necklace_basis(Ambient amb, int d) {
  std::vector<CyclicWord> out;
  if (d < 0) return out;
  if (d == 0) {
    out.emplace_back();
    return out;
  }
  if (amb.n == 0) {
    // Fredricksen-Kessler-Maiorana: necklaces of length d in lexicographic order.
    const auto alpha = amb.alphabet();
    const int k = static_cast<int>(alpha.size());
    std::vector<int> a(d + 1, 0);
    auto gen = [&](auto&& self, int t, int p) -> void {
      if (t > d) {
        if (d % p == 0) {
          Word w;
          for (int i = 1; i <= d; ++i) w.push_back(alpha[a[i]]);
          out.emplace_back(w);
        }
        return;
      }
      a[t] = a[t - p];
      self(self, t + 1, p);
      for (int j = a[t - p] + 1; j < k; ++j) {
        a[t] = j;
        self(self, t + 1, t);
      }
    };
    gen(gen, 1, 1);
    return out;
  }
  for (const auto& w : words_of_weight(amb, d))
    if (CyclicWord(w).rep() == w) out.emplace_back(w);
  return out;
}

/// Coordinates for the weight-d trace space.
class NecklaceIndex {
 public:
  NecklaceIndex(Ambient amb, int d) : amb_(amb), degree_(d), words_(necklace_basis(amb, d)) {
    for (std::size_t i = 0; i < words_.size(); ++i) pos_.emplace(words_[i], i);
  }

  Ambient ambient() const { return amb_; }
  int degree() const { return degree_; }
  std::size_t size() const { return words_.size(); }
  const std::vector<CyclicWord>& words() const { return words_; }
  const CyclicWord& at(std::size_t i) const { return words_.at(i); }

  std::size_t index(const CyclicWord& c) const {
    auto it = pos_.find(c);
    if (it == pos_.end()) throw std::out_of_range("necklace not in weight-" + std::to_string(degree_) + " basis: " + to_string(c));
    return it->second;
  }

  /// Coordinates of the weight-d part of t; other weights must be absent.
  SparseVector coords(const TracePolynomial& t) const {
    std::vector<SparseVector::Entry> e;
    for (const auto& [c, a] : t.terms()) e.emplace_back(index(c), a);
    return SparseVector::from_pairs(std::move(e));
  }

  TracePolynomial element(const SparseVector& v) const {
    TracePolynomial t;
    for (const auto& [i, a] : v.entries()) t.add_term(words_.at(i), a);
    return t;
  }

 private:
  Ambient amb_;
  int degree_;
  std::vector<CyclicWord> words_;
  std::map<CyclicWord, std::size_t> pos_;
};

inline const NecklaceIndex& necklace_index(Ambient amb, int d) {
  static std::mutex mu;
  static std::map<std::pair<Ambient, int>, std::unique_ptr<NecklaceIndex>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{amb, d}];
  if (!slot) slot = std::make_unique<NecklaceIndex>(amb, d);
  return *slot;
}

}  // namespace kvtrace
