#pragma once

// The free associative algebra T(H) on x_1..x_g, y_1..y_g, z_1..z_n.

#include "kvtrace/exactlin.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kvtrace {

enum class Kind : std::uint8_t { X = 0, Y = 1, Z = 2 };

struct Letter {
  Kind kind;
  std::uint8_t index;  // 1-based

  auto operator<=>(const Letter&) const = default;
};

inline Letter x(int i) { return {Kind::X, static_cast<std::uint8_t>(i)}; }
inline Letter y(int i) { return {Kind::Y, static_cast<std::uint8_t>(i)}; }
inline Letter z(int j) { return {Kind::Z, static_cast<std::uint8_t>(j)}; }

inline int weight(Letter l) { return l.kind == Kind::Z ? 2 : 1; }

inline std::string to_string(Letter l) {
  static const char names[] = {'x', 'y', 'z'};
  return std::string(1, names[static_cast<int>(l.kind)]) + std::to_string(l.index);
}

using Word = std::vector<Letter>;

inline int weight(const Word& w) {
  int s = 0;
  for (auto l : w) s += weight(l);
  return s;
}

inline std::string to_string(const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += "*";
    s += to_string(w[i]);
  }
  return s;
}

inline Word concat(const Word& a, const Word& b) {
  Word w;
  w.reserve(a.size() + b.size());
  w.insert(w.end(), a.begin(), a.end());
  w.insert(w.end(), b.begin(), b.end());
  return w;
}

class LetterOutOfRange : public std::out_of_range {
 public:
  explicit LetterOutOfRange(Letter l)
      : std::out_of_range("generator out of range: " + to_string(l)) {}
};

/// The ambient (g, n): genus and number of boundary generators.
struct Ambient {
  int g = 1;
  int n = 0;

  auto operator<=>(const Ambient&) const = default;

  bool contains(Letter l) const {
    if (l.index < 1) return false;
    if (l.kind == Kind::Z) return l.index <= n;
    return l.index <= g;
  }

  void check(const Word& w) const {
    for (auto l : w)
      if (!contains(l)) throw LetterOutOfRange(l);
  }

  /// x_1, y_1, ..., x_g, y_g, z_1, ..., z_n: symplectic ordering.
  std::vector<Letter> generators() const {
    std::vector<Letter> v;
    for (int i = 1; i <= g; ++i) {
      v.push_back(x(i));
      v.push_back(y(i));
    }
    for (int j = 1; j <= n; ++j) v.push_back(z(j));
    return v;
  }

  /// Generators in canonical term order (all x, then all y, then all z).
  std::vector<Letter> alphabet() const {
    std::vector<Letter> v;
    for (int i = 1; i <= g; ++i) v.push_back(x(i));
    for (int i = 1; i <= g; ++i) v.push_back(y(i));
    for (int j = 1; j <= n; ++j) v.push_back(z(j));
    return v;
  }
};

struct Grading {
  int weight = 0;
  std::vector<int> multidegree;  // (x1, y1, ..., xg, yg, z1, ..., zn) letter counts
  std::vector<int> d_class;      // (x1-y1, ..., xg-yg, z1, ..., zn, weight)
  int redundancy = 0;
};

inline Grading grade(const Word& w, Ambient amb) {
  amb.check(w);
  Grading gr;
  gr.multidegree.assign(2 * amb.g + amb.n, 0);
  for (auto l : w) {
    gr.weight += weight(l);
    switch (l.kind) {
      case Kind::X: ++gr.multidegree[2 * (l.index - 1)]; break;
      case Kind::Y: ++gr.multidegree[2 * (l.index - 1) + 1]; break;
      case Kind::Z: ++gr.multidegree[2 * amb.g + l.index - 1]; break;
    }
  }
  for (int i = 0; i < amb.g; ++i) {
    const int a = gr.multidegree[2 * i], b = gr.multidegree[2 * i + 1];
    gr.d_class.push_back(a - b);
    gr.redundancy += std::min(a, b);
  }
  for (int j = 0; j < amb.n; ++j) gr.d_class.push_back(gr.multidegree[2 * amb.g + j]);
  gr.d_class.push_back(gr.weight);
  return gr;
}

/// Element of T(H): finite linear combination of words.
class Polynomial {
 public:
  using Terms = std::map<Word, Scalar>;

  Polynomial() = default;
  explicit Polynomial(Word w, Scalar c = 1) {
    if (c != 0) terms_.emplace(std::move(w), std::move(c));
  }
  static Polynomial constant(const Scalar& c) { return Polynomial(Word{}, c); }
  static Polynomial letter(Letter l) { return Polynomial(Word{l}); }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Scalar coeff(const Word& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  void add_term(const Word& w, const Scalar& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(w, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Polynomial& operator+=(const Polynomial& o) {
    for (const auto& [w, c] : o.terms_) add_term(w, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    for (const auto& [w, c] : o.terms_) add_term(w, -c);
    return *this;
  }
  Polynomial& operator*=(const Scalar& a) {
    if (a == 0) terms_.clear();
    for (auto& [w, c] : terms_) c *= a;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(Polynomial a) { return a *= Scalar(-1); }
  friend Polynomial operator*(const Scalar& s, Polynomial a) { return a *= s; }
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }

  /// Largest weight of a term; -1 for the zero polynomial.
  int max_weight() const {
    int m = -1;
    for (const auto& [w, _] : terms_) m = std::max(m, weight(w));
    return m;
  }

  int min_weight() const {
    int m = -1;
    for (const auto& [w, _] : terms_) {
      const int k = weight(w);
      if (m < 0 || k < m) m = k;
    }
    return m;
  }

  Polynomial homogeneous_part(int d) const {
    Polynomial p;
    for (const auto& [w, c] : terms_)
      if (weight(w) == d) p.terms_.emplace(w, c);
    return p;
  }

  Polynomial truncated(int max_deg) const {
    Polynomial p;
    for (const auto& [w, c] : terms_)
      if (weight(w) <= max_deg) p.terms_.emplace(w, c);
    return p;
  }

  bool is_homogeneous() const { return max_weight() == min_weight(); }

  std::string to_string() const;

 private:
  Terms terms_;
};

inline std::string scalar_prefix(const Scalar& c, bool first, bool unit_word) {
  std::string s;
  Scalar a = abs(c);
  if (first)
    s = c < 0 ? "-" : "";
  else
    s = c < 0 ? " - " : " + ";
  if (unit_word) return s + a.get_str();
  if (a != 1) s += a.get_str() + "*";
  return s;
}

inline std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [w, c] : terms_) {
    s += scalar_prefix(c, first, w.empty());
    if (!w.empty()) s += kvtrace::to_string(w);
    first = false;
  }
  return s;
}

inline Polynomial multiply(const Polynomial& p, const Polynomial& q,
                           std::optional<int> truncate = std::nullopt) {
  Polynomial r;
  for (const auto& [a, ca] : p.terms()) {
    const int wa = weight(a);
    if (truncate && wa > *truncate) continue;
    for (const auto& [b, cb] : q.terms()) {
      if (truncate && wa + weight(b) > *truncate) continue;
      r.add_term(concat(a, b), ca * cb);
    }
  }
  return r;
}

inline Polynomial operator*(const Polynomial& p, const Polynomial& q) { return multiply(p, q); }

inline Polynomial bracket(const Polynomial& a, const Polynomial& b,
                          std::optional<int> truncate = std::nullopt) {
  return multiply(a, b, truncate) - multiply(b, a, truncate);
}

inline Polynomial power(const Polynomial& p, int k, std::optional<int> truncate = std::nullopt) {
  Polynomial r = Polynomial::constant(1);
  for (int i = 0; i < k; ++i) r = multiply(r, p, truncate);
  return r;
}

/// d_w: sum over monomials ending in w of the monomial with that letter removed.
inline Polynomial fox_d(Letter w, const Polynomial& p) {
  Polynomial r;
  for (const auto& [m, c] : p.terms())
    if (!m.empty() && m.back() == w) r.add_term(Word(m.begin(), m.end() - 1), c);
  return r;
}

// ---------------------------------------------------------------------------
// Free Lie algebra: Lyndon words and standard bracketing.

inline bool is_lyndon(const Word& w) {
  if (w.empty()) return false;
  const std::size_t n = w.size();
  for (std::size_t k = 1; k < n; ++k) {
    // w must be strictly smaller than its rotation starting at k.
    for (std::size_t i = 0; i < n; ++i) {
      const Letter a = w[i], b = w[(i + k) % n];
      if (a < b) break;
      if (b < a) return false;
      if (i + 1 == n) return false;  // periodic
    }
  }
  return true;
}

/// All words of the given weight over the alphabet, in lexicographic order.
inline std::vector<Word> words_of_weight(Ambient amb, int d) {
  std::vector<Word> out;
  const auto alpha = amb.alphabet();
  Word cur;
  auto rec = [&](auto&& self, int remaining) -> void {
    if (remaining == 0) {
      out.push_back(cur);
      return;
    }
    for (auto l : alpha) {
      if (weight(l) > remaining) continue;
      cur.push_back(l);
      self(self, remaining - weight(l));
      cur.pop_back();
    }
  };
  if (d >= 0) rec(rec, d);
  return out;
}

/// Standard factorization w = uv with v the longest proper Lyndon suffix.
inline std::pair<Word, Word> standard_factorization(const Word& w) {
  for (std::size_t k = 1; k < w.size(); ++k) {
    Word v(w.begin() + k, w.end());
    if (is_lyndon(v)) return {Word(w.begin(), w.begin() + k), v};
  }
  throw std::logic_error("standard_factorization on a letter");
}

class LyndonTable {
 public:
  const Polynomial& bracketing(const Word& w) {
    std::lock_guard lock(mu_);
    return bracketing_locked(w);
  }

 private:
  const Polynomial& bracketing_locked(const Word& w) {
    auto it = cache_.find(w);
    if (it != cache_.end()) return it->second;
    Polynomial p;
    if (w.size() == 1) {
      p = Polynomial(w);
    } else {
      auto [u, v] = standard_factorization(w);
      Polynomial pu = bracketing_locked(u);
      Polynomial pv = bracketing_locked(v);
      p = bracket(pu, pv);
    }
    return cache_.emplace(w, std::move(p)).first->second;
  }

  std::mutex mu_;
  std::map<Word, Polynomial> cache_;
};

inline LyndonTable& lyndon_table() {
  static LyndonTable t;
  return t;
}

inline std::vector<Word> lyndon_words(Ambient amb, int d) {
  std::vector<Word> out;
  for (auto& w : words_of_weight(amb, d))
    if (is_lyndon(w)) out.push_back(std::move(w));
  return out;
}

struct LieElement {
  Word lyndon;  // bracket-tree witness: standard bracketing of this word
  Polynomial poly;
};

inline std::vector<LieElement> lyndon_lie_basis(Ambient amb, int d) {
  if (d < 1) throw std::invalid_argument("lyndon_lie_basis: degree must be >= 1");
  std::vector<LieElement> out;
  for (auto& w : lyndon_words(amb, d)) {
    Polynomial p = lyndon_table().bracketing(w);
    out.push_back({std::move(w), std::move(p)});
  }
  return out;
}

/// Coordinates of p in the Lyndon basis, or nullopt when p is not Lie.
/// The least word in the expansion of P_w is w with coefficient 1.
inline std::optional<std::map<Word, Scalar>> lie_coordinates(Polynomial p) {
  std::map<Word, Scalar> coords;
  while (!p.is_zero()) {
    const auto& [w, c] = *p.terms().begin();
    if (!is_lyndon(w)) return std::nullopt;
    Word lw = w;
    Scalar cw = c;
    p -= cw * lyndon_table().bracketing(lw);
    coords.emplace(std::move(lw), std::move(cw));
  }
  return coords;
}

inline bool is_lie(const Polynomial& p) { return lie_coordinates(p).has_value(); }

// ---------------------------------------------------------------------------
// Derivations of T(H), determined by the images of the generators.

class Derivation {
 public:
  using Images = std::map<Letter, Polynomial>;

  Derivation() = default;
  explicit Derivation(Images images) {
    for (auto& [l, p] : images)
      if (!p.is_zero()) images_.emplace(l, std::move(p));
  }

  const Images& images() const { return images_; }
  bool is_zero() const { return images_.empty(); }

  Polynomial image(Letter l) const {
    auto it = images_.find(l);
    return it == images_.end() ? Polynomial() : it->second;
  }

  void set(Letter l, Polynomial p) {
    if (p.is_zero())
      images_.erase(l);
    else
      images_[l] = std::move(p);
  }

  /// Leibniz extension: D(a_1...a_k) = sum_i a_1...D(a_i)...a_k.
  Polynomial apply(const Polynomial& p, std::optional<int> truncate = std::nullopt) const {
    Polynomial r;
    for (const auto& [w, c] : p.terms()) {
      for (std::size_t i = 0; i < w.size(); ++i) {
        auto it = images_.find(w[i]);
        if (it == images_.end()) continue;
        const int outer = weight(w) - weight(w[i]);
        for (const auto& [m, cm] : it->second.terms()) {
          if (truncate && outer + weight(m) > *truncate) continue;
          Word nw(w.begin(), w.begin() + i);
          nw.insert(nw.end(), m.begin(), m.end());
          nw.insert(nw.end(), w.begin() + i + 1, w.end());
          r.add_term(nw, c * cm);
        }
      }
    }
    return r;
  }

  Derivation& operator+=(const Derivation& o) {
    for (const auto& [l, p] : o.images_) set(l, image(l) + p);
    return *this;
  }
  Derivation& operator*=(const Scalar& a) {
    if (a == 0) images_.clear();
    for (auto& [l, p] : images_) p *= a;
    return *this;
  }
  friend Derivation operator+(Derivation a, const Derivation& b) { return a += b; }
  friend Derivation operator*(const Scalar& s, Derivation a) { return a *= s; }
  friend Derivation operator-(const Derivation& a, const Derivation& b) {
    return a + Scalar(-1) * b;
  }
  friend bool operator==(const Derivation& a, const Derivation& b) { return a.images_ == b.images_; }

  std::string to_string() const {
    if (images_.empty()) return "0";
    std::string s;
    for (const auto& [l, p] : images_) {
      if (!s.empty()) s += "; ";
      s += kvtrace::to_string(l) + " -> " + p.to_string();
    }
    return s;
  }

 private:
  Images images_;
};

/// [u, v] = u v - v u as derivations.
inline Derivation commutator(const Derivation& u, const Derivation& v,
                             std::optional<int> truncate = std::nullopt) {
  Derivation::Images im;
  std::vector<Letter> letters;
  for (const auto& [l, _] : u.images()) letters.push_back(l);
  for (const auto& [l, _] : v.images()) letters.push_back(l);
  for (auto l : letters) {
    if (im.count(l)) continue;
    im[l] = u.apply(v.image(l), truncate) - v.apply(u.image(l), truncate);
  }
  return Derivation(std::move(im));
}

/// Inner derivation ad(a): v -> [a, v].
inline Derivation inner_derivation(Ambient amb, const Polynomial& a) {
  Derivation::Images im;
  for (auto l : amb.generators()) im[l] = bracket(a, Polynomial::letter(l));
  return Derivation(std::move(im));
}

}  // namespace kvtrace
