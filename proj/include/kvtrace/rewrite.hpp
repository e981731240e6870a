#pragma once

// The cyclic rewriting system rho / rho_2 on |T(H)| (closed surface, n = 0) and the
// resulting X u Y basis of |T(H)_w|.

#include "kvtrace/omega.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kvtrace {

struct Irregularity {
  bool infinite = false;
  long value = 0;

  static Irregularity infinity() { return {true, 0}; }

  friend bool operator==(const Irregularity& a, const Irregularity& b) {
    return a.infinite == b.infinite && (a.infinite || a.value == b.value);
  }
  friend bool operator<(const Irregularity& a, const Irregularity& b) {
    if (a.infinite) return false;
    return b.infinite || a.value < b.value;
  }
  std::string to_string() const { return infinite ? "inf" : std::to_string(value); }
};

/// irr = +inf exactly when the word uses only x_g, y_g and contains both.
inline bool irregularity_is_infinite(const Word& w, int g) {
  bool has_x = false, has_y = false;
  for (auto l : w) {
    if (l == x(g))
      has_x = true;
    else if (l == y(g))
      has_y = true;
    else
      return false;
  }
  return has_x && has_y;
}

inline Irregularity irregularity(const Word& w, int g) {
  if (irregularity_is_infinite(w, g)) return Irregularity::infinity();
  const std::size_t n = w.size();
  bool only_g = true;
  for (auto l : w)
    if (l != x(g) && l != y(g)) only_g = false;
  if (only_g) return {};  // |x_g^m| or |y_g^m|
  long total = 0;
  for (std::size_t p = 0; p < n; ++p) {
    if (w[p] != y(g)) continue;
    for (std::size_t k = 1;; ++k) {
      const Letter h = w[(p + k) % n];
      if (h == x(g))
        ++total;
      else if (h != y(g))
        break;
    }
  }
  return {false, total};
}

/// The scan run literally: a walk that comes back to its own y_g never terminates, and
/// contributes +inf if it met an x_g, 0 otherwise.
inline Irregularity irregularity_by_procedure(const Word& w, int g) {
  const std::size_t n = w.size();
  long total = 0;
  for (std::size_t p = 0; p < n; ++p) {
    if (w[p] != y(g)) continue;
    long t = 0;
    bool stopped = false;
    for (std::size_t k = 1; k <= n && !stopped; ++k) {
      const Letter h = w[(p + k) % n];
      if (h == x(g)) ++t;
      else if (h != y(g)) stopped = true;
    }
    if (!stopped) {
      if (t > 0) return Irregularity::infinity();
      t = 0;
    }
    total += t;
  }
  return {false, total};
}

inline Irregularity irregularity(const CyclicWord& w, int g) { return irregularity(w.rep(), g); }

inline Irregularity irregularity(const TracePolynomial& t, int g) {
  Irregularity m;
  for (const auto& [c, _] : t.terms()) m = std::max(m, irregularity(c, g));
  return m;
}

class NoOccurrence : public std::invalid_argument {
 public:
  NoOccurrence() : std::invalid_argument("no cyclic occurrence of y_g x_g at the requested position") {}
};

class InfiniteIrregularity : public std::runtime_error {
 public:
  explicit InfiniteIrregularity(std::vector<CyclicWord> words)
      : std::runtime_error("rho normalization of a term with infinite irregularity"), words_(std::move(words)) {}
  const std::vector<CyclicWord>& words() const { return words_; }

 private:
  std::vector<CyclicWord> words_;
};

class FiniteIrregularity : public std::invalid_argument {
 public:
  FiniteIrregularity() : std::invalid_argument("collapse_infinite needs a word of infinite irregularity") {}
};

/// Positions p of the representative with rep[p] = y_g and rep[p+1 mod n] = x_g.
inline std::vector<std::size_t> rho_occurrences(const Word& w, int g) {
  std::vector<std::size_t> out;
  const std::size_t n = w.size();
  for (std::size_t p = 0; p < n && n >= 2; ++p)
    if (w[p] == y(g) && w[(p + 1) % n] == x(g)) out.push_back(p);
  return out;
}

/// The word b with w = |b y_g x_g|, where the y_g sits at position p.
inline Word rho_context(const Word& w, std::size_t p) {
  const std::size_t n = w.size();
  Word b;
  for (std::size_t k = 2; k < n; ++k) b.push_back(w[(p + k) % n]);
  return b;
}

/// |b y_g x_g| -> |b x_g y_g| + |b w'| for the occurrence at position p.
inline TracePolynomial rho_rewrite_word(const Word& w, std::size_t p, int g) {
  const std::size_t n = w.size();
  if (n < 2 || p >= n || w[p] != y(g) || w[(p + 1) % n] != x(g)) throw NoOccurrence();
  const Word b = rho_context(w, p);
  TracePolynomial out = trace(concat(b, {x(g), y(g)}));
  out += trace_project(Polynomial(b) * symplectic_sum(g - 1));
  return out;
}

/// One application of rho at the given occurrence of the given term.
inline TracePolynomial rho_step(const TracePolynomial& t, const CyclicWord& term, std::size_t p, int g) {
  const Scalar c = t.coeff(term);
  if (c == 0) throw NoOccurrence();
  TracePolynomial out = t;
  out.add_term(term, -c);
  out += c * rho_rewrite_word(term.rep(), p, g);
  return out;
}

namespace detail {

class RhoCache {
 public:
  explicit RhoCache(int g) : g_(g) {}

  TracePolynomial normal_form(const CyclicWord& w) {
    std::lock_guard lock(mu_);
    return nf(w);
  }

 private:
  TracePolynomial nf(const CyclicWord& w) {
    auto it = memo_.find(w);
    if (it != memo_.end()) return it->second;
    const Irregularity irr = irregularity(w, g_);
    if (irr.infinite) throw InfiniteIrregularity({w});
    TracePolynomial out;
    if (irr.value == 0) {
      out = TracePolynomial(w);
    } else {
      const auto occ = rho_occurrences(w.rep(), g_);
      const TracePolynomial step = rho_rewrite_word(w.rep(), occ.front(), g_);
      for (const auto& [c, a] : step.terms()) out += a * nf(c);
    }
    return memo_.emplace(w, out).first->second;
  }

  int g_;
  std::recursive_mutex mu_;
  std::map<CyclicWord, TracePolynomial> memo_;
};

inline RhoCache& rho_cache(int g) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<RhoCache>> caches;
  std::lock_guard lock(mu);
  auto& slot = caches[g];
  if (!slot) slot = std::make_unique<RhoCache>(g);
  return *slot;
}

}  // namespace detail

/// The rho-normal form (deterministic first-occurrence strategy, memoized per word).
inline TracePolynomial rho_normalize(const TracePolynomial& t, int g) {
  std::vector<CyclicWord> bad;
  for (const auto& [c, _] : t.terms())
    if (irregularity(c, g).infinite) bad.push_back(c);
  if (!bad.empty()) throw InfiniteIrregularity(std::move(bad));
  TracePolynomial out;
  for (const auto& [c, a] : t.terms()) out += a * detail::rho_cache(g).normal_form(c);
  return out;
}

struct RhoTrace {
  TracePolynomial result;
  std::size_t steps = 0;
  bool decreasing = true;  // every step lowered irr of all produced words
};

/// rho-normalization choosing a uniformly random (term, occurrence) at every step.
template <class Rng>
RhoTrace rho_normalize_random(const TracePolynomial& t, int g, Rng& rng) {
  RhoTrace tr;
  tr.result = t;
  for (const auto& [c, _] : t.terms())
    if (irregularity(c, g).infinite) throw InfiniteIrregularity({c});
  for (;;) {
    std::vector<std::pair<CyclicWord, std::size_t>> choices;
    for (const auto& [c, _] : tr.result.terms()) {
      if (irregularity(c, g).value == 0) continue;
      for (auto p : rho_occurrences(c.rep(), g)) choices.emplace_back(c, p);
    }
    if (choices.empty()) return tr;
    std::uniform_int_distribution<std::size_t> pick(0, choices.size() - 1);
    const auto& [w, p] = choices[pick(rng)];
    const Irregularity before = irregularity(w, g);
    const TracePolynomial step = rho_rewrite_word(w.rep(), p, g);
    for (const auto& [c, _] : step.terms())
      if (!(irregularity(c, g) < before)) tr.decreasing = false;
    tr.result = rho_step(tr.result, w, p, g);
    ++tr.steps;
  }
}

// ---------------------------------------------------------------------------
// Infinite irregularity: collapsing onto |x_g^s y_g^t|.

struct Collapse {
  CyclicWord normal;
  TracePolynomial remainder;  // finite irregularity
  std::size_t moves = 0;
};

/// Moves beads (x_g) leftwards across partitions (y_g) into the fullest gap, one rho
/// application at a time; the sum of the emitted |b w'| terms is the remainder.
inline Collapse collapse_infinite(const CyclicWord& w, int g) {
  if (!irregularity_is_infinite(w.rep(), g)) throw FiniteIrregularity();
  Word cur = w.rep();
  const std::size_t n = cur.size();
  const Polynomial wp = symplectic_sum(g - 1);
  Collapse res;
  // Gap j: run of x_g following the j-th y_g. Choose the target as the fullest gap.
  auto gap_sizes = [&](const Word& v) {
    std::vector<std::pair<std::size_t, std::size_t>> gaps;  // (position of y, beads after it)
    for (std::size_t p = 0; p < n; ++p) {
      if (v[p] != y(g)) continue;
      std::size_t k = 0;
      while (v[(p + 1 + k) % n] == x(g)) ++k;
      gaps.emplace_back(p, k);
    }
    return gaps;
  };
  auto gaps = gap_sizes(cur);
  std::size_t target = 0;
  for (std::size_t j = 1; j < gaps.size(); ++j)
    if (gaps[j].second > gaps[target].second) target = j;
  // Label the partitions so the target survives position changes.
  std::vector<int> label(n, -1);
  for (std::size_t j = 0; j < gaps.size(); ++j) label[gaps[j].first] = static_cast<int>(j);
  const int target_label = static_cast<int>(target);
  for (;;) {
    std::optional<std::size_t> move;
    for (std::size_t p = 0; p < n && !move; ++p)
      if (cur[p] == y(g) && label[p] != target_label && cur[(p + 1) % n] == x(g)) move = p;
    if (!move) break;
    const std::size_t p = *move, q = (p + 1) % n;
    res.remainder += trace_project(Polynomial(rho_context(cur, p)) * wp);
    std::swap(cur[p], cur[q]);
    std::swap(label[p], label[q]);
    ++res.moves;
  }
  res.normal = CyclicWord(cur);
  return res;
}

inline CyclicWord xy_block(int g, int s, int t) {
  Word w(s, x(g));
  w.insert(w.end(), t, y(g));
  return CyclicWord(w);
}

// ---------------------------------------------------------------------------
// Holonomy data r_{s,t}, r'_{s,t}, b_{s,t}.

struct HolonomyData {
  int s = 0, t = 0;
  Polynomial r, r_prime, b;
};

/// Exhaustive linear (non-cyclic) rewriting y_g x_g -> x_g y_g + w' inside words.
inline Polynomial linear_rho_normalize(const Polynomial& p, int g) {
  const Polynomial wp = symplectic_sum(g - 1);
  Polynomial done, todo = p;
  while (!todo.is_zero()) {
    auto [w, c] = *todo.terms().begin();
    todo.add_term(w, -c);
    std::optional<std::size_t> pos;
    for (std::size_t i = 0; i + 1 < w.size() && !pos; ++i)
      if (w[i] == y(g) && w[i + 1] == x(g)) pos = i;
    if (!pos) {
      done.add_term(w, c);
      continue;
    }
    Polynomial left(Word(w.begin(), w.begin() + *pos));
    Polynomial right(Word(w.begin() + *pos + 2, w.end()));
    todo += c * (left * Polynomial(Word{x(g), y(g)}) * right);
    todo += c * (left * wp * right);
  }
  return done;
}

inline HolonomyData holonomy_data(int s, int t, int g) {
  if (s < 1 || t < 1) throw std::invalid_argument("holonomy_data needs s, t >= 1");
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, HolonomyData> memo;
  {
    std::lock_guard lock(mu);
    auto it = memo.find({s, t, g});
    if (it != memo.end()) return it->second;
  }
  HolonomyData h;
  h.s = s;
  h.t = t;
  const Polynomial xg = Polynomial::letter(x(g)), yg = Polynomial::letter(y(g));
  for (int i = 1; i <= s; ++i) h.r += power(xg, s - i) * power(yg, t - 1) * power(xg, i - 1);
  h.r_prime = linear_rho_normalize(h.r, g);
  h.b = h.r_prime - Scalar(s) * (power(xg, s - 1) * power(yg, t - 1));
  std::lock_guard lock(mu);
  return memo.emplace(std::tuple{s, t, g}, h).first->second;
}

// ---------------------------------------------------------------------------
// Bead model of the labelled graph on words with s x_g's and t y_g's.

struct Token {
  bool bead;  // true: x_g^{[label]}, false: partition y_g^{[label]}
  int label;  // 1-based
  auto operator<=>(const Token&) const = default;
};

class IllegalMove : public std::invalid_argument {
 public:
  explicit IllegalMove(int j) : std::invalid_argument("move m_" + std::to_string(j) + " is not legal here") {}
};

class NotALoop : public std::invalid_argument {
 public:
  NotALoop() : std::invalid_argument("move sequence does not return to its start") {}
};

class BeadConfig {
 public:
  BeadConfig(int s, int t, std::vector<Token> seq) : s_(s), t_(t), seq_(std::move(seq)) { validate(); }

  /// |y^[1] ... y^[t] x^[1] ... x^[s]|
  static BeadConfig base(int s, int t) {
    std::vector<Token> seq;
    for (int j = 1; j <= t; ++j) seq.push_back({false, j});
    for (int i = 1; i <= s; ++i) seq.push_back({true, i});
    return BeadConfig(s, t, std::move(seq));
  }

  int s() const { return s_; }
  int t() const { return t_; }
  const std::vector<Token>& tokens() const { return seq_; }

  std::size_t partition_position(int j) const {
    for (std::size_t p = 0; p < seq_.size(); ++p)
      if (!seq_[p].bead && seq_[p].label == j) return p;
    throw IllegalMove(j);
  }

  bool legal(int j) const {
    if (j < 1 || j > t_) return false;
    return seq_[(partition_position(j) + 1) % seq_.size()].bead;
  }

  Word word(int g) const {
    Word w;
    for (const auto& tk : seq_) w.push_back(tk.bead ? x(g) : y(g));
    return w;
  }

  /// Applies m_j; returns the rho-normalized edge holonomy.
  TracePolynomial move(int j, int g) {
    if (!legal(j)) throw IllegalMove(j);
    const std::size_t p = partition_position(j), q = (p + 1) % seq_.size();
    const Word b = rho_context(word(g), p);
    std::swap(seq_[p], seq_[q]);
    return rho_normalize(trace_project(Polynomial(b) * symplectic_sum(g - 1)), g);
  }

  /// Equality of cyclic labelled sequences.
  friend bool operator==(const BeadConfig& a, const BeadConfig& b) {
    if (a.s_ != b.s_ || a.t_ != b.t_) return false;
    const std::size_t n = a.seq_.size();
    for (std::size_t k = 0; k < n; ++k) {
      bool eq = true;
      for (std::size_t i = 0; i < n && eq; ++i) eq = a.seq_[i] == b.seq_[(i + k) % n];
      if (eq) return true;
    }
    return n == 0;
  }

 private:
  void validate() const {
    std::vector<int> beads, parts;
    for (const auto& tk : seq_) (tk.bead ? beads : parts).push_back(tk.label);
    if (static_cast<int>(beads.size()) != s_ || static_cast<int>(parts.size()) != t_)
      throw std::invalid_argument("bead configuration has wrong counts");
    auto cyclic_increasing = [](const std::vector<int>& v) {
      // v must be a rotation of 1..m
      const std::size_t m = v.size();
      if (m == 0) return true;
      std::size_t start = 0;
      while (start < m && v[start] != 1) ++start;
      if (start == m) return false;
      for (std::size_t i = 0; i < m; ++i)
        if (v[(start + i) % m] != static_cast<int>(i) + 1) return false;
      return true;
    };
    if (!cyclic_increasing(beads) || !cyclic_increasing(parts))
      throw std::invalid_argument("bead configuration breaks the cyclic label order");
  }

  int s_, t_;
  std::vector<Token> seq_;
};

/// Sum of edge holonomies along a loop of moves.
inline TracePolynomial bead_loop_holonomy(const BeadConfig& start, const std::vector<int>& moves, int g) {
  BeadConfig cur = start;
  TracePolynomial h;
  for (int j : moves) h += cur.move(j, g);
  if (!(cur == start)) throw NotALoop();
  return h;
}

/// m_t^s m_{t-1}^s ... m_1^s: partition t first, s times each.
inline std::vector<int> standard_loop(int s, int t) {
  std::vector<int> moves;
  for (int j = t; j >= 1; --j)
    for (int k = 0; k < s; ++k) moves.push_back(j);
  return moves;
}

// ---------------------------------------------------------------------------
// The secondary rule rho_2 and the normal form.

/// |x_g^{s-1} y_g^{t-1} y_{g-1} x_{g-1}|
inline CyclicWord rho2_pattern(int g, int s, int t) {
  Word w(s - 1, x(g));
  w.insert(w.end(), t - 1, y(g));
  w.push_back(y(g - 1));
  w.push_back(x(g - 1));
  return CyclicWord(w);
}

/// (s, t) when c is a pattern word with s + t >= 3.
inline std::optional<std::pair<int, int>> rho2_match(const CyclicWord& c, int g) {
  if (g < 2) return std::nullopt;
  int a = 0, b = 0, xs = 0, ys = 0;
  for (auto l : c.rep()) {
    if (l == x(g))
      ++a;
    else if (l == y(g))
      ++b;
    else if (l == x(g - 1))
      ++xs;
    else if (l == y(g - 1))
      ++ys;
    else
      return std::nullopt;
  }
  if (xs != 1 || ys != 1 || a + b < 1) return std::nullopt;
  if (!(rho2_pattern(g, a + 1, b + 1) == c)) return std::nullopt;
  return std::pair{a + 1, b + 1};
}

inline TracePolynomial rho2_rhs(int g, int s, int t) {
  const auto h = holonomy_data(s, t, g);
  const Polynomial xy = Polynomial::letter(x(g - 1)) * Polynomial::letter(y(g - 1));
  const Polynomial yx = Polynomial::letter(y(g - 1)) * Polynomial::letter(x(g - 1));
  const Scalar inv = Scalar(1) / s;
  return inv * (trace_project(h.r_prime * (xy + symplectic_sum(g - 2))) - trace_project(h.b * yx));
}

/// Replaces every pattern term simultaneously.
inline TracePolynomial rho2_step(const TracePolynomial& t, int g) {
  TracePolynomial out;
  for (const auto& [c, a] : t.terms()) {
    if (auto st = rho2_match(c, g))
      out += a * rho2_rhs(g, st->first, st->second);
    else
      out.add_term(c, a);
  }
  return out;
}

inline bool in_Y(const CyclicWord& c, int g) {
  if (!irregularity_is_infinite(c.rep(), g)) return false;
  int s = 0, t = 0;
  for (auto l : c.rep()) (l == x(g) ? s : t) += 1;
  return xy_block(g, s, t) == c;
}

inline bool in_X(const CyclicWord& c, int g) {
  const auto irr = irregularity(c, g);
  return !irr.infinite && irr.value == 0 && !rho2_match(c, g);
}

/// Sorted commutative monomial |x^a y^b| (genus one).
inline CyclicWord commutative_monomial(const CyclicWord& c) {
  int a = 0, b = 0;
  for (auto l : c.rep()) (l.kind == Kind::X ? a : b) += 1;
  return xy_block(1, a, b);
}

/// Representative in Span(X u Y) of the class of t in |T(H)_w|.
inline TracePolynomial normal_form(const TracePolynomial& t, int g) {
  if (g == 1) {
    TracePolynomial out;
    for (const auto& [c, a] : t.terms()) out.add_term(commutative_monomial(c), a);
    return out;
  }
  TracePolynomial cur = t;
  for (int round = 0; round < 64; ++round) {
    TracePolynomial ys, finite;
    for (const auto& [c, a] : cur.terms()) {
      if (!irregularity(c, g).infinite) {
        finite.add_term(c, a);
        continue;
      }
      Collapse col = collapse_infinite(c, g);
      ys.add_term(col.normal, a);
      finite += a * col.remainder;
    }
    TracePolynomial reduced = rho2_step(rho_normalize(finite, g), g);
    bool clean = true;
    for (const auto& [c, _] : reduced.terms())
      if (!in_X(c, g)) clean = false;
    cur = ys + reduced;
    if (clean) return cur;
  }
  throw std::logic_error("normal_form did not reach a fixpoint");
}

inline std::vector<CyclicWord> basis_XY(int g, int d) {
  std::vector<CyclicWord> out;
  for (const auto& c : necklace_basis({g, 0}, d)) {
    if (g == 1) {
      if (commutative_monomial(c) == c) out.push_back(c);
    } else if (in_X(c, g) || in_Y(c, g)) {
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace kvtrace
