#pragma once

// Exact rational linear algebra over sparse coordinate vectors.
//
// Every subspace is kept in reduced row-echelon form, so two subspaces are
// equal iff their stored bases are identical. Pivoting always takes the first
// nonzero column, which makes all outputs reproducible.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kvtrace {

using Scalar = mpq_class;

inline std::string to_string(const Scalar& s) { return s.get_str(); }

class MismatchedAmbient : public std::invalid_argument {
 public:
  MismatchedAmbient(std::size_t a, std::size_t b)
      : std::invalid_argument("ambient dimensions differ: " + std::to_string(a) +
                              " vs " + std::to_string(b)) {}
};

/// Sparse coordinate vector: strictly increasing indices, no stored zeros.
class SparseVector {
 public:
  using Entry = std::pair<std::size_t, Scalar>;

  SparseVector() = default;

  static SparseVector unit(std::size_t i) {
    SparseVector v;
    v.entries_.emplace_back(i, Scalar(1));
    return v;
  }

  /// Builds from unsorted (index, value) pairs; duplicates are summed.
  static SparseVector from_pairs(std::vector<Entry> pairs) {
    std::sort(pairs.begin(), pairs.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    SparseVector v;
    for (auto& [i, x] : pairs) {
      if (!v.entries_.empty() && v.entries_.back().first == i) {
        v.entries_.back().second += x;
        if (v.entries_.back().second == 0) v.entries_.pop_back();
      } else if (x != 0) {
        v.entries_.emplace_back(i, std::move(x));
      }
    }
    return v;
  }

  static SparseVector from_map(const std::map<std::size_t, Scalar>& m) {
    SparseVector v;
    for (const auto& [i, x] : m)
      if (x != 0) v.entries_.emplace_back(i, x);
    return v;
  }

  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t nnz() const { return entries_.size(); }
  std::size_t leading_index() const { return entries_.front().first; }
  const Scalar& leading_value() const { return entries_.front().second; }

  Scalar at(std::size_t i) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), i,
                               [](const Entry& e, std::size_t k) { return e.first < k; });
    if (it != entries_.end() && it->first == i) return it->second;
    return Scalar(0);
  }

  /// Largest stored index + 1 (0 when empty).
  std::size_t extent() const { return entries_.empty() ? 0 : entries_.back().first + 1; }

  void scale(const Scalar& a) {
    if (a == 0) {
      entries_.clear();
      return;
    }
    for (auto& e : entries_) e.second *= a;
  }

  /// this += a * x
  void axpy(const Scalar& a, const SparseVector& x) {
    if (a == 0 || x.empty()) return;
    std::vector<Entry> out;
    out.reserve(entries_.size() + x.entries_.size());
    auto i = entries_.begin();
    auto j = x.entries_.begin();
    while (i != entries_.end() || j != x.entries_.end()) {
      if (j == x.entries_.end() || (i != entries_.end() && i->first < j->first)) {
        out.push_back(std::move(*i));
        ++i;
      } else if (i == entries_.end() || j->first < i->first) {
        out.emplace_back(j->first, a * j->second);
        ++j;
      } else {
        Scalar s = i->second + a * j->second;
        if (s != 0) out.emplace_back(i->first, std::move(s));
        ++i;
        ++j;
      }
    }
    entries_ = std::move(out);
  }

  SparseVector shifted(std::size_t offset) const {
    SparseVector v;
    v.entries_.reserve(entries_.size());
    for (const auto& [i, x] : entries_) v.entries_.emplace_back(i + offset, x);
    return v;
  }

  friend bool operator==(const SparseVector& a, const SparseVector& b) {
    return a.entries_ == b.entries_;
  }

  friend SparseVector operator+(SparseVector a, const SparseVector& b) {
    a.axpy(Scalar(1), b);
    return a;
  }
  friend SparseVector operator-(SparseVector a, const SparseVector& b) {
    a.axpy(Scalar(-1), b);
    return a;
  }

  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for (const auto& [i, x] : entries_) {
      if (!first) s += ", ";
      first = false;
      s += std::to_string(i) + ":" + x.get_str();
    }
    return s + "}";
  }

 private:
  std::vector<Entry> entries_;
};

/// Sparse matrix stored by rows. Acts on column vectors: (Mv)_r = sum_c M[r,c] v_c.
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows) {}

  static Matrix from_rows(std::size_t cols, std::vector<SparseVector> rows) {
    Matrix m(rows.size(), cols);
    for (const auto& r : rows)
      if (r.extent() > cols) throw std::out_of_range("row entry beyond column count");
    m.rows_ = std::move(rows);
    return m;
  }

  /// Column j of the result is cols[j]; the row count is `rows`.
  static Matrix from_columns(std::size_t rows, const std::vector<SparseVector>& cols) {
    std::vector<std::vector<SparseVector::Entry>> acc(rows);
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (const auto& [i, x] : cols[j].entries()) {
        if (i >= rows) throw std::out_of_range("column entry beyond row count");
        acc[i].emplace_back(j, x);
      }
    Matrix m(rows, cols.size());
    for (std::size_t i = 0; i < rows; ++i) m.rows_[i] = SparseVector::from_pairs(std::move(acc[i]));
    return m;
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.rows_[i] = SparseVector::unit(i);
    return m;
  }

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }
  const std::vector<SparseVector>& row_data() const { return rows_; }

  void set(std::size_t r, std::size_t c, const Scalar& x) {
    if (r >= rows_.size() || c >= cols_) throw std::out_of_range("Matrix::set");
    auto& row = rows_[r];
    row.axpy(Scalar(1), SparseVector::from_pairs({{c, x - row.at(c)}}));
  }

  Scalar at(std::size_t r, std::size_t c) const { return rows_.at(r).at(c); }

  SparseVector apply(const SparseVector& v) const {
    std::vector<SparseVector::Entry> out;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      Scalar s = 0;
      const auto& a = rows_[r].entries();
      const auto& b = v.entries();
      auto i = a.begin();
      auto j = b.begin();
      while (i != a.end() && j != b.end()) {
        if (i->first < j->first)
          ++i;
        else if (j->first < i->first)
          ++j;
        else {
          s += i->second * j->second;
          ++i;
          ++j;
        }
      }
      if (s != 0) out.emplace_back(r, std::move(s));
    }
    return SparseVector::from_pairs(std::move(out));
  }

 private:
  std::size_t cols_;
  std::vector<SparseVector> rows_;
};

/// A linear subspace of K^n in reduced row-echelon form.
class Subspace {
 public:
  explicit Subspace(std::size_t ambient_dim = 0) : ambient_(ambient_dim) {}

  static Subspace full(std::size_t n) {
    Subspace s(n);
    for (std::size_t i = 0; i < n; ++i) s.rows_.emplace(i, SparseVector::unit(i));
    return s;
  }

  static Subspace span(std::size_t ambient_dim, const std::vector<SparseVector>& vectors) {
    Subspace s(ambient_dim);
    for (const auto& v : vectors) s.insert(v);
    return s;
  }

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return rows_.size(); }

  std::vector<std::size_t> pivot_cols() const {
    std::vector<std::size_t> p;
    p.reserve(rows_.size());
    for (const auto& [c, _] : rows_) p.push_back(c);
    return p;
  }

  /// Basis rows ordered by pivot column.
  std::vector<SparseVector> basis() const {
    std::vector<SparseVector> b;
    b.reserve(rows_.size());
    for (const auto& [_, r] : rows_) b.push_back(r);
    return b;
  }

  bool is_pivot(std::size_t c) const { return rows_.count(c) != 0; }

  /// v minus its component along the subspace; zero at every pivot column.
  SparseVector reduce(const SparseVector& v) const {
    SparseVector out = v;
    for (const auto& [c, x] : v.entries()) {
      auto it = rows_.find(c);
      if (it != rows_.end()) out.axpy(-x, it->second);
    }
    return out;
  }

  bool contains(const SparseVector& v) const { return reduce(v).empty(); }

  /// Adds v to the spanning set; returns true when the dimension grew.
  bool insert(const SparseVector& v) {
    if (v.extent() > ambient_) throw std::out_of_range("vector exceeds ambient dimension");
    SparseVector r = reduce(v);
    if (r.empty()) return false;
    const std::size_t p = r.leading_index();
    r.scale(Scalar(1) / r.leading_value());
    for (auto& [c, row] : rows_) {
      Scalar x = row.at(p);
      if (x != 0) row.axpy(-x, r);
    }
    rows_.emplace(p, std::move(r));
    return true;
  }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    if (a.ambient_ != b.ambient_ || a.rows_.size() != b.rows_.size()) return false;
    auto i = a.rows_.begin();
    auto j = b.rows_.begin();
    for (; i != a.rows_.end(); ++i, ++j)
      if (i->first != j->first || !(i->second == j->second)) return false;
    return true;
  }

 private:
  std::size_t ambient_;
  std::map<std::size_t, SparseVector> rows_;
};

inline void require_same_ambient(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw MismatchedAmbient(a.ambient_dim(), b.ambient_dim());
}

inline Subspace sum(const Subspace& a, const Subspace& b) {
  require_same_ambient(a, b);
  Subspace s = a;
  for (const auto& v : b.basis()) s.insert(v);
  return s;
}

/// Zassenhaus: rows (u, u) for u in a and (w, 0) for w in b; rows whose left
/// half vanishes span the intersection.
inline Subspace intersect(const Subspace& a, const Subspace& b) {
  require_same_ambient(a, b);
  const std::size_t n = a.ambient_dim();
  Subspace z(2 * n);
  for (const auto& u : a.basis()) z.insert(u + u.shifted(n));
  for (const auto& w : b.basis()) z.insert(w);
  Subspace out(n);
  for (const auto& row : z.basis()) {
    if (row.leading_index() < n) continue;
    std::vector<SparseVector::Entry> e;
    for (const auto& [i, x] : row.entries()) e.emplace_back(i - n, x);
    out.insert(SparseVector::from_pairs(std::move(e)));
  }
  return out;
}

inline bool contains_vector(const Subspace& a, const SparseVector& v) {
  if (v.extent() > a.ambient_dim()) throw MismatchedAmbient(a.ambient_dim(), v.extent());
  return a.contains(v);
}

/// True when b is a subspace of a.
inline bool contains_subspace(const Subspace& a, const Subspace& b) {
  require_same_ambient(a, b);
  for (const auto& v : b.basis())
    if (!a.contains(v)) return false;
  return true;
}

/// dim(a + b) - dim(b)
inline std::size_t quotient_dim(const Subspace& a, const Subspace& b) {
  return sum(a, b).dim() - b.dim();
}

/// Image of a subspace under a linear map given by its action on basis vectors.
template <class F>
Subspace image(const Subspace& s, std::size_t target_dim, F&& map) {
  Subspace out(target_dim);
  for (const auto& v : s.basis()) out.insert(map(v));
  return out;
}

/// Incrementally spans a list of vectors and expresses targets as explicit
/// combinations of them. Reusable across many right-hand sides.
class SpanSolver {
 public:
  explicit SpanSolver(std::size_t ambient_dim) : ambient_(ambient_dim) {}

  std::size_t generator_count() const { return count_; }
  std::size_t rank() const { return rows_.size(); }

  /// Appends generator number generator_count(); returns true when the span grew.
  bool add(const SparseVector& v) {
    if (v.extent() > ambient_) throw std::out_of_range("vector exceeds ambient dimension");
    Row r{v, SparseVector::unit(count_++)};
    reduce_row(r);
    if (r.vec.empty()) return false;
    const std::size_t p = r.vec.leading_index();
    Scalar inv = Scalar(1) / r.vec.leading_value();
    r.vec.scale(inv);
    r.comb.scale(inv);
    for (auto& [c, row] : rows_) {
      Scalar a = row.vec.at(p);
      if (a != 0) {
        row.vec.axpy(-a, r.vec);
        row.comb.axpy(-a, r.comb);
      }
    }
    rows_.emplace(p, std::move(r));
    return true;
  }

  /// Coefficients on the generators reproducing b, or nullopt when b is outside the span.
  std::optional<SparseVector> express(const SparseVector& b) const {
    Row r{b, SparseVector()};
    reduce_row(r);
    if (!r.vec.empty()) return std::nullopt;
    r.comb.scale(Scalar(-1));
    return r.comb;
  }

  bool contains(const SparseVector& b) const {
    Row r{b, SparseVector()};
    reduce_row(r);
    return r.vec.empty();
  }

 private:
  struct Row {
    SparseVector vec;
    SparseVector comb;  // vec = sum comb[j] * generator_j (for stored rows)
  };

  // Subtracts stored rows; afterwards r.vec = input - sum(r.comb-weighted rows).
  void reduce_row(Row& r) const {
    const SparseVector orig = r.vec;
    for (const auto& [c, x] : orig.entries()) {
      auto it = rows_.find(c);
      if (it == rows_.end()) continue;
      r.vec.axpy(-x, it->second.vec);
      r.comb.axpy(-x, it->second.comb);
    }
  }

  std::size_t ambient_;
  std::size_t count_ = 0;
  std::map<std::size_t, Row> rows_;
};

struct KernelResult {
  std::size_t rank;
  Subspace kernel;
};

/// Rank and exact null space of v -> m v.
inline KernelResult echelon_kernel(const Matrix& m) {
  Subspace rowspace(m.cols());
  for (const auto& r : m.row_data()) rowspace.insert(r);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : rowspace.pivot_cols()) is_pivot[p] = true;
  const auto rows = rowspace.basis();
  // Kernel vector for free column f: e_f - sum_rows row[f] e_pivot(row).
  std::vector<std::vector<SparseVector::Entry>> acc(m.cols());
  for (const auto& r : rows) {
    const std::size_t p = r.leading_index();
    for (const auto& [c, x] : r.entries())
      if (c != p) acc[c].emplace_back(p, -x);
  }
  Subspace kernel(m.cols());
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    acc[f].emplace_back(f, Scalar(1));
    kernel.insert(SparseVector::from_pairs(std::move(acc[f])));
  }
  return {rowspace.dim(), std::move(kernel)};
}

/// A particular solution of m x = b with all free variables zero, or nullopt.
/// The returned solution is linear in b for a fixed m.
inline std::optional<SparseVector> solve(const Matrix& m, const SparseVector& b) {
  // Row-reduce [m | b]; the extra column sits at index m.cols().
  const std::size_t n = m.cols();
  std::vector<std::vector<SparseVector::Entry>> rows(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (const auto& e : m.row_data()[r].entries()) rows[r].push_back(e);
  for (const auto& [r, x] : b.entries()) {
    if (r >= m.rows()) throw std::out_of_range("right-hand side exceeds row count");
    rows[r].emplace_back(n, x);
  }
  Subspace aug(n + 1);
  for (auto& r : rows) aug.insert(SparseVector::from_pairs(std::move(r)));
  std::vector<SparseVector::Entry> x;
  for (const auto& row : aug.basis()) {
    const std::size_t p = row.leading_index();
    if (p == n) return std::nullopt;
    Scalar rhs = row.at(n);
    if (rhs != 0) x.emplace_back(p, rhs);
  }
  return SparseVector::from_pairs(std::move(x));
}

}  // namespace kvtrace
