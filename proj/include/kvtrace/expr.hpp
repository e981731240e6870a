#pragma once

// Element syntax:
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ('^' uint)?
//   atom   := rational | generator | '[' expr ',' expr ']' | 'tr' '(' expr ')' | '(' expr ')'
// Generators are x<i>, y<i> (1 <= i <= g) and z<j> (1 <= j <= n).

#include "kvtrace/traces.hpp"

#include <cctype>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace kvtrace {

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(int line, int col, std::set<std::string> expected, const std::string& found)
      : std::runtime_error(format(line, col, expected, found)), line_(line), col_(col), expected_(std::move(expected)) {}

  int line() const { return line_; }
  int col() const { return col_; }
  const std::set<std::string>& expected() const { return expected_; }

 private:
  static std::string format(int line, int col, const std::set<std::string>& expected, const std::string& found) {
    std::string s = "syntax error at " + std::to_string(line) + ":" + std::to_string(col) + ": expected ";
    bool first = true;
    for (const auto& e : expected) {
      s += (first ? "" : " or ") + e;
      first = false;
    }
    return s + ", found " + found;
  }

  int line_, col_;
  std::set<std::string> expected_;
};

class UnknownGenerator : public std::out_of_range {
 public:
  explicit UnknownGenerator(const std::string& name) : std::out_of_range("unknown generator: " + name), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

/// Raised on evaluation when an expression mixes traces and tensor elements illegally.
class TypeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ElementExpr {
  enum class Kind { Number, Generator, Sum, Product, Power, Bracket, Trace };

  Kind kind = Kind::Number;
  Scalar number;
  Letter letter{};
  int exponent = 0;
  std::vector<ElementExpr> children;
  std::vector<int> signs;  // Sum only: +1 or -1 per child

  std::size_t top_level_terms() const { return kind == Kind::Sum ? children.size() : 1; }
};

namespace detail {

class ExprParser {
 public:
  ExprParser(const std::string& src, Ambient amb) : src_(src), amb_(amb) {}

  ElementExpr parse() {
    ElementExpr e = expr();
    skip();
    if (pos_ != src_.size()) fail({"'+'", "'-'", "'*'", "end of input"});
    return e;
  }

 private:
  void skip() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  char peek() {
    skip();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  [[noreturn]] void fail(std::set<std::string> expected) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < src_.size(); ++i) {
      if (src_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    const std::string found = pos_ < src_.size() ? "'" + std::string(1, src_[pos_]) + "'" : "end of input";
    throw SyntaxError(line, col, std::move(expected), found);
  }

  void expect(char c) {
    if (peek() != c) fail({std::string("'") + c + "'"});
    ++pos_;
  }

  std::string digits() {
    std::string s;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) s += src_[pos_++];
    return s;
  }

  ElementExpr expr() {
    ElementExpr sum;
    sum.kind = ElementExpr::Kind::Sum;
    int sign = 1;
    if (peek() == '+' || peek() == '-') sign = src_[pos_++] == '-' ? -1 : 1;
    sum.children.push_back(term());
    sum.signs.push_back(sign);
    while (peek() == '+' || peek() == '-') {
      sum.signs.push_back(src_[pos_++] == '-' ? -1 : 1);
      sum.children.push_back(term());
    }
    if (sum.children.size() == 1 && sum.signs[0] == 1) return std::move(sum.children[0]);
    return sum;
  }

  ElementExpr term() {
    ElementExpr first = factor();
    if (peek() != '*') return first;
    ElementExpr prod;
    prod.kind = ElementExpr::Kind::Product;
    prod.children.push_back(std::move(first));
    while (peek() == '*') {
      ++pos_;
      prod.children.push_back(factor());
    }
    return prod;
  }

  ElementExpr factor() {
    ElementExpr a = atom();
    if (peek() != '^') return a;
    ++pos_;
    skip();
    const std::string d = digits();
    if (d.empty()) fail({"unsigned integer"});
    ElementExpr p;
    p.kind = ElementExpr::Kind::Power;
    p.exponent = std::stoi(d);
    p.children.push_back(std::move(a));
    return p;
  }

  ElementExpr atom() {
    const char c = peek();
    ElementExpr e;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num = digits();
      if (pos_ < src_.size() && src_[pos_] == '/') {
        ++pos_;
        const std::string den = digits();
        if (den.empty()) fail({"unsigned integer"});
        num += "/" + den;
      }
      e.kind = ElementExpr::Kind::Number;
      e.number = Scalar(num);
      if (e.number.get_den() == 0) fail({"nonzero denominator"});
      e.number.canonicalize();
      return e;
    }
    if (c == '[') {
      ++pos_;
      e.kind = ElementExpr::Kind::Bracket;
      e.children.push_back(expr());
      expect(',');
      e.children.push_back(expr());
      expect(']');
      return e;
    }
    if (c == '(') {
      ++pos_;
      e = expr();
      expect(')');
      return e;
    }
    if (src_.compare(pos_, 2, "tr") == 0) {
      pos_ += 2;
      expect('(');
      e.kind = ElementExpr::Kind::Trace;
      e.children.push_back(expr());
      expect(')');
      return e;
    }
    if (c == 'x' || c == 'y' || c == 'z') {
      const std::size_t start = pos_++;
      const std::string d = digits();
      if (d.empty()) fail({"generator index"});
      const int i = std::stoi(d);
      const Letter l = c == 'x' ? x(i) : c == 'y' ? y(i) : z(i);
      if (i > 255 || !amb_.contains(l)) throw UnknownGenerator(src_.substr(start, pos_ - start));
      e.kind = ElementExpr::Kind::Generator;
      e.letter = l;
      return e;
    }
    fail({"rational", "generator", "'['", "'tr('", "'('"});
  }

  const std::string& src_;
  Ambient amb_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline ElementExpr parse_element(const std::string& src, int g, int n = 0) {
  return detail::ExprParser(src, {g, n}).parse();
}

// ---------------------------------------------------------------------------
// Evaluation.

using ElementValue = std::variant<Polynomial, TracePolynomial>;

namespace detail {

inline bool is_scalar(const Polynomial& p) {
  for (const auto& [w, _] : p.terms())
    if (!w.empty()) return false;
  return true;
}

inline ElementValue eval(const ElementExpr& e) {
  using K = ElementExpr::Kind;
  switch (e.kind) {
    case K::Number:
      return Polynomial::constant(e.number);
    case K::Generator:
      return Polynomial::letter(e.letter);
    case K::Sum: {
      ElementValue acc = Polynomial();
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        ElementValue v = std::visit([&](auto&& a) -> ElementValue { return Scalar(e.signs[i]) * a; }, eval(e.children[i]));
        if (acc.index() != v.index()) {
          // 0 is both a polynomial and a trace
          const auto* p = std::get_if<Polynomial>(&acc);
          const auto* q = std::get_if<Polynomial>(&v);
          if (p && p->is_zero()) acc = TracePolynomial();
          else if (q && q->is_zero()) continue;
          else throw TypeError("cannot add a trace and a tensor element");
        }
        if (auto* p = std::get_if<Polynomial>(&acc)) *p += std::get<Polynomial>(v);
        else std::get<TracePolynomial>(acc) += std::get<TracePolynomial>(v);
      }
      return acc;
    }
    case K::Product: {
      ElementValue acc = eval(e.children[0]);
      for (std::size_t i = 1; i < e.children.size(); ++i) {
        ElementValue v = eval(e.children[i]);
        auto* p = std::get_if<Polynomial>(&acc);
        auto* q = std::get_if<Polynomial>(&v);
        if (p && q) {
          *p = *p * *q;
        } else if (p && is_scalar(*p)) {
          acc = p->coeff({}) * std::get<TracePolynomial>(v);
        } else if (q && is_scalar(*q)) {
          acc = q->coeff({}) * std::get<TracePolynomial>(acc);
        } else {
          throw TypeError("traces can only be multiplied by scalars");
        }
      }
      return acc;
    }
    case K::Power: {
      ElementValue v = eval(e.children[0]);
      if (auto* p = std::get_if<Polynomial>(&v)) return power(*p, e.exponent);
      if (e.exponent == 1) return v;
      throw TypeError("powers of traces are not defined");
    }
    case K::Bracket: {
      ElementValue a = eval(e.children[0]), b = eval(e.children[1]);
      if (a.index() != 0 || b.index() != 0) throw TypeError("bracket arguments must be tensor elements");
      return bracket(std::get<Polynomial>(a), std::get<Polynomial>(b));
    }
    case K::Trace: {
      ElementValue v = eval(e.children[0]);
      if (v.index() != 0) throw TypeError("nested trace");
      return trace_project(std::get<Polynomial>(v));
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace detail

inline ElementValue evaluate(const ElementExpr& e) { return detail::eval(e); }

/// Parses and evaluates; a tensor element is sent to its trace.
inline TracePolynomial parse_trace(const std::string& src, int g, int n = 0) {
  ElementValue v = evaluate(parse_element(src, g, n));
  if (auto* p = std::get_if<Polynomial>(&v)) return trace_project(*p);
  return std::get<TracePolynomial>(v);
}

inline Polynomial parse_polynomial(const std::string& src, int g, int n = 0) {
  ElementValue v = evaluate(parse_element(src, g, n));
  if (auto* p = std::get_if<Polynomial>(&v)) return *p;
  throw TypeError("expected a tensor element, got a trace");
}

inline std::string to_string(const ElementValue& v) {
  if (auto* p = std::get_if<Polynomial>(&v)) return p->to_string();
  return to_string(std::get<TracePolynomial>(v));
}

/// Printed form of a parse tree, fully parenthesized where precedence requires.
inline std::string to_string(const ElementExpr& e) {
  using K = ElementExpr::Kind;
  auto wrap = [](const ElementExpr& c, bool need) { return need ? "(" + to_string(c) + ")" : to_string(c); };
  switch (e.kind) {
    case K::Number:
      return e.number.get_str();
    case K::Generator:
      return to_string(e.letter);
    case K::Sum: {
      std::string s;
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        if (i == 0) s += e.signs[i] < 0 ? "-" : "";
        else s += e.signs[i] < 0 ? " - " : " + ";
        s += wrap(e.children[i], e.children[i].kind == K::Sum);
      }
      return s;
    }
    case K::Product: {
      std::string s;
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        if (i) s += "*";
        s += wrap(e.children[i], e.children[i].kind == K::Sum || e.children[i].kind == K::Product);
      }
      return s;
    }
    case K::Power: {
      const auto& c = e.children[0];
      const bool atomic = c.kind == K::Generator || c.kind == K::Bracket || c.kind == K::Trace ||
                          (c.kind == K::Number && c.number.get_den() == 1);
      return wrap(c, !atomic) + "^" + std::to_string(e.exponent);
    }
    case K::Bracket:
      return "[" + to_string(e.children[0]) + ", " + to_string(e.children[1]) + "]";
    case K::Trace:
      return "tr(" + to_string(e.children[0]) + ")";
  }
  return "";
}

}  // namespace kvtrace
