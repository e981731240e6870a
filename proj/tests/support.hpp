#pragma once

#include "kvtrace/traces.hpp"

#include <random>

namespace kvtrace::testing {

using Rng = std::mt19937_64;

inline Scalar random_scalar(Rng& rng, int range = 5) {
  std::uniform_int_distribution<int> num(-range, range);
  std::uniform_int_distribution<int> den(1, 3);
  Scalar s(num(rng), den(rng));
  s.canonicalize();
  return s;
}

inline Scalar random_nonzero(Rng& rng, int range = 5) {
  Scalar s;
  do s = random_scalar(rng, range);
  while (s == 0);
  return s;
}

inline Word random_word(Rng& rng, Ambient amb, int d) {
  auto alpha = amb.alphabet();
  Word w;
  int left = d;
  while (left > 0) {
    std::uniform_int_distribution<std::size_t> pick(0, alpha.size() - 1);
    Letter l = alpha[pick(rng)];
    if (weight(l) > left) continue;
    w.push_back(l);
    left -= weight(l);
  }
  return w;
}

inline Polynomial random_homogeneous(Rng& rng, Ambient amb, int d, int terms = 4) {
  Polynomial p;
  for (int i = 0; i < terms; ++i) p.add_term(random_word(rng, amb, d), random_nonzero(rng));
  return p;
}

inline Polynomial random_polynomial(Rng& rng, Ambient amb, int max_deg, int terms = 5) {
  Polynomial p;
  std::uniform_int_distribution<int> deg(0, max_deg);
  for (int i = 0; i < terms; ++i) p.add_term(random_word(rng, amb, deg(rng)), random_nonzero(rng));
  return p;
}

inline Polynomial random_lie(Rng& rng, Ambient amb, int d, int terms = 3) {
  auto basis = lyndon_lie_basis(amb, d);
  std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
  Polynomial p;
  for (int i = 0; i < terms; ++i) p += random_nonzero(rng) * basis[pick(rng)].poly;
  return p;
}

inline TracePolynomial random_trace(Rng& rng, Ambient amb, int d, int terms = 4) {
  return trace_project(random_homogeneous(rng, amb, d, terms));
}

}  // namespace kvtrace::testing
