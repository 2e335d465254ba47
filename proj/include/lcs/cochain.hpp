#pragma once

#include <stdexcept>
#include <string>

#include "lcs/sset.hpp"
#include "lcs/zmod.hpp"

namespace lcs {

// A Z_d-valued function on the degree-n simplices of a truncated simplicial set.
struct Cochain {
  SSetPtr host;
  int degree = 0;
  i64 d = 2;
  ZVec values;

  static Cochain zero(SSetPtr x, int n, i64 d) {
    check_modulus(d);
    if (n < 0 || n > x->cap()) throw std::invalid_argument("cochain degree " + std::to_string(n) + " exceeds the cap");
    Cochain c{x, n, d, ZVec(x->size(n), 0)};
    return c;
  }
  i64 operator()(int s) const { return values[s]; }
  i64 at_label(const std::string& l) const { return values[host->index_of_label(degree, l)]; }
  void set(int s, i64 v) { values[s] = mod_reduce(v, d); }
  friend bool operator==(const Cochain& a, const Cochain& b) {
    return a.host == b.host && a.degree == b.degree && a.d == b.d && a.values == b.values;
  }
};

// (df)(sigma) = sum_i (-1)^i f(d_i sigma)
inline Cochain coboundary(const Cochain& f) {
  const int n = f.degree;
  if (n + 1 > f.host->cap())
    throw std::invalid_argument("coboundary needs degree " + std::to_string(n + 1) + " but the cap is " +
                                std::to_string(f.host->cap()));
  Cochain g = Cochain::zero(f.host, n + 1, f.d);
  for (std::size_t s = 0; s < f.host->size(n + 1); ++s) {
    i64 v = 0;
    for (int i = 0; i <= n + 1; ++i) v += (i % 2 ? -1 : 1) * f(f.host->face(n + 1, i, static_cast<int>(s)));
    g.values[s] = mod_reduce(v, f.d);
  }
  return g;
}

// Vanishes on every degree-(n+1) simplex of the truncation; vacuous when n equals the cap.
inline bool is_cocycle(const Cochain& f) {
  if (f.degree + 1 > f.host->cap()) return true;
  for (i64 v : coboundary(f).values)
    if (v != 0) return false;
  return true;
}

// Vanishes on degenerate simplices.
inline bool is_normalized(const Cochain& f) {
  for (std::size_t s = 0; s < f.values.size(); ++s)
    if (f.host->is_degenerate(f.degree, static_cast<int>(s)) && f.values[s] != 0) return false;
  return true;
}

}  // namespace lcs
