#pragma once

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcs/presentation.hpp"

namespace lcs {

// Invariant factors of a finitely generated abelian group; 0 stands for a Z summand.
struct AbelianInvariants {
  std::vector<i64> factors;  // sorted, nontrivial torsion factors first (each divides the next), then zeros

  bool is_finite() const { return std::find(factors.begin(), factors.end(), 0) == factors.end(); }
  int free_rank() const { return static_cast<int>(std::count(factors.begin(), factors.end(), 0)); }
  i64 order() const {
    if (!is_finite()) return 0;
    i64 n = 1;
    for (i64 f : factors) n *= f;
    return n;
  }
  std::string to_string() const {
    if (factors.empty()) return "1";
    std::string s;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (i) s += " x ";
      s += factors[i] == 0 ? "Z" : "Z_" + std::to_string(factors[i]);
    }
    return s;
  }
};

namespace detail {

inline i64 checked_mul(i64 a, i64 b) {
  i64 r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow in Smith normal form");
  return r;
}
inline i64 checked_sub(i64 a, i64 b) {
  i64 r;
  if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("integer overflow in Smith normal form");
  return r;
}

using SparseRow = std::map<int, i64>;

// Diagonal of the Smith normal form of a dense integer matrix (absolute values, zeros dropped).
inline std::vector<i64> dense_smith_diagonal(std::vector<std::vector<i64>> a) {
  std::vector<i64> diag;
  const std::size_t m = a.size(), n = m ? a[0].size() : 0;
  std::size_t t = 0;
  while (t < m && t < n) {
    // smallest nonzero entry in the trailing block
    std::size_t pi = m, pj = n;
    i64 best = 0;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j)
        if (a[i][j] != 0 && (best == 0 || std::llabs(a[i][j]) < best)) {
          best = std::llabs(a[i][j]);
          pi = i;
          pj = j;
        }
    if (best == 0) break;
    std::swap(a[t], a[pi]);
    for (auto& row : a) std::swap(row[t], row[pj]);
    while (true) {
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (a[i][t] == 0) continue;
        const i64 q = a[i][t] / a[t][t];
        for (std::size_t j = t; j < n; ++j) a[i][j] = checked_sub(a[i][j], checked_mul(q, a[t][j]));
        if (a[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (a[t][j] == 0) continue;
        const i64 q = a[t][j] / a[t][t];
        for (std::size_t i = t; i < m; ++i) a[i][j] = checked_sub(a[i][j], checked_mul(q, a[i][t]));
        if (a[t][j] != 0) clean = false;
      }
      if (!clean) {
        // move the smallest entry of row/column t to the pivot
        std::size_t bi = t, bj = t;
        i64 b = std::llabs(a[t][t]);
        for (std::size_t i = t + 1; i < m; ++i)
          if (a[i][t] != 0 && std::llabs(a[i][t]) < b) b = std::llabs(a[i][t]), bi = i, bj = t;
        for (std::size_t j = t + 1; j < n; ++j)
          if (a[t][j] != 0 && std::llabs(a[t][j]) < b) b = std::llabs(a[t][j]), bi = t, bj = j;
        std::swap(a[t], a[bi]);
        for (auto& row : a) std::swap(row[t], row[bj]);
        continue;
      }
      // pivot must divide the trailing block
      bool divides = true;
      for (std::size_t i = t + 1; i < m && divides; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (a[i][j] % a[t][t] != 0) {
            for (std::size_t k = t; k < n; ++k) a[t][k] += a[i][k];
            divides = false;
            break;
          }
      if (divides) break;
    }
    diag.push_back(std::llabs(a[t][t]));
    ++t;
  }
  return diag;
}

}  // namespace detail

// Invariant factors of Z^ncols / (row span of the relation matrix).
inline AbelianInvariants abelian_invariants(int ncols, std::vector<detail::SparseRow> rows) {
  // Sparse phase: eliminate columns that carry a unit entry.
  std::vector<std::set<int>> col_rows(ncols);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (auto& [c, v] : rows[r]) col_rows[c].insert(static_cast<int>(r));
  std::vector<char> row_alive(rows.size(), 1), col_alive(ncols, 1);
  int rank = 0;
  while (true) {
    int best_r = -1, best_c = -1;
    std::size_t best_cost = SIZE_MAX;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (!row_alive[r] || rows[r].empty()) continue;
      for (auto& [c, v] : rows[r]) {
        if (v != 1 && v != -1) continue;
        const std::size_t cost = (rows[r].size() - 1) * (col_rows[c].size() - 1);
        if (cost < best_cost) {
          best_cost = cost;
          best_r = static_cast<int>(r);
          best_c = c;
        }
      }
      if (best_cost == 0) break;
    }
    if (best_r < 0) break;
    const detail::SparseRow piv = rows[best_r];
    const i64 pv = piv.at(best_c);
    const std::vector<int> targets(col_rows[best_c].begin(), col_rows[best_c].end());
    for (int r : targets) {
      if (r == best_r) continue;
      const i64 q = rows[r].at(best_c) * pv;  // pv = +-1 so pv^{-1} = pv
      for (auto& [c, v] : piv) {
        i64& x = rows[r][c];
        x = detail::checked_sub(x, detail::checked_mul(q, v));
        if (x == 0) {
          rows[r].erase(c);
          col_rows[c].erase(r);
        } else {
          col_rows[c].insert(r);
        }
      }
    }
    for (auto& [c, v] : piv) col_rows[c].erase(best_r);
    row_alive[best_r] = 0;
    rows[best_r].clear();
    col_alive[best_c] = 0;
    ++rank;
  }
  // Dense phase on what remains.
  std::vector<int> cols;
  std::vector<int> colpos(ncols, -1);
  for (int c = 0; c < ncols; ++c)
    if (col_alive[c]) {
      colpos[c] = static_cast<int>(cols.size());
      cols.push_back(c);
    }
  std::vector<std::vector<i64>> dense;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (!row_alive[r] || rows[r].empty()) continue;
    std::vector<i64> row(cols.size(), 0);
    for (auto& [c, v] : rows[r]) row[colpos[c]] = v;
    dense.push_back(std::move(row));
  }
  const std::vector<i64> diag = detail::dense_smith_diagonal(std::move(dense));
  AbelianInvariants inv;
  for (i64 x : diag)
    if (x != 1) inv.factors.push_back(x);
  std::sort(inv.factors.begin(), inv.factors.end());
  const int free = static_cast<int>(cols.size()) - static_cast<int>(diag.size());
  for (int k = 0; k < free; ++k) inv.factors.push_back(0);
  return inv;
}

inline std::vector<detail::SparseRow> relation_rows(const Presentation& p) {
  std::vector<detail::SparseRow> rows;
  for (const auto& r : p.relators) {
    detail::SparseRow row;
    for (const auto& l : r) {
      row[l.gen] += l.exp;
      if (row[l.gen] == 0) row.erase(l.gen);
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  return rows;
}

inline AbelianInvariants abelianization(const Presentation& p) {
  return abelian_invariants(p.num_gens(), relation_rows(p));
}

// Rank of the largest elementary abelian p-quotient.
inline int elementarization(const Presentation& p, i64 prime) {
  const AbelianInvariants a = abelianization(p);
  int rank = 0;
  for (i64 f : a.factors)
    if (f == 0 || f % prime == 0) ++rank;
  return rank;
}

// Order of the image of a word in the abelianization (0 when infinite), via the invariants of
// the quotient by that word: |A| / |A/<w>| when A is finite.
inline i64 abelian_image_order(const Presentation& p, const Word& w) {
  const AbelianInvariants a = abelianization(p);
  Presentation q = p;
  q.add_relator(w);
  const AbelianInvariants b = abelianization(q);
  if (!a.is_finite()) {
    if (b.free_rank() < a.free_rank()) return 0;
    // image lies in the torsion part; compare torsion orders
    i64 ta = 1, tb = 1;
    for (i64 f : a.factors)
      if (f) ta *= f;
    for (i64 f : b.factors)
      if (f) tb *= f;
    return ta / tb;
  }
  return a.order() / b.order();
}

}  // namespace lcs
