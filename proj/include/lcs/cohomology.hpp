#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcs/abelian.hpp"
#include "lcs/cochain.hpp"
#include "lcs/linear_system.hpp"
#include "lcs/simplicial.hpp"
#include "lcs/zmod.hpp"

namespace lcs {

// Matrix of d: C^n -> C^{n+1}, rows indexed by (n+1)-simplices and columns by n-simplices.
inline ZModMatrix coboundary_matrix(const TruncatedSSet& x, int n, i64 d) {
  if (n + 1 > x.cap()) throw std::invalid_argument("coboundary matrix needs degree " + std::to_string(n + 1));
  ZModMatrix m(x.size(n + 1), x.size(n), d);
  for (std::size_t s = 0; s < x.size(n + 1); ++s)
    for (int i = 0; i <= n + 1; ++i) {
      const int f = x.face(n + 1, i, static_cast<int>(s));
      m.set(s, f, m.at(s, f) + (i % 2 ? -1 : 1));
    }
  return m;
}

// A cochain u of one degree lower with g2 - g1 = du, if one exists.
inline std::optional<Cochain> cohomologous(const Cochain& g1, const Cochain& g2) {
  if (g1.host != g2.host || g1.degree != g2.degree || g1.d != g2.d)
    throw std::invalid_argument("cochains live on different hosts, degrees or moduli");
  if (g1.degree == 0) throw std::invalid_argument("cohomologous needs degree at least 1");
  ZVec diff(g1.values.size());
  for (std::size_t s = 0; s < diff.size(); ++s) diff[s] = mod_reduce(g2.values[s] - g1.values[s], g1.d);
  const auto r = solve(coboundary_matrix(*g1.host, g1.degree - 1, g1.d), diff);
  if (!r) return std::nullopt;
  Cochain u = Cochain::zero(g1.host, g1.degree - 1, g1.d);
  u.values = r->particular;
  return u;
}

inline Cochain operator+(const Cochain& a, const Cochain& b) {
  if (a.host != b.host || a.degree != b.degree || a.d != b.d) throw std::invalid_argument("incompatible cochains");
  Cochain c = a;
  for (std::size_t s = 0; s < c.values.size(); ++s) c.set(static_cast<int>(s), a.values[s] + b.values[s]);
  return c;
}

// f^* g on the source of f.
inline Cochain pullback(const Cochain& g, const SMap& f) {
  if (f.tgt != g.host) throw std::invalid_argument("pullback along a map into a different host");
  Cochain c = Cochain::zero(f.src, g.degree, g.d);
  for (std::size_t s = 0; s < c.values.size(); ++s) c.values[s] = g(f(g.degree, static_cast<int>(s)));
  return c;
}

inline Cochain scale(const Cochain& a, i64 m) {
  Cochain c = a;
  for (auto& v : c.values) v = mod_reduce(v * mod_reduce(m, a.d), a.d);
  return c;
}

// A cohomologous cocycle vanishing on degenerate simplices, found by solving for the correcting 1-cochain.
inline Cochain normalize_cocycle(const Cochain& g) {
  if (is_normalized(g)) return g;
  if (g.degree == 0) throw std::invalid_argument("a 0-cochain on a degenerate 0-simplex cannot exist");
  const TruncatedSSet& x = *g.host;
  const ZModMatrix full = coboundary_matrix(x, g.degree - 1, g.d);
  std::vector<ZVec> rows;
  ZVec rhs;
  for (std::size_t s = 0; s < x.size(g.degree); ++s)
    if (x.is_degenerate(g.degree, static_cast<int>(s))) {
      rows.push_back(full.row(s));
      rhs.push_back(mod_reduce(-g.values[s], g.d));
    }
  const auto r = solve(ZModMatrix(g.d, rows), rhs);
  if (!r) throw std::invalid_argument("no normalized representative within the truncation");
  Cochain u = Cochain::zero(g.host, g.degree - 1, g.d);
  u.values = r->particular;
  return g + coboundary(u);
}

// Z_d-module structure of H^n = ker(d_n) / im(d_{n-1}) on the truncation (n + 1 <= cap).
inline AbelianInvariants cohomology_group(const TruncatedSSet& x, int n, i64 d) {
  const auto ker = solve(coboundary_matrix(x, n, d), ZVec(x.size(n + 1), 0));
  const HowellBasis& k = ker->kernel;
  const int r = static_cast<int>(k.pivots.size());
  std::vector<detail::SparseRow> rel;
  auto add_relation = [&](const ZVec& v) {
    ZVec coeffs;
    const ZVec rest = reduce_by_basis(k, v, &coeffs);
    if (!detail::is_zero(rest)) throw std::logic_error("cocycle not in the kernel span");
    detail::SparseRow row;
    for (int i = 0; i < r; ++i)
      if (coeffs[i] % d) row[i] = mod_reduce(coeffs[i], d);
    return row;
  };
  for (int i = 0; i < r; ++i) {
    detail::SparseRow row{{i, d}};
    rel.push_back(row);
    const i64 p = k.basis.at(i, k.pivots[i]);
    if (p == 1) continue;
    ZVec v = k.basis.row(i);
    for (auto& e : v) e = mod_reduce(e * (d / p), d);
    detail::SparseRow dep = add_relation(v);
    dep[i] = dep.count(i) ? dep[i] - d / p : -(d / p);
    rel.push_back(dep);
  }
  if (n > 0) {
    const ZModMatrix prev = coboundary_matrix(x, n - 1, d);
    for (std::size_t j = 0; j < prev.cols(); ++j) rel.push_back(add_relation(prev.col(j)));
  }
  return abelian_invariants(r, std::move(rel));
}

// b~ on N(Z_d,Sigma)_1 (a b_i on a A_i, zero elsewhere) followed by d, pushed to the reduced quotient.
inline Cochain gamma_b(const SystemSpaces& sp) {
  const LinearSystem& s = sp.system;
  const i64 d = s.d();
  const TruncatedSSet& n = *sp.nzd_sigma;
  if (n.cap() < 2) throw std::invalid_argument("gamma_b needs degree 2");
  Cochain bt = Cochain::zero(sp.nzd_sigma, 1, d);
  std::vector<char> assigned(n.size(1), 0);
  const TruncatedSSet& w = *sp.wedge.wedge;
  for (std::size_t t = 0; t < w.size(1); ++t) {
    const Key& k = w.key(1, static_cast<int>(t));
    const i64 v = k[0] == 0 ? 0 : mod_reduce(k[1] * s.b[k[0] - 1], d);
    const int img = sp.wedge.alpha(1, static_cast<int>(t));
    if (assigned[img] && bt(img) != v) throw std::invalid_argument("b~ is not well defined on " + n.label(1, img));
    bt.set(img, v);
    assigned[img] = 1;
  }
  const Cochain db = coboundary(bt);
  const SMap& proj = sp.nbar.proj;
  Cochain g = Cochain::zero(sp.nbar.space, 2, d);
  std::vector<char> seen(g.values.size(), 0);
  for (std::size_t t = 0; t < n.size(2); ++t) {
    const int q = proj(2, static_cast<int>(t));
    if (q == 0 && db(static_cast<int>(t)) != 0)
      throw std::invalid_argument("d b~ is nonzero on the collapsed simplex " + n.label(2, static_cast<int>(t)));
    if (seen[q] && g(q) != db(static_cast<int>(t))) throw std::logic_error("gamma_b is not well defined on the quotient");
    g.set(q, db(static_cast<int>(t)));
    seen[q] = 1;
  }
  return g;
}

struct NbarCocycle {
  SSetPtr nbar;
  Cochain gamma;
};

// gamma_{phi,d} on Nbar(Z_d,G) for the section stored in the extension data.
inline NbarCocycle gamma_phi_d(const CentralExtensionData& ext, int cap = 3) {
  SSetPtr nbar = nbar_group(ext, ext.G.d(), cap);
  return {nbar, section_cocycle(nbar, ext)};
}

// (A_X, b_gamma): A_{sigma,x} = sum over d_i sigma = x of (-1)^i and b_sigma = -gamma(sigma).
inline LinearSystem extract_linear_system(const Cochain& gamma, bool nondegenerate_only = false) {
  if (gamma.degree != 2) throw std::invalid_argument("the twisting cochain must have degree 2");
  const TruncatedSSet& x = *gamma.host;
  const i64 d = gamma.d;
  std::vector<int> rows, cols;
  for (std::size_t s = 0; s < x.size(2); ++s)
    if (!nondegenerate_only || !x.is_degenerate(2, static_cast<int>(s))) rows.push_back(static_cast<int>(s));
  std::vector<int> col_of(x.size(1), -1);
  for (std::size_t s = 0; s < x.size(1); ++s)
    if (!nondegenerate_only || !x.is_degenerate(1, static_cast<int>(s))) {
      col_of[s] = static_cast<int>(cols.size());
      cols.push_back(static_cast<int>(s));
    }
  ZModMatrix A(rows.size(), cols.size(), d);
  ZVec b(rows.size());
  std::vector<std::string> rl, cl;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (int i = 0; i <= 2; ++i) {
      const int c = col_of[x.face(2, i, rows[r])];
      if (c >= 0) A.set(r, c, A.at(r, c) + (i == 1 ? -1 : 1));
    }
    b[r] = mod_reduce(-gamma(rows[r]), d);
    rl.push_back(x.label(2, rows[r]));
  }
  for (int c : cols) cl.push_back(x.label(1, c));
  return LinearSystem(std::move(A), std::move(b), std::move(rl), std::move(cl));
}

// Cochain files: one `label value` per line; unlisted simplices are zero.
inline Cochain read_cochain(std::istream& in, SSetPtr host, int degree, i64 d) {
  Cochain c = Cochain::zero(host, degree, d);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string label;
    i64 v = 0;
    if (!(ls >> label)) continue;
    if (!(ls >> v)) throw std::invalid_argument("cochain line " + std::to_string(lineno) + ": expected 'label value'");
    const auto s = host->find_label(degree, label);
    if (!s) throw std::invalid_argument("cochain line " + std::to_string(lineno) + ": unknown simplex '" + label + "'");
    c.set(*s, v);
  }
  return c;
}

inline void write_cochain(std::ostream& out, const Cochain& c) {
  for (std::size_t s = 0; s < c.values.size(); ++s)
    if (c.values[s]) out << c.host->label(c.degree, static_cast<int>(s)) << ' ' << c.values[s] << '\n';
}

// The K33 torus with gamma equal to b_i on the triangle of row i.
inline Cochain torus_cocycle(const TorusFixture& t, const ZVec& b, i64 d = 2) {
  Cochain g = Cochain::zero(t.X, 2, d);
  for (std::size_t r = 0; r < t.triangles.size(); ++r) g.set(t.X->index_of_label(2, t.triangles[r]), b.at(r));
  return g;
}

}  // namespace lcs
