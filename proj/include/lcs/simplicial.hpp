#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcs/cochain.hpp"
#include "lcs/group.hpp"
#include "lcs/homs.hpp"
#include "lcs/linear_system.hpp"
#include "lcs/sset.hpp"

namespace lcs {

// ---------------------------------------------------------------- simplicial complexes

struct SimplicialComplex {
  std::vector<std::string> vertices;
  std::vector<std::vector<int>> facets;  // sorted, pairwise non-contained
  std::vector<std::uint64_t> facet_masks;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  bool contains_mask(std::uint64_t m) const {
    if (m == 0) return true;
    for (auto f : facet_masks)
      if ((m & ~f) == 0) return true;
    return false;
  }
  bool contains(const std::vector<int>& s) const {
    std::uint64_t m = 0;
    for (int v : s) m |= std::uint64_t{1} << v;
    return contains_mask(m);
  }
};

// Keeps the maximal sets; vertices lying in no set become singleton facets.
inline SimplicialComplex make_complex(std::vector<std::string> vertices, const std::vector<std::vector<int>>& sets) {
  const int n = static_cast<int>(vertices.size());
  if (n > 64) throw std::invalid_argument("simplicial complexes are limited to 64 vertices");
  std::vector<std::uint64_t> masks;
  for (const auto& s : sets) {
    std::uint64_t m = 0;
    for (int v : s) {
      if (v < 0 || v >= n) throw std::invalid_argument("facet vertex out of range");
      m |= std::uint64_t{1} << v;
    }
    if (m) masks.push_back(m);
  }
  std::uint64_t covered = 0;
  for (auto m : masks) covered |= m;
  for (int v = 0; v < n; ++v)
    if (!(covered >> v & 1)) masks.push_back(std::uint64_t{1} << v);
  std::sort(masks.begin(), masks.end());
  masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
  SimplicialComplex c;
  c.vertices = std::move(vertices);
  for (auto m : masks) {
    bool maximal = true;
    for (auto o : masks)
      if (o != m && (m & ~o) == 0) maximal = false;
    if (!maximal) continue;
    c.facet_masks.push_back(m);
    std::vector<int> f;
    for (int v = 0; v < n; ++v)
      if (m >> v & 1) f.push_back(v);
    c.facets.push_back(std::move(f));
  }
  return c;
}

inline SimplicialComplex complex_of_system(const LinearSystem& s) {
  require_row_conditions(s);
  std::vector<std::vector<int>> sets;
  for (std::size_t i = 0; i < s.rows(); ++i) {
    std::vector<int> f;
    for (auto j : s.support(i)) f.push_back(static_cast<int>(j));
    sets.push_back(std::move(f));
  }
  return make_complex(s.col_labels, sets);
}

// Functions Sigma_0 -> Z_d encoded as base-d integers (vertex 0 is the lowest digit).
struct VertexFunctions {
  int nv = 0;
  i64 d = 2;

  i64 encode(const ZVec& f) const {
    i64 c = 0;
    for (int v = nv - 1; v >= 0; --v) c = c * d + mod_reduce(f[v], d);
    return c;
  }
  ZVec decode(i64 c) const {
    ZVec f(nv);
    for (int v = 0; v < nv; ++v) {
      f[v] = c % d;
      c /= d;
    }
    return f;
  }
  std::uint64_t support(i64 c) const {
    std::uint64_t m = 0;
    for (int v = 0; v < nv; ++v, c /= d)
      if (c % d) m |= std::uint64_t{1} << v;
    return m;
  }
  i64 add(i64 a, i64 b) const {
    ZVec x = decode(a), y = decode(b);
    for (int v = 0; v < nv; ++v) x[v] = (x[v] + y[v]) % d;
    return encode(x);
  }
  std::string label(i64 c) const {
    const ZVec f = decode(c);
    std::string s;
    for (int v = 0; v < nv; ++v) {
      if (d > 10 && v) s += '.';
      s += std::to_string(f[v]);
    }
    return s;
  }
};

// ---------------------------------------------------------------- nerve-like models

namespace detail {

// n-simplices are tuples of letters; inner faces multiply neighbours, degeneracies insert the unit.
struct TupleModel {
  std::vector<int> letters;
  int unit = 0;
  std::function<int(int, int)> mul;
  std::function<bool(const Key&, int)> extend_ok;  // may be empty: every tuple allowed
  std::function<std::string(int)> name;

  std::vector<Key> simplices(int n) const {
    std::vector<Key> out;
    Key cur;
    std::function<void()> rec = [&]() {
      if (static_cast<int>(cur.size()) == n) {
        out.push_back(cur);
        return;
      }
      for (int x : letters) {
        if (extend_ok && !extend_ok(cur, x)) continue;
        cur.push_back(x);
        rec();
        cur.pop_back();
      }
    };
    rec();
    return out;
  }
  Key face(int n, int i, const Key& k) const {
    Key r;
    if (i == 0) {
      r.assign(k.begin() + 1, k.end());
    } else if (i == n) {
      r.assign(k.begin(), k.end() - 1);
    } else {
      r.assign(k.begin(), k.begin() + (i - 1));
      r.push_back(mul(k[i - 1], k[i]));
      r.insert(r.end(), k.begin() + i + 1, k.end());
    }
    return r;
  }
  Key degen(int, int j, const Key& k) const {
    Key r = k;
    r.insert(r.begin() + j, unit);
    return r;
  }
  std::string label(int n, const Key& k) const {
    if (n == 0) return "*";
    if (n == 1) return name(k[0]);
    std::string s = "(";
    for (int i = 0; i < n; ++i) s += (i ? "," : "") + name(k[i]);
    return s + ")";
  }
};

}  // namespace detail

inline SSetPtr nerve(const FinGroup& g, int cap, std::string name = "NG") {
  detail::TupleModel m;
  for (int a = 0; a < g.order(); ++a) m.letters.push_back(a);
  m.unit = g.identity();
  m.mul = [&g](int a, int b) { return g.mul(a, b); };
  m.name = [&g](int a) { return g.name(a); };
  return build_sset(m, cap, std::move(name));
}

inline SSetPtr nerve_zd(i64 d, int cap) {
  check_modulus(d);
  detail::TupleModel m;
  for (int a = 0; a < d; ++a) m.letters.push_back(a);
  m.mul = [d](int a, int b) { return static_cast<int>((a + b) % d); };
  m.name = [](int a) { return std::to_string(a); };
  return build_sset(m, cap, "NZ_" + std::to_string(d));
}

// Tuples of pairwise commuting d-torsion elements.
inline SSetPtr comm_nerve(const FinGroupJ& g, i64 d, int cap) {
  detail::TupleModel m;
  m.letters = g.FinGroup::torsion(d);
  m.unit = g.identity();
  m.mul = [&g](int a, int b) { return g.mul(a, b); };
  m.extend_ok = [&g](const Key& k, int x) {
    for (int y : k)
      if (!g.commute(x, y)) return false;
    return true;
  };
  m.name = [&g](int a) { return g.name(a); };
  return build_sset(m, cap, "N(Z_" + std::to_string(d) + "," + g.label() + ")");
}

// Tuples of functions Sigma_0 -> Z_d whose supports jointly lie in a simplex.
inline SSetPtr nzd_sigma(const SimplicialComplex& sigma, i64 d, int cap) {
  check_modulus(d);
  const VertexFunctions vf{sigma.num_vertices(), d};
  std::set<i64> codes{0};
  for (const auto& f : sigma.facets) {
    const int k = static_cast<int>(f.size());
    std::vector<i64> vals(k, 0);
    while (true) {
      ZVec full(vf.nv, 0);
      for (int t = 0; t < k; ++t) full[f[t]] = vals[t];
      codes.insert(vf.encode(full));
      int t = 0;
      while (t < k && ++vals[t] == d) vals[t++] = 0;
      if (t == k) break;
    }
  }
  if (codes.size() > 2000000) throw std::invalid_argument("too many functions on the complex");
  detail::TupleModel m;
  for (i64 c : codes) m.letters.push_back(static_cast<int>(c));
  m.unit = 0;
  m.mul = [vf](int a, int b) { return static_cast<int>(vf.add(a, b)); };
  m.extend_ok = [vf, &sigma](const Key& k, int x) {
    std::uint64_t u = vf.support(x);
    for (int y : k) u |= vf.support(y);
    return sigma.contains_mask(u);
  };
  m.name = [vf](int a) { return vf.label(a); };
  return build_sset(m, cap, "N(Z_" + std::to_string(d) + ",Sigma)");
}

// Orbit simplices (gbar_1, ..., gbar_n) of N(Z_d,G) under the J action.
inline SSetPtr nbar_group(const CentralExtensionData& ext, i64 d, int cap) {
  const FinGroupJ& g = ext.G;
  const FinGroup& q = ext.Gbar;
  detail::TupleModel m;
  for (int a = 0; a < q.order(); ++a)
    if (g.is_torsion(ext.section[a], d)) m.letters.push_back(a);
  m.unit = q.identity();
  m.mul = [&q](int a, int b) { return q.mul(a, b); };
  m.extend_ok = [&ext](const Key& k, int x) {
    for (int y : k)
      if (!ext.G.commute(ext.section[x], ext.section[y])) return false;
    return true;
  };
  m.name = [&q](int a) { return q.name(a); };
  return build_sset(m, cap, "Nbar(Z_" + std::to_string(d) + "," + g.label() + ")");
}

// E(Z_d,G): g_0 followed by a simplex of N(Z_d,G); d_0 multiplies g_0 g_1.
inline SSetPtr e_space(const FinGroupJ& g, i64 d, int cap) {
  struct Model {
    const FinGroupJ& g;
    i64 d;
    std::vector<int> tors;
    std::vector<Key> simplices(int n) const {
      std::vector<Key> tails;
      Key cur;
      std::function<void()> rec = [&]() {
        if (static_cast<int>(cur.size()) == n) {
          tails.push_back(cur);
          return;
        }
        for (int x : tors) {
          bool ok = true;
          for (int y : cur) ok = ok && g.commute(x, y);
          if (!ok) continue;
          cur.push_back(x);
          rec();
          cur.pop_back();
        }
      };
      rec();
      std::vector<Key> out;
      for (int g0 = 0; g0 < g.order(); ++g0)
        for (const auto& t : tails) {
          Key k{g0};
          k.insert(k.end(), t.begin(), t.end());
          out.push_back(std::move(k));
        }
      return out;
    }
    Key face(int n, int i, const Key& k) const {
      Key r;
      if (i == n) {
        r.assign(k.begin(), k.end() - 1);
      } else {
        r.assign(k.begin(), k.begin() + i);
        r.push_back(g.mul(k[i], k[i + 1]));
        r.insert(r.end(), k.begin() + i + 2, k.end());
      }
      return r;
    }
    Key degen(int, int j, const Key& k) const {
      Key r = k;
      r.insert(r.begin() + j + 1, g.identity());
      return r;
    }
    std::string label(int n, const Key& k) const {
      std::string s = g.name(k[0]) + "|";
      if (n == 1) return s + g.name(k[1]);
      s += "(";
      for (int i = 1; i <= n; ++i) s += (i > 1 ? "," : "") + g.name(k[i]);
      return s + ")";
    }
  };
  return build_sset(Model{g, d, g.FinGroup::torsion(d)}, cap, "E(Z_" + std::to_string(d) + "," + g.label() + ")");
}

// ---------------------------------------------------------------- wedges and quotients

// Wedge of r copies of NZ_d. Keys are {factor, a_1..a_n}; factor 0 marks the basepoint simplices.
inline SSetPtr wedge_zd(int r, i64 d, int cap) {
  struct Model {
    int r;
    i64 d;
    std::vector<Key> simplices(int n) const {
      std::vector<Key> out{Key(n + 1, 0)};
      for (int f = 1; f <= r; ++f) {
        std::vector<int> a(n, 0);
        while (true) {
          int k = 0;
          while (k < n && ++a[k] == d) a[k++] = 0;
          if (k == n) break;
          Key key{f};
          key.insert(key.end(), a.rbegin(), a.rend());
          out.push_back(std::move(key));
        }
      }
      return out;
    }
    Key norm(Key k) const {
      bool zero = true;
      for (std::size_t i = 1; i < k.size(); ++i) zero = zero && k[i] == 0;
      if (zero) k[0] = 0;
      return k;
    }
    Key face(int n, int i, const Key& k) const {
      Key r{k[0]};
      if (i == 0) {
        r.insert(r.end(), k.begin() + 2, k.end());
      } else if (i == n) {
        r.insert(r.end(), k.begin() + 1, k.end() - 1);
      } else {
        r.insert(r.end(), k.begin() + 1, k.begin() + i);
        r.push_back(static_cast<int>((k[i] + k[i + 1]) % d));
        r.insert(r.end(), k.begin() + i + 2, k.end());
      }
      return norm(r);
    }
    Key degen(int, int j, const Key& k) const {
      Key r = k;
      r.insert(r.begin() + 1 + j, 0);
      return r;
    }
    std::string label(int n, const Key& k) const {
      if (n == 0) return "*";
      std::string t;
      for (int i = 1; i <= n; ++i) t += (i > 1 ? "," : "") + std::to_string(k[i]);
      if (n > 1) t = "(" + t + ")";
      return k[0] == 0 ? t : std::to_string(k[0]) + ":" + t;
    }
  };
  return build_sset(Model{r, d}, cap, "wedge of " + std::to_string(r) + " NZ_" + std::to_string(d));
}

struct WedgeMaps {
  SSetPtr wedge;
  SMap alpha;  // factor i: a -> a A_i into N(Z_d, Sigma_A)
  SMap beta;   // factor i: a -> a b_i into NZ_d
};

inline WedgeMaps wedge_nzd(const LinearSystem& s, SSetPtr sigma_space, SSetPtr nzd) {
  require_row_conditions(s);
  const i64 d = s.d();
  const int cap = std::min(sigma_space->cap(), nzd->cap());
  SSetPtr w = wedge_zd(static_cast<int>(s.rows()), d, cap);
  const VertexFunctions vf{static_cast<int>(s.cols()), d};
  std::vector<i64> row_code(s.rows());
  for (std::size_t i = 0; i < s.rows(); ++i) row_code[i] = vf.encode(s.A.row(i));
  auto scaled = [&](int f, int a) {
    ZVec x = s.A.row(f - 1);
    for (auto& v : x) v = mod_reduce(v * a, d);
    return static_cast<int>(vf.encode(x));
  };
  SMap alpha = smap_from_keys(w, sigma_space, cap, [&](int, const Key& k) {
    Key r;
    for (std::size_t i = 1; i < k.size(); ++i) r.push_back(k[0] == 0 ? 0 : scaled(k[0], k[i]));
    return r;
  });
  SMap beta = smap_from_keys(w, nzd, cap, [&](int, const Key& k) {
    Key r;
    for (std::size_t i = 1; i < k.size(); ++i)
      r.push_back(k[0] == 0 ? 0 : static_cast<int>(mod_reduce(k[i] * s.b[k[0] - 1], d)));
    return r;
  });
  std::set<int> seen;
  for (int t : alpha.f[1])
    if (!seen.insert(t).second) throw std::invalid_argument("the wedge map into N(Z_d,Sigma) is not injective");
  return {w, std::move(alpha), std::move(beta)};
}

struct QuotientSSet {
  SSetPtr space;
  SMap proj;
};

// Collapses the simplicial subset Z (given degreewise by membership flags) to the basepoint.
inline QuotientSSet quotient_by_subset(SSetPtr x, const std::vector<std::vector<char>>& inZ, std::string name) {
  const int cap = x->cap();
  if (static_cast<int>(inZ.size()) != cap + 1) throw std::invalid_argument("subset flags must cover every degree");
  for (int n = 0; n <= cap; ++n) {
    if (inZ[n].size() != x->size(n)) throw std::invalid_argument("subset flags have the wrong size");
    for (std::size_t s = 0; s < x->size(n); ++s) {
      if (!inZ[n][s]) continue;
      for (int i = 0; n > 0 && i <= n; ++i)
        if (!inZ[n - 1][x->face(n, i, static_cast<int>(s))])
          throw std::invalid_argument("subset is not closed under faces at " + x->label(n, static_cast<int>(s)));
      for (int j = 0; n < cap && j <= n; ++j)
        if (!inZ[n + 1][x->degen(n, j, static_cast<int>(s))])
          throw std::invalid_argument("subset is not closed under degeneracies at " + x->label(n, static_cast<int>(s)));
    }
  }
  auto q = std::make_shared<TruncatedSSet>(cap, std::move(name));
  SMap proj{x, nullptr, std::vector<std::vector<int>>(cap + 1)};
  for (int n = 0; n <= cap; ++n) {
    int first = -1;
    for (std::size_t s = 0; s < x->size(n) && first < 0; ++s)
      if (inZ[n][s]) first = static_cast<int>(s);
    if (first < 0) throw std::invalid_argument("subset is empty in degree " + std::to_string(n));
    q->add_simplex(n, Key{-1}, x->label(n, first));
    proj.f[n].assign(x->size(n), 0);
    for (std::size_t s = 0; s < x->size(n); ++s)
      if (!inZ[n][s]) proj.f[n][s] = q->add_simplex(n, Key{static_cast<int>(s)}, x->label(n, static_cast<int>(s)));
  }
  for (int n = 0; n <= cap; ++n)
    for (std::size_t t = 0; t < q->size(n); ++t) {
      const int orig = q->key(n, static_cast<int>(t))[0];
      for (int i = 0; n > 0 && i <= n; ++i) q->set_face(n, i, static_cast<int>(t), orig < 0 ? 0 : proj.f[n - 1][x->face(n, i, orig)]);
      for (int j = 0; n < cap && j <= n; ++j) q->set_degen(n, j, static_cast<int>(t), orig < 0 ? 0 : proj.f[n + 1][x->degen(n, j, orig)]);
    }
  q->finalize();
  proj.tgt = q;
  return {q, std::move(proj)};
}

// Everything needed to pass from a linear system to the quotient N(Z_d,Sigma)/(wedge image).
struct SystemSpaces {
  LinearSystem system;
  SimplicialComplex sigma;
  SSetPtr nzd_sigma;
  SSetPtr nzd;
  WedgeMaps wedge;
  QuotientSSet nbar;
};

inline SystemSpaces system_spaces(const LinearSystem& s, int cap = 3) {
  SystemSpaces out{s, complex_of_system(s), nullptr, nullptr, {}, {}};
  out.nzd_sigma = nzd_sigma(out.sigma, s.d(), cap);
  out.nzd = nerve_zd(s.d(), cap);
  out.wedge = wedge_nzd(s, out.nzd_sigma, out.nzd);
  std::vector<std::vector<char>> inZ(cap + 1);
  for (int n = 0; n <= cap; ++n) {
    inZ[n].assign(out.nzd_sigma->size(n), 0);
    for (int t : out.wedge.alpha.f[n]) inZ[n][t] = 1;
  }
  out.nbar = quotient_by_subset(out.nzd_sigma, inZ, "Nbar(Z_" + std::to_string(s.d()) + ",Sigma)");
  return out;
}

// ---------------------------------------------------------------- twisted products

// X_gamma up to degree 2: simplices (a_1..a_n; x) with d_0(a_1,a_2;s) = (gamma(s)+a_2; d_0 s).
inline SSetPtr twisted_product(const Cochain& gamma, int cap = 2) {
  if (cap > 2) throw std::invalid_argument("twisted products are built up to degree 2");
  if (gamma.degree != 2) throw std::invalid_argument("the twisting cochain must have degree 2");
  if (!is_normalized(gamma)) throw std::invalid_argument("the twisting cochain is not normalized");
  if (!is_cocycle(gamma)) throw std::invalid_argument("the twisting cochain is not a cocycle");
  struct Model {
    const Cochain& g;
    std::vector<Key> simplices(int n) const {
      std::vector<Key> out;
      const TruncatedSSet& x = *g.host;
      for (std::size_t s = 0; s < x.size(n); ++s) {
        std::vector<int> a(n, 0);
        while (true) {
          Key k(a.begin(), a.end());
          k.push_back(static_cast<int>(s));
          out.push_back(std::move(k));
          int t = n - 1;
          while (t >= 0 && ++a[t] == g.d) a[t--] = 0;
          if (t < 0) break;
        }
      }
      return out;
    }
    Key face(int n, int i, const Key& k) const {
      const TruncatedSSet& x = *g.host;
      const int s = k.back();
      if (n == 1) return {x.face(1, i, s)};
      const int d = static_cast<int>(g.d);
      if (i == 0) return {static_cast<int>((g(s) + k[1]) % d), x.face(2, 0, s)};
      if (i == 1) return {(k[0] + k[1]) % d, x.face(2, 1, s)};
      return {k[0], x.face(2, 2, s)};
    }
    Key degen(int n, int j, const Key& k) const {
      const TruncatedSSet& x = *g.host;
      const int s = k.back();
      if (n == 0) return {0, x.degen(0, 0, s)};
      if (j == 0) return {0, k[0], x.degen(1, 0, s)};
      return {k[0], 0, x.degen(1, 1, s)};
    }
    std::string label(int n, const Key& k) const {
      const std::string& xl = g.host->label(n, k.back());
      if (n == 0) return xl;
      std::string s = "(";
      for (int i = 0; i < n; ++i) s += (i ? "," : "") + std::to_string(k[i]);
      return s + ";" + xl + ")";
    }
  };
  return build_sset(Model{gamma}, cap, "X_gamma");
}

// ---------------------------------------------------------------- maps out of nerves

// gamma_{phi,d} on Nbar(Z_d,G): (gbar_1, gbar_2) -> exponent of phi(gbar_1) phi(gbar_2) phi(gbar_1 gbar_2)^{-1}.
inline Cochain section_cocycle(SSetPtr nbar, const CentralExtensionData& ext) {
  const GroupCocycle c = cocycle_from_section(ext);
  Cochain g = Cochain::zero(nbar, 2, ext.G.d());
  for (std::size_t s = 0; s < nbar->size(2); ++s) {
    const Key& k = nbar->key(2, static_cast<int>(s));
    g.set(static_cast<int>(s), c(k[0], k[1]));
  }
  return g;
}

// X_gamma -> N(Z_d,G). With phi(a)phi(b) = J^{gamma} phi(ab) the twisted faces force
// (a;gbar) -> J^{-a} phi(gbar) and (a_1,a_2;sigma) -> (J^{-a_1} phi(gbar_1), J^{-a_2-gamma(sigma)} phi(gbar_2)).
inline SMap twisted_iso(const CentralExtensionData& ext, const Cochain& gamma, SSetPtr xg, SSetPtr target) {
  const FinGroupJ& g = ext.G;
  const int cap = std::min(xg->cap(), target->cap());
  if (cap > 2) throw std::invalid_argument("twisted_iso is defined up to degree 2");
  auto jpow = [&](i64 e) { return g.pow(g.J(), mod_reduce(e, g.d())); };
  const TruncatedSSet& host = *gamma.host;
  SMap m = smap_from_keys(xg, target, cap, [&](int n, const Key& k) -> Key {
    if (n == 0) return {};
    const Key& bars = host.key(n, k.back());
    if (n == 1) return {g.mul(jpow(-k[0]), ext.section[bars[0]])};
    return {g.mul(jpow(-k[0]), ext.section[bars[0]]), g.mul(jpow(-k[1] - gamma(k.back())), ext.section[bars[1]])};
  });
  validate(m);
  if (!is_bijective(m)) throw std::invalid_argument("twisted_iso is not bijective");
  return m;
}

// iota: NZ_d -> N(Z_d,G), a -> J^a.
inline SMap iota_map(SSetPtr nzd, SSetPtr comm, const FinGroupJ& g) {
  const int cap = std::min(nzd->cap(), comm->cap());
  SMap m = smap_from_keys(nzd, comm, cap, [&](int, const Key& k) {
    Key r;
    for (int a : k) r.push_back(g.pow(g.J(), a));
    return r;
  });
  validate(m);
  return m;
}

// f(s_1..s_n) = (f_1(s_1), ..., f_1(s_n)) with f_1(s) = prod_v T(v)^{s(v)}; also checks f alpha = iota beta.
inline SMap map_from_solution(const SystemSpaces& sp, const FinGroupJ& g, const std::vector<int>& T, SSetPtr comm) {
  const LinearSystem& s = sp.system;
  if (!is_solution(s, g, T)) throw std::invalid_argument("the assignment is not a solution of the system");
  const VertexFunctions vf{static_cast<int>(s.cols()), s.d()};
  auto f1 = [&](int code) {
    const ZVec f = vf.decode(code);
    int x = g.identity();
    for (int v = 0; v < vf.nv; ++v) x = g.mul(x, g.pow(T[v], f[v]));
    return x;
  };
  const int cap = std::min(sp.nzd_sigma->cap(), comm->cap());
  SMap m = smap_from_keys(sp.nzd_sigma, comm, cap, [&](int, const Key& k) {
    Key r;
    for (int c : k) r.push_back(f1(c));
    return r;
  });
  validate(m);
  const SMap lhs = compose(m, sp.wedge.alpha);
  const SMap rhs = compose(iota_map(sp.nzd, comm, g), sp.wedge.beta);
  if (lhs.f[1] != rhs.f[1]) throw std::runtime_error("solution map does not satisfy f alpha = iota beta");
  return m;
}

// omega_m: (g_1..g_n) -> (g_1^m..g_n^m) between two tuple nerves on the same group.
inline SMap power_map_s(const FinGroupJ& g, i64 m, SSetPtr src, SSetPtr tgt) {
  const int cap = std::min(src->cap(), tgt->cap());
  SMap f = smap_from_keys(src, tgt, cap, [&](int, const Key& k) {
    Key r;
    for (int x : k) r.push_back(g.pow(x, m));
    return r;
  });
  validate(f);
  return f;
}

// omega_m induced on Nbar(Z_d,G): gbar -> class of phi(gbar)^m.
inline SMap nbar_power_map(const CentralExtensionData& ext, i64 m, SSetPtr nbar) {
  const int cap = nbar->cap();
  SMap f = smap_from_keys(nbar, nbar, cap, [&](int, const Key& k) {
    Key r;
    for (int x : k) r.push_back(ext.proj[ext.G.pow(ext.section[x], m)]);
    return r;
  });
  validate(f);
  return f;
}

// A group homomorphism h applied entrywise between tuple nerves.
inline SMap entrywise_map(const std::vector<int>& h, SSetPtr src, SSetPtr tgt) {
  const int cap = std::min(src->cap(), tgt->cap());
  SMap f = smap_from_keys(src, tgt, cap, [&](int, const Key& k) {
    Key r;
    for (int x : k) r.push_back(h.at(x));
    return r;
  });
  validate(f);
  return f;
}

// ---------------------------------------------------------------- sets from nondegenerate data

// A simplex written as eta^*(y) for a nondegenerate y (by id) and a monotone surjection eta.
// An empty eta means the identity.
struct SimplexRef {
  int id = 0;
  std::vector<int> eta;
};

struct NondegCell {
  int dim = 0;
  std::string label;
  std::vector<SimplexRef> faces;  // d_0 .. d_dim
};

namespace detail {

struct EZModel {
  const std::vector<NondegCell>& cells;

  static std::vector<std::vector<int>> surjections(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur{0};
    std::function<void()> rec = [&]() {
      if (static_cast<int>(cur.size()) == n + 1) {
        if (cur.back() == k) out.push_back(cur);
        return;
      }
      for (int step = 0; step <= 1; ++step) {
        if (cur.back() + step > k) continue;
        cur.push_back(cur.back() + step);
        rec();
        cur.pop_back();
      }
    };
    rec();
    return out;
  }
  std::vector<Key> simplices(int n) const {
    std::vector<Key> out;
    for (std::size_t id = 0; id < cells.size(); ++id) {
      const int k = cells[id].dim;
      if (k > n) continue;
      for (auto& eta : surjections(n, k)) {
        Key key{k, static_cast<int>(id)};
        key.insert(key.end(), eta.begin(), eta.end());
        out.push_back(std::move(key));
      }
    }
    return out;
  }
  Key make(int id, const std::vector<int>& eta) const {
    Key key{cells[id].dim, id};
    key.insert(key.end(), eta.begin(), eta.end());
    return key;
  }
  Key face(int, int i, const Key& key) const {
    const int id = key[1];
    std::vector<int> eta(key.begin() + 2, key.end());
    const int m = eta[i];
    eta.erase(eta.begin() + i);
    if (std::find(eta.begin(), eta.end(), m) != eta.end()) return make(id, eta);
    const SimplexRef& f = cells[id].faces.at(m);
    for (auto& v : eta) {
      if (v > m) --v;
      if (!f.eta.empty()) v = f.eta.at(v);
    }
    return make(f.id, eta);
  }
  Key degen(int, int j, const Key& key) const {
    Key r = key;
    r.insert(r.begin() + 2 + j + 1, key[2 + j]);
    return r;
  }
  std::string label(int, const Key& key) const {
    std::string s = cells[key[1]].label;
    for (std::size_t p = 2; p + 1 < key.size(); ++p)
      if (key[p] == key[p + 1]) s = "s" + std::to_string(p - 2) + "(" + s + ")";
    return s;
  }
};

}  // namespace detail

// Generates every simplex up to the cap from nondegenerate cells; the first 0-cell is the basepoint.
inline SSetPtr sset_from_cells(const std::vector<NondegCell>& cells, int cap, std::string name) {
  for (std::size_t id = 0; id < cells.size(); ++id) {
    const NondegCell& c = cells[id];
    if (static_cast<int>(c.faces.size()) != (c.dim == 0 ? 0 : c.dim + 1))
      throw std::invalid_argument("cell " + c.label + " needs " + std::to_string(c.dim + 1) + " faces");
    for (const auto& f : c.faces) {
      if (f.id < 0 || f.id >= static_cast<int>(cells.size())) throw std::invalid_argument("cell " + c.label + ": face id out of range");
      const int fd = f.eta.empty() ? cells[f.id].dim : static_cast<int>(f.eta.size()) - 1;
      if (fd != c.dim - 1) throw std::invalid_argument("cell " + c.label + ": face of the wrong dimension");
      if (!f.eta.empty() && (f.eta.front() != 0 || f.eta.back() != cells[f.id].dim))
        throw std::invalid_argument("cell " + c.label + ": face degeneracy is not a surjection");
    }
  }
  if (cells.empty() || cells[0].dim != 0) throw std::invalid_argument("the first cell must be a vertex");
  SSetPtr x = build_sset(detail::EZModel{cells}, cap, std::move(name));
  validate(*x);
  return x;
}

struct TorusFixture {
  SSetPtr X;
  std::vector<std::string> edges;      // K33 column order a1b1, a1b2, ..., a3b3
  std::vector<std::string> triangles;  // K33 row order a1, a2, a3, b1, b2, b3
};

// Triangulated torus dual to K33: vertices A, C, E; edges x,y from C to C; triangles sigma1..sigma6
// listed by (d_0, d_1, d_2). Triangle adjacency is K33 with parts {sigma1,sigma3,sigma5} and
// {sigma2,sigma4,sigma6}; each edge is the K33 edge between the two triangles containing it.
inline TorusFixture k33_torus_fixture(int cap = 3) {
  std::vector<NondegCell> cells;
  std::map<std::string, int> id;
  auto vertex = [&](const std::string& l) {
    id[l] = static_cast<int>(cells.size());
    cells.push_back({0, l, {}});
  };
  auto edge = [&](const std::string& l, const std::string& from, const std::string& to) {
    id[l] = static_cast<int>(cells.size());
    cells.push_back({1, l, {{id.at(to), {}}, {id.at(from), {}}}});
  };
  auto tri = [&](const std::string& l, const std::string& f0, const std::string& f1, const std::string& f2) {
    id[l] = static_cast<int>(cells.size());
    cells.push_back({2, l, {{id.at(f0), {}}, {id.at(f1), {}}, {id.at(f2), {}}}});
  };
  vertex("A");
  vertex("C");
  vertex("E");
  edge("x", "C", "C");
  edge("y", "C", "C");
  edge("z1", "A", "C");
  edge("z2", "A", "E");
  edge("z3", "C", "E");
  edge("t1", "A", "C");
  edge("t2", "C", "E");
  edge("s1", "A", "C");
  edge("s2", "C", "E");
  tri("sigma1", "x", "t1", "z1");
  tri("sigma2", "t2", "z2", "t1");
  tri("sigma3", "z3", "t2", "y");
  tri("sigma4", "y", "s1", "z1");
  tri("sigma5", "s2", "z2", "s1");
  tri("sigma6", "z3", "s2", "x");
  TorusFixture t;
  t.X = sset_from_cells(cells, cap, "K33 torus");
  t.edges = {"t1", "z1", "x", "t2", "y", "z3", "z2", "s1", "s2"};
  t.triangles = {"sigma1", "sigma3", "sigma5", "sigma2", "sigma4", "sigma6"};
  return t;
}

// A random connected 2-truncated set: up to two vertices, a few edges and composable triangles.
inline SSetPtr random_small_sset(std::mt19937& rng) {
  std::vector<NondegCell> cells;
  const int nv = 1 + static_cast<int>(rng() % 2);
  for (int v = 0; v < nv; ++v) cells.push_back({0, "v" + std::to_string(v), {}});
  struct Edge {
    SimplexRef ref;
    int from, to;
  };
  std::vector<Edge> edges;
  for (int v = 0; v < nv; ++v) edges.push_back({{v, {0, 0}}, v, v});
  const int ne = 1 + static_cast<int>(rng() % 4);
  for (int e = 0; e < ne; ++e) {
    const int from = e == 0 ? 0 : static_cast<int>(rng() % nv);
    const int to = e == 0 ? nv - 1 : static_cast<int>(rng() % nv);
    const int id = static_cast<int>(cells.size());
    cells.push_back({1, "x" + std::to_string(e), {{to, {}}, {from, {}}}});
    edges.push_back({{id, {}}, from, to});
  }
  const int nt = static_cast<int>(rng() % 5);
  for (int t = 0, tries = 0; t < nt && tries < 100; ++tries) {
    const Edge& e2 = edges[rng() % edges.size()];
    const Edge& e0 = edges[rng() % edges.size()];
    if (e2.to != e0.from) continue;
    std::vector<const Edge*> third;
    for (const auto& e : edges)
      if (e.from == e2.from && e.to == e0.to) third.push_back(&e);
    const Edge& e1 = *third[rng() % third.size()];
    cells.push_back({2, "t" + std::to_string(t), {e0.ref, e1.ref, e2.ref}});
    ++t;
  }
  return sset_from_cells(cells, 2, "random");
}

}  // namespace lcs
