#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcs/cochain.hpp"
#include "lcs/cohomology.hpp"
#include "lcs/group.hpp"
#include "lcs/homs.hpp"
#include "lcs/linear_system.hpp"
#include "lcs/presentation.hpp"
#include "lcs/simplicial.hpp"
#include "lcs/sset.hpp"
#include "lcs/todd_coxeter.hpp"

namespace lcs {

// ---------------------------------------------------------------- fundamental groups

// Nondegenerate edges forming a BFS spanning tree of the 1-skeleton, rooted at the basepoint.
inline std::vector<int> spanning_tree_edges(const TruncatedSSet& x) {
  const int nv = static_cast<int>(x.size(0));
  std::vector<std::vector<std::pair<int, int>>> adj(nv);
  for (int e : x.nondegenerate(1)) {
    const int to = x.face(1, 0, e), from = x.face(1, 1, e);
    adj[from].push_back({e, to});
    adj[to].push_back({e, from});
  }
  std::vector<char> seen(nv, 0);
  std::vector<int> tree, queue{x.basepoint()};
  seen[x.basepoint()] = 1;
  for (std::size_t k = 0; k < queue.size(); ++k)
    for (auto [e, w] : adj[queue[k]])
      if (!seen[w]) {
        seen[w] = 1;
        tree.push_back(e);
        queue.push_back(w);
      }
  if (static_cast<int>(queue.size()) != nv) throw std::invalid_argument(x.name() + " is not connected");
  return tree;
}

namespace detail {

inline Presentation edge_generators(const TruncatedSSet& x) {
  if (x.cap() < 2) throw std::invalid_argument("fundamental groups need degree 2");
  Presentation p;
  for (std::size_t e = 0; e < x.size(1); ++e) p.add_gen("e_" + x.label(1, static_cast<int>(e)));
  for (std::size_t v = 0; v < x.size(0); ++v) p.add_relator(gen_word(x.degen(0, 0, static_cast<int>(v))));
  return p;
}

inline Word triangle_relator(const TruncatedSSet& x, int s) {
  return {{x.face(2, 2, s), 1}, {x.face(2, 0, s), 1}, {x.face(2, 1, s), -1}};
}

}  // namespace detail

// Edge-path group: e_{d_2 s} e_{d_0 s} = e_{d_1 s}, degenerate edges trivial, and a spanning tree
// killed when there is more than one vertex.
inline Presentation pi1(const TruncatedSSet& x) {
  Presentation p = detail::edge_generators(x);
  if (x.size(0) > 1)
    for (int e : spanning_tree_edges(x)) p.add_relator(gen_word(e));
  for (std::size_t s = 0; s < x.size(2); ++s) p.add_relator(detail::triangle_relator(x, static_cast<int>(s)));
  return p;
}

// pi_1(Z_d, X): pi1 relations without a tree, plus e_x^d and commuting faces of each triangle.
inline Presentation pi1_commutative(const TruncatedSSet& x, i64 d) {
  check_modulus(d);
  Presentation p = detail::edge_generators(x);
  for (std::size_t e = 0; e < x.size(1); ++e)
    if (!x.is_degenerate(1, static_cast<int>(e))) p.add_relator(gen_word(static_cast<int>(e), d));
  std::set<std::pair<int, int>> done;
  for (std::size_t s = 0; s < x.size(2); ++s)
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        int a = x.face(2, i, static_cast<int>(s)), b = x.face(2, j, static_cast<int>(s));
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        if (done.insert({a, b}).second) p.add_relator(commutator_word(a, b));
      }
  for (std::size_t s = 0; s < x.size(2); ++s) p.add_relator(detail::triangle_relator(x, static_cast<int>(s)));
  return p;
}

// ---------------------------------------------------------------- K(Z_d, G)

struct KGroup {
  Presentation pres;                       // generators e_{g,h}
  std::vector<std::pair<int, int>> edges;  // (g, h) for each generator
  std::vector<std::vector<int>> paths;     // torsion factorization g = g_1 ... g_n(g)
  Presentation target;                     // pi_1 N(Z_d, G)
  std::vector<Word> images;                // e_{g,h} as a word in target
};

inline KGroup k_group(const FinGroupJ& g, i64 d) {
  check_modulus(d);
  const std::vector<int> tors = g.FinGroup::torsion(d);
  if (static_cast<int>(g.generated_subgroup(tors).size()) != g.order())
    throw std::invalid_argument(g.label() + " is not generated by " + std::to_string(d) + "-torsion elements");
  const int n = g.order();

  KGroup k;
  k.paths.assign(n, {});
  std::vector<int> parent(n, -1);
  std::vector<char> seen(n, 0);
  std::vector<int> queue{g.identity()};
  seen[g.identity()] = 1;
  for (std::size_t q = 0; q < queue.size(); ++q)
    for (int t : tors) {
      const int h = g.mul(queue[q], t);
      if (seen[h]) continue;
      seen[h] = 1;
      parent[h] = queue[q];
      k.paths[h] = k.paths[queue[q]];
      k.paths[h].push_back(t);
      queue.push_back(h);
    }

  std::map<std::pair<int, int>, int> gen_of;
  for (int a = 0; a < n; ++a)
    for (int t : tors) {
      const int b = g.mul(a, t);
      gen_of[{a, b}] = k.pres.add_gen("e_" + g.name(a) + "," + g.name(b));
      k.edges.push_back({a, b});
    }
  for (int h = 0; h < n; ++h) {
    if (parent[h] >= 0) k.pres.add_relator(gen_word(gen_of.at({parent[h], h})));
    k.pres.add_relator(gen_word(gen_of.at({h, h})));
  }
  for (int a = 0; a < n; ++a)
    for (int t1 : tors)
      for (int t2 : tors) {
        if (!g.commute(t1, t2)) continue;
        const int b = g.mul(a, t1), c = g.mul(b, t2);
        k.pres.add_relator({{gen_of.at({a, b}), 1}, {gen_of.at({b, c}), 1}, {gen_of.at({a, c}), -1}});
      }

  SSetPtr comm = comm_nerve(g, d, 2);
  k.target = pi1(*comm);
  auto edge = [&](int x) { return comm->index_of_key(1, Key{x}); };
  for (const auto& [a, b] : k.edges) {
    Word w;
    for (int x : k.paths[a]) w.push_back({edge(x), 1});
    w.push_back({edge(g.mul(g.inv(a), b)), 1});
    for (auto it = k.paths[b].rbegin(); it != k.paths[b].rend(); ++it) w.push_back({edge(*it), -1});
    k.images.push_back(free_reduce(w));
  }
  return k;
}

// ---------------------------------------------------------------- reduction maps

struct ReductionMaps {
  Presentation source;  // Gamma(A, b)
  Presentation target;  // Gamma(A_X, b_gamma) on the reduced quotient
  Cochain gamma;
  std::vector<Word> phi;            // per source generator, a word in target
  std::vector<Word> psi;            // per target generator, a word in source
  std::vector<i64> alpha;           // per degree-1 simplex s of the quotient: J exponent in the decomposition
  std::vector<Word> decomposition;  // e_s = prod_v phi(e_v)^{s(v)} J^{alpha(s)}
};

inline ReductionMaps reduction_maps(const SystemSpaces& sp) {
  const LinearSystem& s = sp.system;
  const i64 d = s.d();
  const TruncatedSSet& nz = *sp.nzd_sigma;
  const TruncatedSSet& q = *sp.nbar.space;
  const SMap& proj = sp.nbar.proj;
  const VertexFunctions vf{static_cast<int>(s.cols()), d};

  ReductionMaps r{solution_group(s), {}, gamma_b(sp), {}, {}, {}, {}};
  r.target = solution_group(extract_linear_system(r.gamma));
  const int Jt = *r.target.J, Js = *r.source.J;

  // J exponent a b_i for the simplices a A_i of the wedge image
  std::map<int, i64> wedge_value;
  const TruncatedSSet& w = *sp.wedge.wedge;
  for (std::size_t t = 0; t < w.size(1); ++t) {
    const Key& k = w.key(1, static_cast<int>(t));
    wedge_value[sp.wedge.alpha(1, static_cast<int>(t))] = k[0] == 0 ? 0 : mod_reduce(k[1] * s.b[k[0] - 1], d);
  }
  auto delta = [&](std::size_t v) {
    ZVec f(s.cols(), 0);
    f[v] = 1;
    return static_cast<int>(vf.encode(f));
  };
  for (std::size_t v = 0; v < s.cols(); ++v) {
    const int t = nz.index_of_key(1, Key{delta(v)});
    const auto it = wedge_value.find(t);
    r.phi.push_back(it != wedge_value.end() ? gen_word(Jt, it->second) : gen_word(proj(1, t)));
  }
  r.phi.push_back(gen_word(Jt));

  for (std::size_t c = 0; c < q.size(1); ++c) {
    const int orig = q.key(1, static_cast<int>(c))[0];
    Word wd;
    if (orig >= 0) {
      const ZVec f = vf.decode(nz.key(1, orig)[0]);
      for (std::size_t v = 0; v < s.cols(); ++v)
        if (f[v]) wd.push_back({static_cast<int>(v), f[v]});
    }
    r.psi.push_back(wd);
  }
  r.psi.push_back(gen_word(Js));

  // alpha(s) = alpha(r) + alpha(r') + gamma(r, r') for s = r + r' with r = delta^v, v the lowest vertex of s
  std::map<int, i64> memo;
  std::function<i64(int)> alpha_code = [&](int code) -> i64 {
    if (auto it = memo.find(code); it != memo.end()) return it->second;
    const int t = nz.index_of_key(1, Key{code});
    i64 out = 0;
    if (auto it = wedge_value.find(t); it != wedge_value.end()) {
      out = mod_reduce(-it->second, d);
    } else {
      ZVec f = vf.decode(code);
      std::size_t v = 0;
      while (!f[v]) ++v;
      const int head = delta(v);
      if (head != code) {
        f[v] = mod_reduce(f[v] - 1, d);
        const int rest = static_cast<int>(vf.encode(f));
        const int tri = proj(2, nz.index_of_key(2, Key{head, rest}));
        out = mod_reduce(alpha_code(head) + alpha_code(rest) + r.gamma(tri), d);
      }
    }
    memo[code] = out;
    return out;
  };
  for (std::size_t c = 0; c < q.size(1); ++c) {
    const int orig = q.key(1, static_cast<int>(c))[0];
    if (orig < 0) {
      r.alpha.push_back(0);
      r.decomposition.push_back({});
      continue;
    }
    const int code = nz.key(1, orig)[0];
    const i64 a = alpha_code(code);
    const ZVec f = vf.decode(code);
    Word wd;
    for (std::size_t v = 0; v < s.cols(); ++v)
      if (f[v]) wd = wd * power(r.phi[v], f[v]);
    r.alpha.push_back(a);
    r.decomposition.push_back(free_reduce(wd * gen_word(Jt, a)));
  }
  return r;
}

// ---------------------------------------------------------------- hom transport

struct TransportResult {
  std::string group;
  std::size_t homs_a = 0, homs_b = 0;                // unpinned
  std::size_t pinned_a = 0, pinned_b = 0;            // J (or its image under f) sent to J_G
  bool images_are_homs = true, mutually_inverse = true;
  bool ok() const { return images_are_homs && mutually_inverse && homs_a == homs_b && pinned_a == pinned_b; }
};

// Precomposition along f: A -> B (words in B per generator of A) and g: B -> A on Hom(-, G).
inline TransportResult transport_homs(const Presentation& a, const Presentation& b, const std::vector<Word>& f,
                                      const std::vector<Word>& g, const FinGroupJ& G) {
  if (!a.J) throw std::invalid_argument("hom transport needs a distinguished generator J");
  TransportResult out;
  out.group = G.label();
  auto compose = [&](const std::vector<int>& imgs, const std::vector<Word>& words) {
    std::vector<int> r;
    for (const auto& w : words) r.push_back(evaluate(G, imgs, w));
    return r;
  };
  out.homs_b = for_each_hom(b, G, false, [&](const std::vector<int>& theta) {
    const auto eta = compose(theta, f);
    if (!is_hom(a, G, eta, false)) out.images_are_homs = false;
    if (compose(eta, g) != theta) out.mutually_inverse = false;
    if (eta[*a.J] == G.J()) ++out.pinned_b;
    return true;
  });
  out.homs_a = for_each_hom(a, G, false, [&](const std::vector<int>& eta) {
    const auto theta = compose(eta, g);
    if (!is_hom(b, G, theta, false)) out.images_are_homs = false;
    if (compose(theta, f) != eta) out.mutually_inverse = false;
    if (eta[*a.J] == G.J()) ++out.pinned_a;
    return true;
  });
  return out;
}

// Relators of `from` pushed along `images` that fail in a completed table of `to`.
inline std::optional<std::size_t> relator_failures(const Presentation& from, const std::vector<Word>& images,
                                                   const std::optional<CosetTable>& to) {
  if (!to || !to->has_table) return std::nullopt;
  std::size_t bad = 0;
  for (const auto& rel : from.relators)
    if (evaluate(to->group, to->gen_element, substitute(rel, images)) != to->group.identity()) ++bad;
  return bad;
}

// Triviality certificate that needs no finite table. Pairwise commuting d-torsion generators span
// an abelian group in which every relator supported on them holds as a linear equation over Z_d.
// Generators shown equal (or trivial) this way are merged and the analysis repeats; two generators
// are equal when each is the same word in the letters shared by two overlapping cliques.
class LocalCertifier {
 public:
  LocalCertifier(const Presentation& p, i64 d) : d_(d), n_(p.num_gens()), rep_(n_) {
    for (int g = 0; g < n_; ++g) rep_[g] = g;
    for (const auto& r : p.relators) relators_.push_back(cyclic_reduce(r));
    for (int round = 0; round < 50 && analyse(); ++round) {
    }
  }

  bool trivial(const Word& w) const {
    const Word m = map_word(w);
    std::map<int, i64> target;
    for (const auto& l : m) target[l.gen] += l.exp;
    std::vector<int> S;
    for (const auto& [g, e] : target) S.push_back(g);
    if (S.empty()) return true;
    for (std::size_t c = 0; c < cliques_.size(); ++c) {
      const auto& K = cliques_[c];
      if (!std::includes(K.begin(), K.end(), S.begin(), S.end())) continue;
      ZVec x(K.size(), 0);
      for (const auto& [g, e] : target) x[index_in(K, g)] = mod_reduce(e, d_);
      if (detail::is_zero(x) || (spans_[c] && in_span(*spans_[c], x))) return true;
    }
    return false;
  }

 private:
  static std::size_t index_in(const std::vector<int>& K, int g) {
    return static_cast<std::size_t>(std::lower_bound(K.begin(), K.end(), g) - K.begin());
  }
  int find(int g) const {
    while (g >= 0 && rep_[g] != g) g = rep_[g];
    return g;
  }
  // letters replaced by representatives, trivial generators dropped
  Word map_word(const Word& w) const {
    Word out;
    for (const auto& l : w) {
      const int r = find(l.gen);
      if (r >= 0) out.push_back({r, l.exp});
    }
    return cyclic_reduce(out);
  }

  // One pass; returns true when some generator was merged or killed.
  bool analyse() {
    std::vector<Word> rels;
    for (const auto& r : relators_) rels.push_back(map_word(r));
    std::vector<i64> pg(n_, 0);
    std::set<std::pair<int, int>> commute;
    for (const auto& r : rels) {
      if (r.size() == 1) pg[r[0].gen] = std::gcd(pg[r[0].gen], std::abs(r[0].exp));
      if (r.size() == 4 && r[0].gen == r[2].gen && r[1].gen == r[3].gen && r[0].gen != r[1].gen &&
          std::abs(r[0].exp) == 1 && std::abs(r[1].exp) == 1 && r[0].exp == -r[2].exp && r[1].exp == -r[3].exp)
        commute.insert(std::minmax(r[0].gen, r[1].gen));
    }
    bool changed = false;
    for (int g = 0; g < n_; ++g)
      if (find(g) == g && pg[g] == 1) rep_[g] = -1, changed = true;
    if (changed) return true;

    std::vector<int> live;
    for (int g = 0; g < n_; ++g)
      if (find(g) == g) live.push_back(g);
    torsion_.assign(n_, 0);
    for (int g : live) torsion_[g] = pg[g] > 0 && d_ % pg[g] == 0;
    std::vector<std::map<int, i64>> sums;
    for (const auto& r : rels) {
      std::map<int, i64> e;
      for (const auto& l : r) e[l.gen] += l.exp;
      if (!e.empty()) sums.push_back(std::move(e));
    }
    std::vector<char> central(n_, 0);
    for (int g : live) {
      bool all = true;
      for (int h : live) all = all && (h == g || commute.count(std::minmax(g, h)));
      central[g] = all;
    }
    for (bool grow = true; grow;) {
      grow = false;
      for (const auto& e : sums) {
        int open = -1, count = 0;
        for (const auto& [g, x] : e)
          if (!central[g]) open = g, ++count;
        if (count != 1 || !torsion_[open] || std::gcd(mod_reduce(e.at(open), d_), d_) != 1) continue;
        central[open] = 1;
        grow = true;
      }
    }
    auto adjacent = [&](int g, int h) { return central[g] || central[h] || commute.count(std::minmax(g, h)); };

    // maximal cliques of torsion generators (Bron-Kerbosch with pivoting, capped)
    cliques_.clear();
    std::vector<int> tors;
    for (int g : live)
      if (torsion_[g]) tors.push_back(g);
    std::function<void(std::vector<int>, std::vector<int>, std::vector<int>)> bk = [&](std::vector<int> R, std::vector<int> P,
                                                                                       std::vector<int> X) {
      if (cliques_.size() >= 4000) return;
      if (P.empty() && X.empty()) {
        std::sort(R.begin(), R.end());
        cliques_.push_back(R);
        return;
      }
      const int pivot = !P.empty() ? P[0] : X[0];
      const std::vector<int> cand = P;
      for (int v : cand) {
        if (v != pivot && adjacent(pivot, v)) continue;
        std::vector<int> R2 = R, P2, X2;
        R2.push_back(v);
        for (int u : P)
          if (u != v && adjacent(u, v)) P2.push_back(u);
        for (int u : X)
          if (u != v && adjacent(u, v)) X2.push_back(u);
        bk(R2, P2, X2);
        P.erase(std::find(P.begin(), P.end(), v));
        X.push_back(v);
      }
    };
    bk({}, tors, {});

    auto rows_in = [&](const std::vector<int>& K) {
      std::vector<ZVec> rows;
      for (const auto& e : sums) {
        bool inside = true;
        for (const auto& [g, x] : e) inside = inside && std::binary_search(K.begin(), K.end(), g);
        if (!inside) continue;
        ZVec row(K.size(), 0);
        for (const auto& [g, x] : e) row[index_in(K, g)] = mod_reduce(x, d_);
        rows.push_back(std::move(row));
      }
      return rows;
    };
    auto span_of = [&](std::size_t width, const std::vector<ZVec>& rows) -> std::optional<HowellBasis> {
      if (rows.empty() || width == 0) return std::nullopt;
      return howell_form(ZModMatrix(d_, rows));
    };
    spans_.clear();
    std::vector<std::vector<ZVec>> clique_rows;
    for (const auto& K : cliques_) {
      clique_rows.push_back(rows_in(K));
      spans_.push_back(span_of(K.size(), clique_rows.back()));
    }
    auto merge = [&](int g, int h) {
      g = find(g), h = find(h);
      if (g == h || g < 0 || h < 0) return;
      rep_[std::max(g, h)] = std::min(g, h);
      changed = true;
    };
    for (std::size_t c = 0; c < cliques_.size() && !changed; ++c) {
      const auto& K = cliques_[c];
      if (!spans_[c]) continue;
      for (std::size_t i = 0; i < K.size(); ++i) {
        ZVec x(K.size(), 0);
        x[i] = 1;
        if (in_span(*spans_[c], x)) {
          rep_[K[i]] = -1;
          changed = true;
        }
        for (std::size_t j = i + 1; j < K.size(); ++j) {
          ZVec y(K.size(), 0);
          y[i] = 1;
          y[j] = d_ - 1;
          if (in_span(*spans_[c], y)) merge(K[i], K[j]);
        }
      }
    }
    if (changed) return true;
    for (std::size_t c1 = 0; c1 < cliques_.size(); ++c1)
      for (std::size_t c2 = c1 + 1; c2 < cliques_.size(); ++c2) {
        const auto& K1 = cliques_[c1];
        const auto& K2 = cliques_[c2];
        std::vector<int> U;
        std::set_union(K1.begin(), K1.end(), K2.begin(), K2.end(), std::back_inserter(U));
        if (U.size() == K1.size() + K2.size()) continue;
        std::vector<ZVec> rows;
        for (const auto* part : {&K1, &K2}) {
          const auto& pr = part == &K1 ? clique_rows[c1] : clique_rows[c2];
          for (const auto& r : pr) {
            ZVec row(U.size(), 0);
            for (std::size_t k = 0; k < part->size(); ++k) row[index_in(U, (*part)[k])] = r[k];
            rows.push_back(std::move(row));
          }
        }
        const auto span = span_of(U.size(), rows);
        if (!span) continue;
        for (int g : K1) {
          if (std::binary_search(K2.begin(), K2.end(), g)) continue;
          for (int h : K2) {
            if (std::binary_search(K1.begin(), K1.end(), h)) continue;
            ZVec y(U.size(), 0);
            y[index_in(U, g)] = 1;
            y[index_in(U, h)] = d_ - 1;
            if (in_span(*span, y)) merge(g, h);
          }
        }
      }
    return changed;
  }

  i64 d_;
  int n_;
  std::vector<int> rep_;  // union-find parent, -1 for generators shown trivial
  std::vector<Word> relators_;
  std::vector<char> torsion_;
  std::vector<std::vector<int>> cliques_;
  std::vector<std::optional<HowellBasis>> spans_;
};

// Relators of `from` pushed along `images` that the local certificate cannot show trivial in `to`.
inline std::size_t relator_uncertified(const Presentation& from, const std::vector<Word>& images, const Presentation& to,
                                       i64 d) {
  const LocalCertifier cert(to, d);
  std::size_t bad = 0;
  for (const auto& rel : from.relators) bad += !cert.trivial(substitute(rel, images));
  return bad;
}

// ---------------------------------------------------------------- pi_1(Z_d, X_gamma) vs Gamma(A_X, b_gamma)

struct IsoCheckReport {
  Presentation twisted;  // pi_1(Z_d, X_gamma)
  Presentation system;   // Gamma(A_X, b_gamma)
  std::vector<Word> phi, psi;
  std::optional<int> order_twisted, order_system;
  std::optional<std::size_t> phi_failures, psi_failures;  // against completed tables
  std::size_t phi_uncertified = 0, psi_uncertified = 0;  // local certificate, used without a table
  std::vector<TransportResult> groups;
  bool relators_verified() const {
    return (phi_failures ? *phi_failures == 0 : phi_uncertified == 0) &&
           (psi_failures ? *psi_failures == 0 : psi_uncertified == 0);
  }
  bool ok() const {
    if (phi_failures.value_or(0) || psi_failures.value_or(0)) return false;
    if (order_twisted && order_system && *order_twisted != *order_system) return false;
    for (const auto& g : groups)
      if (!g.ok()) return false;
    return true;
  }
};

inline IsoCheckReport theorem_iso_check(const Cochain& gamma, const std::vector<FinGroupJ>& groups,
                                        std::size_t max_cosets = 200000) {
  const i64 d = gamma.d;
  SSetPtr xg = twisted_product(gamma, 2);
  const TruncatedSSet& x = *gamma.host;
  IsoCheckReport rep;
  rep.twisted = pi1_commutative(*xg, d);
  rep.system = solution_group(extract_linear_system(gamma));
  const int J = *rep.system.J;
  for (std::size_t t = 0; t < xg->size(1); ++t) {
    const Key& k = xg->key(1, static_cast<int>(t));
    rep.phi.push_back(gen_word(J, k[0]) * gen_word(k[1]));
  }
  for (std::size_t e = 0; e < x.size(1); ++e) rep.psi.push_back(gen_word(xg->index_of_key(1, Key{0, static_cast<int>(e)})));
  rep.psi.push_back(gen_word(xg->index_of_key(1, Key{1, x.degen(0, 0, x.basepoint())})));
  rep.twisted.J = rep.psi.back()[0].gen;

  const auto tw = todd_coxeter_simplified(rep.twisted, max_cosets);
  const auto sy = todd_coxeter_simplified(rep.system, max_cosets);
  if (tw) rep.order_twisted = tw->order;
  if (sy) rep.order_system = sy->order;
  rep.phi_failures = relator_failures(rep.twisted, rep.phi, sy);
  rep.psi_failures = relator_failures(rep.system, rep.psi, tw);
  if (!rep.phi_failures) rep.phi_uncertified = relator_uncertified(rep.twisted, rep.phi, rep.system, d);
  if (!rep.psi_failures) rep.psi_uncertified = relator_uncertified(rep.system, rep.psi, rep.twisted, d);
  for (const auto& G : groups) rep.groups.push_back(transport_homs(rep.system, rep.twisted, rep.psi, rep.phi, G));
  return rep;
}

// ---------------------------------------------------------------- words and their opposites

struct OppositeWordReport {
  std::size_t words = 0;       // words of length 1..L over the generators
  std::size_t related = 0;     // w = J^a w^op for some a
  std::size_t violations = 0;  // related with a != 0
  std::vector<int> example;    // generator indices of a violating word
};

inline OppositeWordReport opposite_word_check(const FinGroup& g, const std::vector<int>& gens, int J, i64 d, int L) {
  std::vector<int> jpow(g.order(), -1);
  for (int a = 0, x = g.identity(); a < d && jpow[x] < 0; ++a, x = g.mul(x, J)) jpow[x] = a;
  OppositeWordReport rep;
  std::vector<int> word;
  std::function<void(int, int)> rec = [&](int w, int wop) {
    if (!word.empty()) {
      ++rep.words;
      const int a = jpow[g.mul(w, g.inv(wop))];
      if (a >= 0) {
        ++rep.related;
        if (a != 0) {
          if (!rep.violations) rep.example = word;
          ++rep.violations;
        }
      }
    }
    if (static_cast<int>(word.size()) == L) return;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      word.push_back(static_cast<int>(i));
      rec(g.mul(w, gens[i]), g.mul(gens[i], wop));
      word.pop_back();
    }
  };
  rec(g.identity(), g.identity());
  return rep;
}

// ---------------------------------------------------------------- the K33 torus commutator

struct ReplayStep {
  std::string relation;
  bool holds = false;
};

struct TorusReplay {
  bool completed = false;  // Todd-Coxeter finished with a table
  std::vector<ReplayStep> steps;
  std::optional<i64> commutator_exponent;  // a with [e_x, e_y] = J^a, defined modulo j_order
  i64 j_order = 0;
  bool ok() const {
    if (!completed) return false;
    for (const auto& s : steps)
      if (!s.holds) return false;
    return commutator_exponent.has_value();
  }
};

// Signed sum over the six triangles; the torus fundamental class evaluated on gamma.
inline i64 torus_class(const Cochain& gamma) {
  i64 c = 0;
  for (const char* l : {"sigma4", "sigma5", "sigma6"}) c += gamma.at_label(l);
  for (const char* l : {"sigma1", "sigma2", "sigma3"}) c -= gamma.at_label(l);
  return mod_reduce(c, gamma.d);
}

// Re-derives [e_x, e_y] in Gamma(A_X, b_gamma) triangle by triangle, checking each identity in the group.
inline TorusReplay k33_torus_replay(const Cochain& gamma, std::size_t max_cosets = 200000) {
  const Presentation p = solution_group(extract_linear_system(gamma));
  TorusReplay rep;
  const auto tc = todd_coxeter_simplified(p, max_cosets);
  if (!tc || !tc->has_table) return rep;
  rep.completed = true;
  const FinGroup& G = tc->group;
  auto e = [&](const std::string& l, i64 k = 1) { return gen_word(p.gen("e_" + l), k); };
  auto J = [&](const std::string& tri, i64 sgn) { return gen_word(*p.J, -sgn * gamma.at_label(tri)); };
  auto check = [&](const std::string& text, const Word& lhs, const Word& rhs) {
    rep.steps.push_back({text, evaluate(G, tc->gen_element, lhs) == evaluate(G, tc->gen_element, rhs)});
  };
  check("e_x = e_z1^-1 e_t1 J^-g(sigma1)", e("x"), e("z1", -1) * e("t1") * J("sigma1", 1));
  check("e_y = e_t2 e_z3^-1 J^-g(sigma3)", e("y"), e("t2") * e("z3", -1) * J("sigma3", 1));
  check("e_x = e_s2 e_z3^-1 J^-g(sigma6)", e("x"), e("s2") * e("z3", -1) * J("sigma6", 1));
  check("e_y = e_z1^-1 e_s1 J^-g(sigma4)", e("y"), e("z1", -1) * e("s1") * J("sigma4", 1));
  check("e_t1 e_t2 = e_z2 J^-g(sigma2)", e("t1") * e("t2"), e("z2") * J("sigma2", 1));
  check("e_s1 e_s2 = e_z2 J^-g(sigma5)", e("s1") * e("s2"), e("z2") * J("sigma5", 1));
  const Word xy = e("x") * e("y"), yx = e("y") * e("x");
  check("e_x e_y = e_z1^-1 e_z2 e_z3^-1 J^-(g1+g2+g3)", xy,
        e("z1", -1) * e("z2") * e("z3", -1) * J("sigma1", 1) * J("sigma2", 1) * J("sigma3", 1));
  check("e_y e_x = e_z1^-1 e_z2 e_z3^-1 J^-(g4+g5+g6)", yx,
        e("z1", -1) * e("z2") * e("z3", -1) * J("sigma4", 1) * J("sigma5", 1) * J("sigma6", 1));
  const int comm = evaluate(G, tc->gen_element, xy * inverse(yx));
  rep.j_order = G.element_order(*tc->J);
  for (i64 a = 0; a < gamma.d; ++a)
    if (G.pow(*tc->J, a) == comm) {
      rep.commutator_exponent = a;
      break;
    }
  return rep;
}

}  // namespace lcs
