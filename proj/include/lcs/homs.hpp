#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "lcs/group.hpp"
#include "lcs/linear_system.hpp"
#include "lcs/presentation.hpp"

namespace lcs {

// A homomorphism from a presented group, given by generator images.
struct Hom {
  std::vector<int> images;
  friend bool operator<(const Hom& a, const Hom& b) { return a.images < b.images; }
  friend bool operator==(const Hom& a, const Hom& b) { return a.images == b.images; }
};

inline int evaluate(const FinGroup& g, const std::vector<int>& images, const Word& w) {
  int x = g.identity();
  for (const auto& l : w) x = g.mul(x, g.pow(images[l.gen], l.exp));
  return x;
}

inline bool is_hom(const Presentation& p, const FinGroupJ& g, const std::vector<int>& images, bool pin_J) {
  if (static_cast<int>(images.size()) != p.num_gens()) return false;
  for (const auto& r : p.relators)
    if (evaluate(g, images, r) != g.identity()) return false;
  if (pin_J) return p.J && images[*p.J] == g.J();
  return true;
}

namespace detail {

// Backtracking over variable assignments with relator propagation. A "constraint" is a word
// over the variables which must evaluate to the identity.
class RelatorSearch {
 public:
  RelatorSearch(const FinGroup& g, int nvars, std::vector<Word> constraints, std::vector<std::vector<int>> domains)
      : g_(g), n_(nvars), cons_(std::move(constraints)), dom_(std::move(domains)), val_(nvars, -1), watch_(nvars) {
    in_dom_.assign(n_, std::vector<char>(g.order(), 0));
    for (int v = 0; v < n_; ++v)
      for (int x : dom_[v]) in_dom_[v][x] = 1;
    vars_.resize(cons_.size());
    for (std::size_t c = 0; c < cons_.size(); ++c) {
      for (const auto& l : cons_[c]) vars_[c].push_back(l.gen);
      std::sort(vars_[c].begin(), vars_[c].end());
      vars_[c].erase(std::unique(vars_[c].begin(), vars_[c].end()), vars_[c].end());
      for (int v : vars_[c]) watch_[v].push_back(static_cast<int>(c));
    }
    // Greedy static order: prefer variables tied to many already-ordered ones.
    std::vector<char> placed(n_, 0);
    std::vector<int> score(n_, 0);
    for (int step = 0; step < n_; ++step) {
      int best = -1;
      for (int v = 0; v < n_; ++v) {
        if (placed[v]) continue;
        if (best < 0 || score[v] > score[best] ||
            (score[v] == score[best] && dom_[v].size() < dom_[best].size()))
          best = v;
      }
      placed[best] = 1;
      order_.push_back(best);
      for (int c : watch_[best])
        for (int u : vars_[c])
          if (!placed[u]) ++score[u];
    }
  }

  void fix(int v, int x) { fixed_.emplace_back(v, x); }

  // Calls `visit(values)` for every solution; stops early when it returns false.
  void run(const std::function<bool(const std::vector<int>&)>& visit) {
    visit_ = &visit;
    stop_ = false;
    std::size_t mark = trail_.size();
    bool ok = true;
    for (auto [v, x] : fixed_) {
      if (val_[v] >= 0) {
        ok = ok && val_[v] == x;
        continue;
      }
      if (!ok || !assign(v, x)) {
        ok = false;
        break;
      }
    }
    if (ok) search(0);
    undo(mark);
  }

 private:
  bool assign(int v, int x) {
    if (!in_dom_[v][x]) return false;
    std::vector<std::pair<int, int>> queue{{v, x}};
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      auto [u, y] = queue[qi];
      if (val_[u] >= 0) {
        if (val_[u] != y) return false;
        continue;
      }
      if (!in_dom_[u][y]) return false;
      val_[u] = y;
      trail_.push_back(u);
      for (int c : watch_[u]) {
        int unknown = -1, nunknown = 0;
        for (int w : vars_[c])
          if (val_[w] < 0) {
            ++nunknown;
            unknown = w;
          }
        if (nunknown == 0) {
          if (evaluate(g_, val_, cons_[c]) != g_.identity()) return false;
        } else if (nunknown == 1) {
          const Word& w = cons_[c];
          std::size_t pos = w.size();
          int count = 0;
          for (std::size_t k = 0; k < w.size(); ++k)
            if (w[k].gen == unknown) {
              ++count;
              pos = k;
            }
          if (count != 1 || (w[pos].exp != 1 && w[pos].exp != -1)) continue;
          int pre = g_.identity(), post = g_.identity();
          for (std::size_t k = 0; k < pos; ++k) pre = g_.mul(pre, g_.pow(val_[w[k].gen], w[k].exp));
          for (std::size_t k = pos + 1; k < w.size(); ++k) post = g_.mul(post, g_.pow(val_[w[k].gen], w[k].exp));
          int z = g_.mul(g_.inv(pre), g_.inv(post));
          if (w[pos].exp == -1) z = g_.inv(z);
          queue.emplace_back(unknown, z);
        }
      }
    }
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      val_[trail_.back()] = -1;
      trail_.pop_back();
    }
  }

  void search(std::size_t k) {
    if (stop_) return;
    while (k < order_.size() && val_[order_[k]] >= 0) ++k;
    if (k == order_.size()) {
      if (!(*visit_)(val_)) stop_ = true;
      return;
    }
    const int v = order_[k];
    for (int x : dom_[v]) {
      const std::size_t mark = trail_.size();
      if (assign(v, x)) search(k + 1);
      undo(mark);
      if (stop_) return;
    }
  }

  const FinGroup& g_;
  int n_;
  std::vector<Word> cons_;
  std::vector<std::vector<int>> dom_;
  std::vector<std::vector<char>> in_dom_;
  std::vector<int> val_;
  std::vector<std::vector<int>> watch_;
  std::vector<std::vector<int>> vars_;
  std::vector<int> order_;
  std::vector<int> trail_;
  std::vector<std::pair<int, int>> fixed_;
  const std::function<bool(const std::vector<int>&)>* visit_ = nullptr;
  bool stop_ = false;
};

}  // namespace detail

// Visit every homomorphism P -> G (with J -> J_G when pinned). Returns the number visited.
inline std::size_t for_each_hom(const Presentation& p, const FinGroupJ& g, bool pin_J,
                                const std::function<bool(const std::vector<int>&)>& visit) {
  if (pin_J && !p.J) throw std::invalid_argument("presentation has no distinguished generator J to pin");
  const int n = p.num_gens();
  std::vector<std::vector<int>> domains(n);
  for (int v = 0; v < n; ++v) {
    std::vector<i64> powers;
    for (const auto& r : p.relators) {
      bool single = true;
      i64 e = 0;
      for (const auto& l : r) {
        single = single && l.gen == v;
        e += l.exp;
      }
      if (single) powers.push_back(e);
    }
    for (int x = 0; x < g.order(); ++x) {
      bool ok = true;
      for (i64 e : powers) ok = ok && g.pow(x, e) == g.identity();
      if (ok) domains[v].push_back(x);
    }
  }
  detail::RelatorSearch s(g, n, p.relators, std::move(domains));
  if (pin_J) s.fix(*p.J, g.J());
  std::size_t count = 0;
  s.run([&](const std::vector<int>& vals) {
    ++count;
    return visit(vals);
  });
  return count;
}

inline std::vector<Hom> enumerate_homs(const Presentation& p, const FinGroupJ& g, bool pin_J = true) {
  std::vector<Hom> out;
  for_each_hom(p, g, pin_J, [&](const std::vector<int>& v) {
    out.push_back({v});
    return true;
  });
  std::sort(out.begin(), out.end());
  return out;
}

inline std::size_t count_homs(const Presentation& p, const FinGroupJ& g, bool pin_J = true) {
  return for_each_hom(p, g, pin_J, [](const std::vector<int>&) { return true; });
}

// Assignments T: columns -> G_(d) with commuting values on each row support and
// prod_j T(v_j)^{A_ij} = J^{b_i}. Sorted lexicographically.
inline std::vector<std::vector<int>> solutions(const LinearSystem& s, const FinGroupJ& g, std::size_t limit = SIZE_MAX) {
  const i64 d = s.d();
  if (g.d() != d)
    throw std::invalid_argument("group J has order " + std::to_string(g.d()) + " but the system is over Z_" +
                                std::to_string(d));
  const int n = static_cast<int>(s.cols());
  // Variables 0..n-1 are the columns, variable n is pinned to J.
  std::vector<Word> cons;
  std::vector<std::vector<char>> paired(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < s.rows(); ++i) {
    const auto sup = s.support(i);
    for (std::size_t a = 0; a < sup.size(); ++a)
      for (std::size_t b = a + 1; b < sup.size(); ++b)
        if (!paired[sup[a]][sup[b]]) {
          paired[sup[a]][sup[b]] = 1;
          cons.push_back(commutator_word(static_cast<int>(sup[a]), static_cast<int>(sup[b])));
        }
  }
  for (std::size_t i = 0; i < s.rows(); ++i) {
    Word w;
    const auto sup = s.support(i);
    for (std::size_t j : sup) w.push_back({static_cast<int>(j), s.A.at(i, j)});
    w.push_back({n, -s.b[i]});
    cons.push_back(free_reduce(w));
    // With a unit coefficient a, T(v)^a = y determines T(v) = y^{a^{-1} mod d} on d-torsion elements.
    for (std::size_t j : sup) {
      const i64 a = s.A.at(i, j);
      if (a == 1 || std::gcd(a, d) != 1) continue;
      const i64 ainv = mod_inverse(a, d);
      Word rest;
      for (std::size_t k : sup)
        if (k != j) rest.push_back({static_cast<int>(k), s.A.at(i, k)});
      rest.push_back({n, -s.b[i]});
      // v^{-1} (J^{b} rest^{-1})^{a^{-1}} = 1
      Word sol = power(inverse(free_reduce(rest)), ainv);
      Word c{{static_cast<int>(j), -1}};
      c.insert(c.end(), sol.begin(), sol.end());
      cons.push_back(free_reduce(c));
    }
  }
  std::vector<std::vector<int>> domains(n + 1, g.torsion());
  domains[n] = {g.J()};
  detail::RelatorSearch search(g, n + 1, std::move(cons), std::move(domains));
  search.fix(n, g.J());
  std::vector<std::vector<int>> out;
  search.run([&](const std::vector<int>& vals) {
    out.emplace_back(vals.begin(), vals.begin() + n);
    return out.size() < limit;
  });
  std::sort(out.begin(), out.end());
  return out;
}

inline bool is_solution(const LinearSystem& s, const FinGroupJ& g, const std::vector<int>& T) {
  const i64 d = s.d();
  if (T.size() != s.cols()) return false;
  for (int x : T)
    if (!g.is_torsion(x, d)) return false;
  for (std::size_t i = 0; i < s.rows(); ++i) {
    const auto sup = s.support(i);
    for (std::size_t a = 0; a < sup.size(); ++a)
      for (std::size_t b = a + 1; b < sup.size(); ++b)
        if (!g.commute(T[sup[a]], T[sup[b]])) return false;
    int x = g.identity();
    for (std::size_t j : sup) x = g.mul(x, g.pow(T[j], s.A.at(i, j)));
    if (x != g.pow(g.J(), s.b[i])) return false;
  }
  return true;
}

// One factor of the prime-power splitting of a solution over Z_d.
struct PrimePowerPart {
  i64 modulus;       // p^alpha dividing d
  i64 exponent;      // e = 1 mod p^alpha, e = 0 mod d / p^alpha
  LinearSystem system;
  FinGroupJ group;   // same group, J replaced by J^e
  std::vector<int> T;
};

inline std::vector<std::pair<i64, int>> factorize(i64 n) {
  std::vector<std::pair<i64, int>> out;
  for (i64 p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      int k = 0;
      while (n % p == 0) n /= p, ++k;
      out.push_back({p, k});
    }
  if (n > 1) out.push_back({n, 1});
  return out;
}

// T -> (T^{e_i}) with (A mod d_i, b mod d_i) over the d_i-torsion part.
inline std::vector<PrimePowerPart> prime_power_parts(const LinearSystem& s, const FinGroupJ& g, const std::vector<int>& T) {
  const i64 d = s.d();
  std::vector<PrimePowerPart> out;
  for (auto [p, k] : factorize(d)) {
    i64 di = 1;
    for (int i = 0; i < k; ++i) di *= p;
    const i64 q = d / di;
    const i64 e = mod_reduce(q * (di == 1 ? 0 : mod_inverse(mod_reduce(q, di), di)), d);
    std::vector<ZVec> rows;
    for (std::size_t i = 0; i < s.rows(); ++i) rows.push_back(s.A.row(i));
    LinearSystem si(ZModMatrix(di, rows), s.b, s.row_labels, s.col_labels);
    FinGroupJ gi(g, g.pow(g.J(), e), di, g.label() + "^" + std::to_string(e));
    std::vector<int> Ti;
    for (int x : T) Ti.push_back(g.pow(x, e));
    out.push_back({di, e, std::move(si), std::move(gi), std::move(Ti)});
  }
  return out;
}


}  // namespace lcs
