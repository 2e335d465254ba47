#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lcs/group.hpp"
#include "lcs/presentation.hpp"

namespace lcs {

struct CosetTable {
  int order = 0;
  bool has_table = false;        // false when the order exceeds the Cayley-table cap
  FinGroup group;                // regular representation, coset 0 = identity
  std::vector<int> gen_element;  // element represented by each generator
  std::optional<int> J;          // element represented by the distinguished generator
};

namespace detail {

// Hasselgrove-Leech-Trotter coset enumeration over the trivial subgroup.
class CosetEnumerator {
 public:
  CosetEnumerator(int ngens, std::vector<std::vector<int>> rels, std::size_t max_cosets)
      : ng_(ngens), cols_(2 * ngens), rels_(std::move(rels)), max_(max_cosets) {
    new_coset();
  }

  bool run() {
    for (int c = 0; c < static_cast<int>(fwd_.size()); ++c) {
      if (!alive(c)) continue;
      for (const auto& r : rels_) {
        if (!scan_and_fill(c, r)) return false;
        if (!alive(c)) break;
      }
      if (!alive(c)) continue;
      for (int x = 0; x < cols_; ++x)
        if (entry(c, x) < 0) {
          if (!define(c, x)) return false;
        }
    }
    return true;
  }

  // Compact numbering of live cosets, 0 first.
  std::vector<int> live() const {
    std::vector<int> out;
    for (int c = 0; c < static_cast<int>(fwd_.size()); ++c)
      if (alive(c)) out.push_back(c);
    return out;
  }
  int entry(int c, int x) const { return table_[static_cast<std::size_t>(c) * cols_ + x]; }
  static int inv_col(int x) { return x ^ 1; }

 private:
  bool alive(int c) const { return fwd_[c] == c; }
  int& at(int c, int x) { return table_[static_cast<std::size_t>(c) * cols_ + x]; }

  int new_coset() {
    const int c = static_cast<int>(fwd_.size());
    fwd_.push_back(c);
    table_.resize(table_.size() + cols_, -1);
    return c;
  }
  bool define(int c, int x) {
    if (++defined_ > max_) return false;
    const int n = new_coset();
    at(c, x) = n;
    at(n, inv_col(x)) = c;
    return true;
  }
  int rep(int c) {
    int r = c;
    while (fwd_[r] != r) r = fwd_[r];
    while (fwd_[c] != r) {
      int nx = fwd_[c];
      fwd_[c] = r;
      c = nx;
    }
    return r;
  }
  void merge(int a, int b, std::vector<int>& queue) {
    a = rep(a);
    b = rep(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    fwd_[b] = a;
    queue.push_back(b);
  }
  void coincidence(int a, int b) {
    std::vector<int> queue;
    merge(a, b, queue);
    for (std::size_t i = 0; i < queue.size(); ++i) {
      const int e = queue[i];
      for (int x = 0; x < cols_; ++x) {
        const int f = entry(e, x);
        if (f < 0) continue;
        // remove back edge
        if (entry(f, inv_col(x)) == e) at(f, inv_col(x)) = -1;
        const int e1 = rep(e), f1 = rep(f);
        if (entry(e1, x) >= 0) {
          merge(f1, entry(e1, x), queue);
        } else if (entry(f1, inv_col(x)) >= 0) {
          merge(e1, entry(f1, inv_col(x)), queue);
        } else {
          at(e1, x) = f1;
          at(f1, inv_col(x)) = e1;
        }
      }
    }
  }
  bool scan_and_fill(int c, const std::vector<int>& w) {
    const int len = static_cast<int>(w.size());
    if (len == 0) return true;
    int f = c, b = c, i = 0, j = len - 1;
    while (true) {
      while (i <= j && entry(f, w[i]) >= 0) f = entry(f, w[i++]);
      if (i > j) {
        if (f != b) coincidence(f, b);
        return true;
      }
      while (j >= i && entry(b, inv_col(w[j])) >= 0) b = entry(b, inv_col(w[j--]));
      if (j < i) {
        coincidence(f, b);
        return true;
      }
      if (i == j) {
        at(f, w[i]) = b;
        at(b, inv_col(w[i])) = f;
        return true;
      }
      if (!define(f, w[i])) return false;
    }
  }

  int ng_, cols_;
  std::vector<std::vector<int>> rels_;
  std::size_t max_;
  std::size_t defined_ = 1;
  std::vector<int> fwd_;
  std::vector<int> table_;
};

inline std::vector<int> expand_word(const Word& w) {
  std::vector<int> out;
  for (const auto& l : w)
    for (i64 k = 0; k < (l.exp < 0 ? -l.exp : l.exp); ++k) out.push_back(2 * l.gen + (l.exp < 0 ? 1 : 0));
  return out;
}

}  // namespace detail

// Enumerates the cosets of the trivial subgroup. Returns nullopt when the coset cap is hit.
inline std::optional<CosetTable> todd_coxeter(const Presentation& p, std::size_t max_cosets = 1000000) {
  const int ng = p.num_gens();
  std::vector<std::vector<int>> rels;
  for (const auto& r : p.relators) rels.push_back(detail::expand_word(r));
  // Shorter relators first tends to close the table faster.
  std::stable_sort(rels.begin(), rels.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
  detail::CosetEnumerator en(ng, std::move(rels), max_cosets);
  if (!en.run()) return std::nullopt;
  const std::vector<int> live = en.live();
  const int n = static_cast<int>(live.size());
  std::vector<int> idx(live.back() + 1, -1);
  for (int i = 0; i < n; ++i) idx[live[i]] = i;
  const int cols = 2 * ng;
  std::vector<std::vector<int>> act(n, std::vector<int>(cols));
  for (int i = 0; i < n; ++i)
    for (int x = 0; x < cols; ++x) act[i][x] = idx[en.entry(live[i], x)];
  CosetTable out;
  out.order = n;
  for (int g = 0; g < ng; ++g) out.gen_element.push_back(act[0][2 * g]);
  if (p.J) out.J = out.gen_element[*p.J];
  if (n > kMaxGroupOrder) return out;
  // word for every coset
  std::vector<std::vector<int>> word(n);
  std::vector<char> seen(n, 0);
  std::vector<int> bfs{0};
  seen[0] = 1;
  for (std::size_t k = 0; k < bfs.size(); ++k)
    for (int x = 0; x < cols; ++x) {
      const int y = act[bfs[k]][x];
      if (!seen[y]) {
        seen[y] = 1;
        word[y] = word[bfs[k]];
        word[y].push_back(x);
        bfs.push_back(y);
      }
    }
  std::vector<int> table(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      int x = a;
      for (int c : word[b]) x = act[x][c];
      table[static_cast<std::size_t>(a) * n + b] = x;
    }
  out.group = FinGroup(n, std::move(table));
  out.has_table = true;
  return out;
}

inline int evaluate_word(const FinGroup& g, const std::vector<int>& gen_images, const Word& w) {
  int x = g.identity();
  for (const auto& l : w) x = g.mul(x, g.pow(gen_images[l.gen], l.exp));
  return x;
}

// Coset enumeration after Tietze simplification; generator images refer to the original generators.
inline std::optional<CosetTable> todd_coxeter_simplified(const Presentation& p, std::size_t max_cosets = 1000000) {
  const SimplifiedPresentation s = simplify(p);
  auto t = todd_coxeter(s.pres, max_cosets);
  if (!t || !t->has_table) return t;
  std::vector<int> imgs;
  for (const auto& w : s.images) imgs.push_back(evaluate_word(t->group, t->gen_element, w));
  t->gen_element = std::move(imgs);
  if (p.J) t->J = t->gen_element[*p.J];
  return t;
}

}  // namespace lcs
