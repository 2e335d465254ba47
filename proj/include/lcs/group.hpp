#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lcs/zmod.hpp"

namespace lcs {

inline constexpr int kMaxGroupOrder = 4096;

class FinGroup {
 public:
  FinGroup() = default;

  // `table[a*n+b]` is the index of a*b. Validates the group axioms.
  FinGroup(int n, std::vector<int> table, std::vector<std::string> names = {}) : n_(n), t_(std::move(table)) {
    if (n < 1 || n > kMaxGroupOrder)
      throw std::invalid_argument("group order " + std::to_string(n) + " outside [1, " +
                                  std::to_string(kMaxGroupOrder) + "]");
    if (t_.size() != static_cast<std::size_t>(n) * n) throw std::invalid_argument("Cayley table has wrong size");
    for (int x : t_)
      if (x < 0 || x >= n) throw std::invalid_argument("Cayley table entry out of range");
    e_ = -1;
    for (int a = 0; a < n && e_ < 0; ++a) {
      bool ok = true;
      for (int b = 0; b < n && ok; ++b) ok = mul(a, b) == b && mul(b, a) == b;
      if (ok) e_ = a;
    }
    if (e_ < 0) throw std::invalid_argument("Cayley table has no identity");
    inv_.assign(n, -1);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b)
        if (mul(a, b) == e_) {
          if (mul(b, a) != e_) throw std::invalid_argument("one-sided inverse in Cayley table");
          inv_[a] = b;
          break;
        }
      if (inv_[a] < 0) throw std::invalid_argument("element " + std::to_string(a) + " has no inverse");
    }
    check_associativity();
    if (names.empty()) {
      for (int a = 0; a < n; ++a) names.push_back(std::to_string(a));
    }
    if (names.size() != static_cast<std::size_t>(n)) throw std::invalid_argument("wrong number of element names");
    names_ = std::move(names);
  }

  int order() const { return n_; }
  int identity() const { return e_; }
  int mul(int a, int b) const { return t_[static_cast<std::size_t>(a) * n_ + b]; }
  int inv(int a) const { return inv_[a]; }
  int pow(int a, i64 k) const {
    if (k < 0) {
      a = inv(a);
      k = -k;
    }
    int r = e_;
    while (k > 0) {
      if (k & 1) r = mul(r, a);
      a = mul(a, a);
      k >>= 1;
    }
    return r;
  }
  int element_order(int a) const {
    int k = 1;
    for (int x = a; x != e_; x = mul(x, a)) ++k;
    return k;
  }
  bool commute(int a, int b) const { return mul(a, b) == mul(b, a); }
  // [a,b] = a^{-1} b^{-1} a b
  int commutator(int a, int b) const { return mul(mul(inv(a), inv(b)), mul(a, b)); }
  bool is_abelian() const {
    for (int a = 0; a < n_; ++a)
      for (int b = a + 1; b < n_; ++b)
        if (!commute(a, b)) return false;
    return true;
  }
  bool is_torsion(int a, i64 d) const { return pow(a, d) == e_; }
  std::vector<int> torsion(i64 d) const {
    std::vector<int> out;
    for (int a = 0; a < n_; ++a)
      if (is_torsion(a, d)) out.push_back(a);
    return out;
  }
  std::vector<int> center() const {
    std::vector<int> out;
    for (int a = 0; a < n_; ++a) {
      bool c = true;
      for (int b = 0; b < n_ && c; ++b) c = commute(a, b);
      if (c) out.push_back(a);
    }
    return out;
  }
  std::vector<int> generated_subgroup(const std::vector<int>& gens) const {
    std::vector<char> seen(n_, 0);
    std::vector<int> out{e_};
    seen[e_] = 1;
    for (std::size_t i = 0; i < out.size(); ++i)
      for (int g : gens) {
        int x = mul(out[i], g);
        if (!seen[x]) {
          seen[x] = 1;
          out.push_back(x);
        }
      }
    std::sort(out.begin(), out.end());
    return out;
  }
  const std::string& name(int a) const { return names_[a]; }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<int>& table() const { return t_; }

 private:
  void check_associativity() const {
    auto bad = [&](int a, int b, int c) { return mul(mul(a, b), c) != mul(a, mul(b, c)); };
    if (n_ <= 512) {
      for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b) {
          const int ab = mul(a, b);
          for (int c = 0; c < n_; ++c)
            if (mul(ab, c) != mul(a, mul(b, c))) throw std::invalid_argument("Cayley table is not associative");
        }
      return;
    }
    std::mt19937 rng(12345);
    std::uniform_int_distribution<int> pick(0, n_ - 1);
    for (int k = 0; k < 100000; ++k)
      if (bad(pick(rng), pick(rng), pick(rng))) throw std::invalid_argument("Cayley table is not associative");
  }

  int n_ = 0;
  int e_ = 0;
  std::vector<int> t_;
  std::vector<int> inv_;
  std::vector<std::string> names_;
};

// A finite group with a central element J of order d.
class FinGroupJ : public FinGroup {
 public:
  FinGroupJ() = default;
  FinGroupJ(FinGroup g, int J, i64 d, std::string label = "") : FinGroup(std::move(g)), J_(J), d_(d), label_(std::move(label)) {
    check_modulus(d);
    if (J < 0 || J >= order()) throw std::invalid_argument("J index out of range");
    if (element_order(J) != d)
      throw std::invalid_argument("J has order " + std::to_string(element_order(J)) + ", expected " + std::to_string(d));
    for (int b = 0; b < order(); ++b)
      if (!commute(J, b)) throw std::invalid_argument("J is not central");
  }
  int J() const { return J_; }
  i64 d() const { return d_; }
  const std::string& label() const { return label_; }
  std::vector<int> torsion() const { return FinGroup::torsion(d_); }
  bool generated_by_torsion() const { return static_cast<int>(generated_subgroup(torsion()).size()) == order(); }

 private:
  int J_ = 0;
  i64 d_ = 2;
  std::string label_;
};

inline FinGroupJ with_J(const FinGroup& g, int J, i64 d, std::string label = "") {
  return FinGroupJ(g, J, d, std::move(label));
}

// Closure of a generating set under multiplication. `key` maps elements to an
// ordered value used for deduplication.
template <class E, class Mul, class Key>
FinGroup group_from_generators(const E& identity, const std::vector<E>& gens, Mul mul, Key key,
                               std::vector<E>* elements_out = nullptr,
                               std::function<std::string(const E&)> namer = nullptr) {
  using K = decltype(key(identity));
  std::vector<E> elems{identity};
  std::map<K, int> index{{key(identity), 0}};
  std::vector<std::vector<int>> right;  // right[i][g] = index of elems[i]*gens[g]
  std::vector<std::pair<int, int>> parent{{-1, -1}};
  for (std::size_t i = 0; i < elems.size(); ++i) {
    right.emplace_back(gens.size());
    for (std::size_t g = 0; g < gens.size(); ++g) {
      E x = mul(elems[i], gens[g]);
      auto k = key(x);
      auto it = index.find(k);
      if (it == index.end()) {
        if (elems.size() >= static_cast<std::size_t>(kMaxGroupOrder))
          throw std::invalid_argument("generated group exceeds the order cap");
        it = index.emplace(k, static_cast<int>(elems.size())).first;
        elems.push_back(std::move(x));
        parent.emplace_back(static_cast<int>(i), static_cast<int>(g));
      }
      right[i][g] = it->second;
    }
  }
  const int n = static_cast<int>(elems.size());
  std::vector<std::vector<int>> word(n);
  for (int j = 1; j < n; ++j) {
    word[j] = word[parent[j].first];
    word[j].push_back(parent[j].second);
  }
  std::vector<int> table(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int x = i;
      for (int g : word[j]) x = right[x][g];
      table[static_cast<std::size_t>(i) * n + j] = x;
    }
  std::vector<std::string> names;
  if (namer)
    for (const auto& e : elems) names.push_back(namer(e));
  if (elements_out) *elements_out = elems;
  return FinGroup(n, std::move(table), std::move(names));
}

// Subgroup/quotient data for G/N with N normal.
struct Quotient {
  FinGroup group;
  std::vector<int> proj;     // G -> G/N
  std::vector<int> section;  // G/N -> G, minimal-index representative, identity on the trivial coset
};

inline Quotient quotient_by_normal(const FinGroup& g, const std::vector<int>& normal) {
  const int n = g.order();
  std::vector<int> proj(n, -1);
  std::vector<int> reps;
  for (int a = 0; a < n; ++a) {
    if (proj[a] >= 0) continue;
    const int c = static_cast<int>(reps.size());
    reps.push_back(a);
    for (int x : normal) {
      int y = g.mul(a, x);
      if (proj[y] >= 0 && proj[y] != c) throw std::invalid_argument("subgroup is not normal");
      proj[y] = c;
    }
  }
  for (int a = 0; a < n; ++a)
    for (int x : normal)
      if (proj[g.mul(x, a)] != proj[a]) throw std::invalid_argument("subgroup is not normal");
  // Put the identity coset first so the quotient's identity has index 0.
  const int ecoset = proj[g.identity()];
  std::vector<int> order_map(reps.size());
  std::iota(order_map.begin(), order_map.end(), 0);
  std::stable_partition(order_map.begin(), order_map.end(), [&](int c) { return c == ecoset; });
  std::vector<int> renum(reps.size());
  for (std::size_t i = 0; i < order_map.size(); ++i) renum[order_map[i]] = static_cast<int>(i);
  for (auto& p : proj) p = renum[p];
  std::vector<int> section(reps.size());
  for (std::size_t c = 0; c < reps.size(); ++c) section[renum[c]] = reps[c];
  section[0] = g.identity();
  const int q = static_cast<int>(reps.size());
  std::vector<int> table(static_cast<std::size_t>(q) * q);
  std::vector<std::string> names;
  for (int a = 0; a < q; ++a) {
    names.push_back("[" + g.name(section[a]) + "]");
    for (int b = 0; b < q; ++b) table[static_cast<std::size_t>(a) * q + b] = proj[g.mul(section[a], section[b])];
  }
  return {FinGroup(q, std::move(table), std::move(names)), std::move(proj), std::move(section)};
}

struct CentralExtensionData {
  FinGroupJ G;
  FinGroup Gbar;
  std::vector<int> proj;
  std::vector<int> section;
};

inline CentralExtensionData quotient_by_J(const FinGroupJ& g) {
  Quotient q = quotient_by_normal(g, g.generated_subgroup({g.J()}));
  return {g, std::move(q.group), std::move(q.proj), std::move(q.section)};
}

// Exponent k with J^k = x, or nullopt when x is not a power of J.
inline std::optional<i64> j_exponent(const FinGroupJ& g, int x) {
  int y = g.identity();
  for (i64 k = 0; k < g.d(); ++k) {
    if (y == x) return k;
    y = g.mul(y, g.J());
  }
  return std::nullopt;
}

// gamma(a,b) = exponent of J in phi(a)phi(b)phi(ab)^{-1}, as a |Gbar| x |Gbar| table.
struct GroupCocycle {
  int n = 0;
  i64 d = 2;
  std::vector<i64> values;
  i64 operator()(int a, int b) const { return values[static_cast<std::size_t>(a) * n + b]; }
};

inline GroupCocycle cocycle_from_section(const CentralExtensionData& ext) {
  const FinGroupJ& g = ext.G;
  const FinGroup& q = ext.Gbar;
  GroupCocycle c{q.order(), g.d(), std::vector<i64>(static_cast<std::size_t>(q.order()) * q.order())};
  for (int a = 0; a < q.order(); ++a)
    for (int b = 0; b < q.order(); ++b) {
      const int x = g.mul(g.mul(ext.section[a], ext.section[b]), g.inv(ext.section[q.mul(a, b)]));
      auto k = j_exponent(g, x);
      if (!k) throw std::runtime_error("section product is not a power of J: corrupted extension data");
      c.values[static_cast<std::size_t>(a) * c.n + b] = *k;
    }
  return c;
}

inline bool is_group_cocycle(const FinGroup& q, const GroupCocycle& c) {
  for (int g = 0; g < q.order(); ++g)
    for (int h = 0; h < q.order(); ++h)
      for (int k = 0; k < q.order(); ++k)
        if (mod_reduce(c(h, k) - c(q.mul(g, h), k) + c(g, q.mul(h, k)) - c(g, h), c.d) != 0) return false;
  return true;
}

// g -> g^m on d-torsion elements; entries for non-torsion elements are -1.
inline std::vector<int> power_map(const FinGroupJ& g, i64 m) {
  std::vector<int> out(g.order(), -1);
  for (int a : g.torsion()) out[a] = g.pow(a, m);
  for (int a : g.torsion())
    for (int b : g.torsion())
      if (g.commute(a, b) && out[g.mul(a, b)] != g.mul(out[a], out[b]))
        throw std::logic_error("power map is not multiplicative on a commuting pair");
  return out;
}

inline std::optional<std::pair<int, int>> find_torsion_pair(const FinGroup& g, i64 p) {
  const auto tors = g.torsion(p);
  std::vector<char> is_t(g.order(), 0);
  for (int a : tors) is_t[a] = 1;
  for (int a : tors)
    for (int b : tors)
      if (!g.commute(a, b) && is_t[g.mul(g.inv(a), b)]) return std::make_pair(a, b);
  return std::nullopt;
}

// ---------------------------------------------------------------- families

namespace detail {
inline FinGroup table_group(int n, const std::function<int(int, int)>& mul,
                            const std::function<std::string(int)>& name) {
  std::vector<int> t(static_cast<std::size_t>(n) * n);
  std::vector<std::string> names;
  for (int a = 0; a < n; ++a) {
    names.push_back(name(a));
    for (int b = 0; b < n; ++b) t[static_cast<std::size_t>(a) * n + b] = mul(a, b);
  }
  return FinGroup(n, std::move(t), std::move(names));
}
}  // namespace detail

inline FinGroupJ cyclic_group(int n, int jorder = 0) {
  if (jorder == 0) jorder = n;
  if (n < 2 || n % jorder != 0 || jorder < 2)
    throw std::invalid_argument("cyclic:" + std::to_string(n) + ":" + std::to_string(jorder) + " is not valid");
  FinGroup g = detail::table_group(
      n, [n](int a, int b) { return (a + b) % n; }, [](int a) { return std::to_string(a); });
  return FinGroupJ(std::move(g), n / jorder, jorder, "cyclic:" + std::to_string(n));
}

// Dihedral group of the given order (symmetries of an (order/2)-gon), J = half turn.
inline FinGroupJ dihedral_group(int order) {
  const int m = order / 2;
  if (order < 4 || order % 4 != 0) throw std::invalid_argument("dihedral order must be a multiple of 4");
  // element k + m*e  <->  r^k s^e, with s r = r^{-1} s
  FinGroup g = detail::table_group(
      order,
      [m](int a, int b) {
        const int k1 = a % m, e1 = a / m, k2 = b % m, e2 = b / m;
        const int k = ((e1 ? k1 - k2 : k1 + k2) % m + m) % m;
        return k + m * (e1 ^ e2);
      },
      [m](int a) {
        const int k = a % m, e = a / m;
        if (a == 0) return std::string("1");
        std::string s;
        if (k == 1) s = "r";
        if (k > 1) s = "r^" + std::to_string(k);
        if (e) s += "s";
        return s;
      });
  return FinGroupJ(std::move(g), m / 2, 2, "dihedral:" + std::to_string(order));
}

inline FinGroupJ quaternion_group() {
  // element 4*sign + u with u in {1,i,j,k}
  static const int unit[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static const int sgn[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
  FinGroup g = detail::table_group(
      8,
      [](int a, int b) {
        const int ua = a % 4, ub = b % 4;
        const int s = (a / 4 + b / 4 + sgn[ua][ub]) % 2;
        return 4 * s + unit[ua][ub];
      },
      [](int a) {
        static const char* u[4] = {"1", "i", "j", "k"};
        return std::string(a >= 4 ? "-" : "") + u[a % 4];
      });
  return FinGroupJ(std::move(g), 4, 2, "quaternion");
}

inline bool is_prime(i64 p) {
  if (p < 2) return false;
  for (i64 q = 2; q * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

// Upper unitriangular 3x3 matrices over Z_p; J = (0,0,1).
inline FinGroupJ heisenberg_group(int p) {
  if (!is_prime(p)) throw std::invalid_argument("heisenberg needs a prime");
  const int n = p * p * p;
  FinGroup g = detail::table_group(
      n,
      [p](int x, int y) {
        const int a = x % p, b = (x / p) % p, c = x / (p * p);
        const int a2 = y % p, b2 = (y / p) % p, c2 = y / (p * p);
        return (a + a2) % p + p * ((b + b2) % p) + p * p * ((c + c2 + a * b2) % p);
      },
      [p](int x) {
        return "(" + std::to_string(x % p) + "," + std::to_string((x / p) % p) + "," + std::to_string(x / (p * p)) + ")";
      });
  return FinGroupJ(std::move(g), p * p, p, "heisenberg:" + std::to_string(p));
}

// Z_{p^2} x| Z_p with y acting by x -> (1+p)^y x; J = (p,0).
inline FinGroupJ metacyclic_group(int p) {
  if (!is_prime(p) || p == 2) throw std::invalid_argument("metacyclic extraspecial group needs an odd prime");
  const int q = p * p;
  auto act = [q, p](int x, int y) {
    i64 f = 1;
    for (int k = 0; k < y; ++k) f = f * (1 + p) % q;
    return static_cast<int>(x * f % q);
  };
  FinGroup g = detail::table_group(
      q * p,
      [q, p, act](int u, int v) {
        const int x1 = u % q, y1 = u / q, x2 = v % q, y2 = v / q;
        return (x1 + act(x2, y1)) % q + q * ((y1 + y2) % p);
      },
      [q](int u) { return "(" + std::to_string(u % q) + "," + std::to_string(u / q) + ")"; });
  return FinGroupJ(std::move(g), p, p, "metacyclic:" + std::to_string(p));
}

inline FinGroupJ direct_product(const FinGroupJ& a, const FinGroupJ& b) {
  const int na = a.order(), nb = b.order();
  if (static_cast<i64>(na) * nb > kMaxGroupOrder) throw std::invalid_argument("product exceeds the order cap");
  FinGroup g = detail::table_group(
      na * nb,
      [&](int x, int y) { return a.mul(x % na, y % na) + na * b.mul(x / na, y / na); },
      [&](int x) { return "(" + a.name(x % na) + "," + b.name(x / na) + ")"; });
  const int J = a.J() + na * b.identity();
  return FinGroupJ(std::move(g), J, a.d(), "product(" + a.label() + "," + b.label() + ")");
}

// (G x H)/<(J_G, J_H^{-1})> with J the image of (J_G, 1).
inline FinGroupJ central_product(const FinGroupJ& a, const FinGroupJ& b) {
  if (a.d() != b.d()) throw std::invalid_argument("central product needs J elements of equal order");
  const int na = a.order(), nb = b.order();
  if (static_cast<i64>(na) * nb > kMaxGroupOrder) throw std::invalid_argument("central product exceeds the order cap");
  std::vector<int> t(static_cast<std::size_t>(na) * nb * na * nb);
  const int n = na * nb;
  std::vector<std::string> names;
  for (int x = 0; x < n; ++x) {
    names.push_back("(" + a.name(x % na) + "," + b.name(x / na) + ")");
    for (int y = 0; y < n; ++y)
      t[static_cast<std::size_t>(x) * n + y] = a.mul(x % na, y % na) + na * b.mul(x / na, y / na);
  }
  FinGroup prod(n, std::move(t), std::move(names));
  const int z = a.J() + na * b.inv(b.J());
  Quotient q = quotient_by_normal(prod, prod.generated_subgroup({z}));
  const int J = q.proj[a.J() + na * b.identity()];
  return FinGroupJ(std::move(q.group), J, a.d(), "central_product(" + a.label() + "," + b.label() + ")");
}

// Z_p wr Z_p = Z_p^p x| Z_p (cyclic shift), J = all-ones vector.
inline FinGroupJ wreath_group(int p) {
  if (!is_prime(p)) throw std::invalid_argument("wreath needs a prime");
  int base = 1;
  for (int i = 0; i < p; ++i) base *= p;
  if (static_cast<i64>(base) * p > kMaxGroupOrder) throw std::invalid_argument("wreath product exceeds the order cap");
  using E = std::vector<int>;  // p coordinates then shift
  auto mul = [p](const E& x, const E& y) {
    E z(p + 1);
    for (int i = 0; i < p; ++i) z[i] = (x[i] + y[((i - x[p]) % p + p) % p]) % p;
    z[p] = (x[p] + y[p]) % p;
    return z;
  };
  E id(p + 1, 0), shift(p + 1, 0), unit(p + 1, 0);
  shift[p] = 1;
  unit[0] = 1;
  std::vector<E> elems;
  auto namer = [](const E& x) {
    std::string s = "(";
    for (std::size_t i = 0; i + 1 < x.size(); ++i) s += std::to_string(x[i]);
    return s + ";" + std::to_string(x.back()) + ")";
  };
  FinGroup g = group_from_generators(id, std::vector<E>{shift, unit}, mul, [](const E& x) { return x; }, &elems,
                                    std::function<std::string(const E&)>(namer));
  E ones(p + 1, 1);
  ones[p] = 0;
  const int J = static_cast<int>(std::find(elems.begin(), elems.end(), ones) - elems.begin());
  return FinGroupJ(std::move(g), J, p, "wreath:" + std::to_string(p));
}

// Extraspecial 2-groups and odd-prime extraspecial groups of exponent p.
inline FinGroupJ extraspecial_group(int p, int n, char type) {
  if (!is_prime(p) || n < 1) throw std::invalid_argument("extraspecial needs a prime p and n >= 1");
  if (p == 2) {
    FinGroupJ g;
    if (type == '+' || type == '0') {
      g = dihedral_group(8);
      for (int i = 1; i < n; ++i) g = central_product(g, dihedral_group(8));
      if (type == '0') g = central_product(g, cyclic_group(4, 2));
    } else if (type == '-') {
      g = quaternion_group();
      for (int i = 1; i < n; ++i) g = central_product(dihedral_group(8), g);
    } else {
      throw std::invalid_argument(std::string("unknown extraspecial type ") + type);
    }
    return FinGroupJ(g, g.J(), 2, "extraspecial:2:" + std::to_string(n) + ":" + type);
  }
  FinGroupJ g;
  if (type == '+') {
    g = heisenberg_group(p);
    for (int i = 1; i < n; ++i) g = central_product(g, heisenberg_group(p));
  } else if (type == '-') {
    g = metacyclic_group(p);
    for (int i = 1; i < n; ++i) g = central_product(heisenberg_group(p), g);
  } else {
    throw std::invalid_argument("type 0 extraspecial groups exist only for p = 2");
  }
  return FinGroupJ(g, g.J(), p, "extraspecial:" + std::to_string(p) + ":" + std::to_string(n) + ":" + type);
}

// ---------------------------------------------------------------- monomial groups

// D(xi) X^b acting on C^p. Phases are exponents of a primitive p^m-th root of unity.
struct MonomialElement {
  int p = 3;
  int m = 1;
  std::vector<int> diag;
  int shift = 0;

  int modulus() const {
    int q = 1;
    for (int i = 0; i < m; ++i) q *= p;
    return q;
  }
  static MonomialElement identity(int p, int m) { return {p, m, std::vector<int>(p, 0), 0}; }
  friend bool operator==(const MonomialElement& a, const MonomialElement& b) {
    return a.p == b.p && a.m == b.m && a.diag == b.diag && a.shift == b.shift;
  }
  friend bool operator<(const MonomialElement& a, const MonomialElement& b) {
    return std::tie(a.shift, a.diag) < std::tie(b.shift, b.diag);
  }
  void check() const {
    int s = 0;
    for (int x : diag) s += x;
    if (static_cast<int>(diag.size()) != p || s % modulus() != 0)
      throw std::invalid_argument("monomial element does not have determinant one");
  }
};

// (D(xi)X^b)(D(xi')X^b') = D(xi * X^b xi' X^-b) X^{b+b'}
inline MonomialElement operator*(const MonomialElement& x, const MonomialElement& y) {
  const int q = x.modulus();
  MonomialElement z{x.p, x.m, std::vector<int>(x.p), (x.shift + y.shift) % x.p};
  for (int k = 0; k < x.p; ++k) z.diag[k] = (x.diag[k] + y.diag[((k - x.shift) % x.p + x.p) % x.p]) % q;
  return z;
}

inline std::string monomial_name(const MonomialElement& x) {
  std::string s = "D(";
  for (int i = 0; i < x.p; ++i) s += (i ? "," : "") + std::to_string(x.diag[i]);
  return s + ")X^" + std::to_string(x.shift);
}

struct MonomialGroup {
  FinGroupJ group;
  std::vector<MonomialElement> elements;
  int index_of(const MonomialElement& x) const {
    auto it = std::find(elements.begin(), elements.end(), x);
    if (it == elements.end()) throw std::invalid_argument("element not in group: " + monomial_name(x));
    return static_cast<int>(it - elements.begin());
  }
};

inline MonomialGroup build_e1(int p, int m) {
  if (!is_prime(p) || p == 2) throw std::invalid_argument("e1 needs an odd prime");
  if (m < 1 || m > 2) throw std::invalid_argument("e1 supports m in {1,2} only");
  const MonomialElement id = MonomialElement::identity(p, m);
  const int q = id.modulus();
  std::vector<MonomialElement> gens;
  MonomialElement x = id;
  x.shift = 1;
  gens.push_back(x);
  for (int k = 1; k < p; ++k) {
    MonomialElement t = id;
    t.diag[0] = 1;
    t.diag[k] = q - 1;
    gens.push_back(t);
  }
  std::vector<MonomialElement> elems;
  FinGroup g = group_from_generators(
      id, gens, [](const MonomialElement& a, const MonomialElement& b) { return a * b; },
      [](const MonomialElement& a) { return std::make_pair(a.shift, a.diag); }, &elems,
      std::function<std::string(const MonomialElement&)>(monomial_name));
  MonomialElement jay = id;
  for (auto& v : jay.diag) v = q / p;
  MonomialGroup out{FinGroupJ(), std::move(elems)};
  const int J = out.index_of(jay);
  out.group = FinGroupJ(std::move(g), J, p, "e1:" + std::to_string(p) + ":" + std::to_string(m));
  return out;
}

// E_1(p) -> E_1(p^2): multiply phases by p.
inline MonomialElement embed_e1(const MonomialElement& x) {
  if (x.m != 1) throw std::invalid_argument("embedding expects an element of E_1(p)");
  MonomialElement y{x.p, 2, x.diag, x.shift};
  for (auto& v : y.diag) v *= x.p;
  return y;
}

// Coefficients nu_b with f(q) = sum_b nu_b q^b over Z_p, from the values f(0..p-1).
inline std::vector<int> interpolate_mod_p(const std::vector<int>& values, int p) {
  // Solve the Vandermonde system by Gaussian elimination over Z_p.
  std::vector<ZVec> rows(p, ZVec(p + 1));
  for (int qv = 0; qv < p; ++qv) {
    i64 pw = 1;
    for (int b = 0; b < p; ++b) {
      rows[qv][b] = pw;
      pw = pw * qv % p;
    }
    rows[qv][p] = mod_reduce(values[qv], p);
  }
  for (int c = 0; c < p; ++c) {
    int piv = c;
    while (piv < p && rows[piv][c] == 0) ++piv;
    if (piv == p) throw std::runtime_error("interpolation failed");
    std::swap(rows[c], rows[piv]);
    const i64 inv = mod_inverse(rows[c][c], p);
    for (auto& v : rows[c]) v = v * inv % p;
    for (int r = 0; r < p; ++r)
      if (r != c && rows[r][c] != 0) detail::combine(rows[r], rows[c], 1, -rows[r][c], p);
  }
  std::vector<int> nu(p);
  for (int b = 0; b < p; ++b) nu[b] = static_cast<int>(rows[b][p]);
  return nu;
}

inline MonomialElement phi_frembs(const MonomialElement& x) {
  if (x.m != 2) throw std::invalid_argument("phi_frembs is defined for m = 2 only");
  x.check();
  const int p = x.p;
  if (x.shift > 1) {
    const int binv = static_cast<int>(mod_inverse(x.shift, p));
    MonomialElement y = MonomialElement::identity(p, 2);
    for (int k = 0; k < binv; ++k) y = y * x;
    const MonomialElement z = phi_frembs(y);
    MonomialElement out = MonomialElement::identity(p, 1);
    for (int k = 0; k < x.shift; ++k) out = out * z;
    return out;
  }
  std::vector<int> f1(p), f2(p);
  for (int qv = 0; qv < p; ++qv) {
    f1[qv] = x.diag[qv] / p;
    f2[qv] = x.diag[qv] % p;
  }
  const std::vector<int> nu1 = interpolate_mod_p(f1, p), nu2 = interpolate_mod_p(f2, p);
  MonomialElement out{p, 1, std::vector<int>(p), x.shift};
  const int c = x.shift == 0 ? nu1[0] + nu2[0] : nu1[0];
  for (int qv = 0; qv < p; ++qv) out.diag[qv] = (c + nu1[1] * qv) % p;
  out.check();
  return out;
}

// ---------------------------------------------------------------- isomorphism search

// Small generating set chosen greedily by element index.
inline std::vector<int> generating_set(const FinGroup& g) {
  std::vector<int> gens;
  std::vector<int> span{g.identity()};
  for (int a = 0; a < g.order() && static_cast<int>(span.size()) < g.order(); ++a) {
    if (std::binary_search(span.begin(), span.end(), a)) continue;
    gens.push_back(a);
    span = g.generated_subgroup(gens);
  }
  return gens;
}

// Brute-force isomorphism search; returns an element map a -> b or nullopt.
// When `preserve_J` is set both groups must carry J and the map must send J to J.
inline std::optional<std::vector<int>> find_isomorphism(const FinGroup& a, const FinGroup& b,
                                                        std::optional<std::pair<int, int>> fixed = std::nullopt) {
  if (a.order() != b.order()) return std::nullopt;
  const int n = a.order();
  std::vector<int> gens = generating_set(a);
  if (fixed) gens.insert(gens.begin(), fixed->first);
  // words expressing every element of a in the generators (BFS)
  std::vector<int> par(n, -2), pgen(n, -1);
  par[a.identity()] = -1;
  std::vector<int> bfs{a.identity()};
  for (std::size_t i = 0; i < bfs.size(); ++i)
    for (std::size_t k = 0; k < gens.size(); ++k) {
      const int x = a.mul(bfs[i], gens[k]);
      if (par[x] == -2) {
        par[x] = bfs[i];
        pgen[x] = static_cast<int>(k);
        bfs.push_back(x);
      }
    }
  std::vector<int> img(gens.size(), -1);
  std::vector<int> ord_b(n);
  for (int x = 0; x < n; ++x) ord_b[x] = b.element_order(x);

  std::function<std::optional<std::vector<int>>(std::size_t)> rec = [&](std::size_t k) -> std::optional<std::vector<int>> {
    if (k == gens.size()) {
      std::vector<int> f(n, -1);
      f[a.identity()] = b.identity();
      for (std::size_t i = 1; i < bfs.size(); ++i) {
        const int x = bfs[i];
        f[x] = b.mul(f[par[x]], img[pgen[x]]);
      }
      std::vector<char> hit(n, 0);
      for (int x = 0; x < n; ++x) {
        if (hit[f[x]]) return std::nullopt;
        hit[f[x]] = 1;
      }
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          if (f[a.mul(x, y)] != b.mul(f[x], f[y])) return std::nullopt;
      return f;
    }
    const int want = a.element_order(gens[k]);
    std::vector<int> cands;
    if (fixed && k == 0)
      cands = {fixed->second};
    else
      for (int y = 0; y < n; ++y)
        if (ord_b[y] == want) cands.push_back(y);
    for (int y : cands) {
      bool ok = true;
      for (std::size_t j = 0; j < k && ok; ++j) ok = a.commute(gens[j], gens[k]) == b.commute(img[j], y);
      if (!ok) continue;
      img[k] = y;
      if (auto r = rec(k + 1)) return r;
    }
    return std::nullopt;
  };
  return rec(0);
}

inline bool is_elementary_abelian(const FinGroup& g, int p) {
  if (!g.is_abelian()) return false;
  for (int a = 0; a < g.order(); ++a)
    if (g.pow(a, p) != g.identity()) return false;
  return true;
}

}  // namespace lcs
