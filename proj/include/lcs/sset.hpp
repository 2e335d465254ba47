#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace lcs {

using Key = std::vector<int>;

struct KeyHash {
  std::size_t operator()(const Key& k) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (int x : k) h = (h ^ static_cast<std::size_t>(x + 0x9e3779b9)) * 1099511628211ull;
    return h;
  }
};

// A simplicial set stored in degrees 0..cap. Simplices of degree n are indices 0..size(n)-1,
// each with a key (structural identity) and a label (human-readable id, unique per degree).
class TruncatedSSet {
 public:
  TruncatedSSet(int cap, std::string name) : cap_(cap), name_(std::move(name)) {
    if (cap < 0) throw std::invalid_argument("negative dimension cap");
    keys_.resize(cap + 1);
    labels_.resize(cap + 1);
    key_index_.resize(cap + 1);
    label_index_.resize(cap + 1);
    faces_.resize(cap + 1);
    degens_.resize(cap + 1);
    degenerate_.resize(cap + 1);
    for (int n = 0; n <= cap; ++n) {
      faces_[n].resize(n == 0 ? 0 : n + 1);
      degens_[n].resize(n < cap ? n + 1 : 0);
    }
  }

  int cap() const { return cap_; }
  const std::string& name() const { return name_; }
  std::size_t size(int n) const { return keys_.at(n).size(); }
  int face(int n, int i, int s) const { return faces_[n][i][s]; }
  int degen(int n, int j, int s) const { return degens_[n][j][s]; }
  bool is_degenerate(int n, int s) const { return degenerate_[n][s]; }
  std::vector<int> nondegenerate(int n) const {
    std::vector<int> out;
    for (std::size_t s = 0; s < size(n); ++s)
      if (!is_degenerate(n, static_cast<int>(s))) out.push_back(static_cast<int>(s));
    return out;
  }
  const Key& key(int n, int s) const { return keys_[n][s]; }
  const std::string& label(int n, int s) const { return labels_[n][s]; }
  std::optional<int> find_key(int n, const Key& k) const {
    auto it = key_index_[n].find(k);
    if (it == key_index_[n].end()) return std::nullopt;
    return it->second;
  }
  std::optional<int> find_label(int n, const std::string& l) const {
    if (n < 0 || n > cap_) return std::nullopt;
    auto it = label_index_[n].find(l);
    if (it == label_index_[n].end()) return std::nullopt;
    return it->second;
  }
  int index_of_label(int n, const std::string& l) const {
    auto s = find_label(n, l);
    if (!s) throw std::invalid_argument("no simplex '" + l + "' in degree " + std::to_string(n) + " of " + name_);
    return *s;
  }
  int index_of_key(int n, const Key& k) const {
    auto s = find_key(n, k);
    if (!s) {
      std::string ks;
      for (int x : k) ks += std::to_string(x) + " ";
      throw std::invalid_argument("simplex with key [" + ks + "] missing in degree " + std::to_string(n) + " of " + name_);
    }
    return *s;
  }
  // Basepoint vertex (index 0 by construction).
  int basepoint() const { return 0; }

  // Construction interface.
  int add_simplex(int n, Key k, std::string label) {
    const int idx = static_cast<int>(keys_[n].size());
    if (!key_index_[n].emplace(k, idx).second) throw std::invalid_argument("duplicate simplex key in degree " + std::to_string(n));
    if (!label_index_[n].emplace(label, idx).second)
      throw std::invalid_argument("duplicate simplex label '" + label + "' in degree " + std::to_string(n));
    keys_[n].push_back(std::move(k));
    labels_[n].push_back(std::move(label));
    return idx;
  }
  void set_face(int n, int i, int s, int t) {
    auto& v = faces_[n][i];
    if (v.size() < size(n)) v.resize(size(n), -1);
    v[s] = t;
  }
  void set_degen(int n, int j, int s, int t) {
    auto& v = degens_[n][j];
    if (v.size() < size(n)) v.resize(size(n), -1);
    v[s] = t;
  }
  // Checks that all structure maps are total and marks degenerate simplices.
  void finalize() {
    for (int n = 0; n <= cap_; ++n) {
      for (auto& v : faces_[n]) {
        v.resize(size(n), -1);
        for (int t : v)
          if (t < 0) throw std::invalid_argument(name_ + ": face map undefined in degree " + std::to_string(n));
      }
      for (auto& v : degens_[n]) {
        v.resize(size(n), -1);
        for (int t : v)
          if (t < 0) throw std::invalid_argument(name_ + ": degeneracy map undefined in degree " + std::to_string(n));
      }
      degenerate_[n].assign(size(n), 0);
    }
    for (int n = 0; n < cap_; ++n)
      for (auto& v : degens_[n])
        for (int t : v) degenerate_[n + 1][t] = 1;
  }

 private:
  int cap_;
  std::string name_;
  std::vector<std::vector<Key>> keys_;
  std::vector<std::vector<std::string>> labels_;
  std::vector<std::unordered_map<Key, int, KeyHash>> key_index_;
  std::vector<std::unordered_map<std::string, int>> label_index_;
  std::vector<std::vector<std::vector<int>>> faces_;   // [n][i][s]
  std::vector<std::vector<std::vector<int>>> degens_;  // [n][j][s]
  std::vector<std::vector<char>> degenerate_;
};

using SSetPtr = std::shared_ptr<const TruncatedSSet>;

// Builds a truncated simplicial set from a model exposing
//   std::vector<Key> simplices(int n), Key face(int n, int i, const Key&),
//   Key degen(int n, int j, const Key&), std::string label(int n, const Key&).
template <class Model>
SSetPtr build_sset(const Model& m, int cap, std::string name) {
  auto x = std::make_shared<TruncatedSSet>(cap, std::move(name));
  for (int n = 0; n <= cap; ++n)
    for (auto& k : m.simplices(n)) {
      std::string l = m.label(n, k);
      x->add_simplex(n, std::move(k), std::move(l));
    }
  for (int n = 1; n <= cap; ++n)
    for (std::size_t s = 0; s < x->size(n); ++s)
      for (int i = 0; i <= n; ++i)
        x->set_face(n, i, static_cast<int>(s), x->index_of_key(n - 1, m.face(n, i, x->key(n, static_cast<int>(s)))));
  for (int n = 0; n < cap; ++n)
    for (std::size_t s = 0; s < x->size(n); ++s)
      for (int j = 0; j <= n; ++j)
        x->set_degen(n, j, static_cast<int>(s), x->index_of_key(n + 1, m.degen(n, j, x->key(n, static_cast<int>(s)))));
  x->finalize();
  return x;
}

// Simplicial identities up to the cap. Returns a description of the first failure, if any.
inline std::optional<std::string> check_simplicial_identities(const TruncatedSSet& x) {
  auto where = [&](const std::string& what, int n, int s) {
    return x.name() + ": " + what + " fails on " + x.label(n, s) + " (degree " + std::to_string(n) + ")";
  };
  for (int n = 2; n <= x.cap(); ++n)
    for (std::size_t s0 = 0; s0 < x.size(n); ++s0) {
      const int s = static_cast<int>(s0);
      for (int j = 1; j <= n; ++j)
        for (int i = 0; i < j; ++i)
          if (x.face(n - 1, i, x.face(n, j, s)) != x.face(n - 1, j - 1, x.face(n, i, s)))
            return where("d_i d_j = d_{j-1} d_i", n, s);
    }
  for (int n = 0; n < x.cap(); ++n)
    for (std::size_t s0 = 0; s0 < x.size(n); ++s0) {
      const int s = static_cast<int>(s0);
      for (int j = 0; j <= n; ++j) {
        const int t = x.degen(n, j, s);
        for (int i = 0; i <= n + 1; ++i) {
          const int f = x.face(n + 1, i, t);
          if (i == j || i == j + 1) {
            if (f != s) return where("d_j s_j = d_{j+1} s_j = id", n, s);
          } else if (n >= 1) {
            const int expect = i < j ? x.degen(n - 1, j - 1, x.face(n, i, s)) : x.degen(n - 1, j, x.face(n, i - 1, s));
            if (f != expect) return where("d_i s_j mixed identity", n, s);
          }
        }
        if (n + 1 < x.cap())
          for (int i = 0; i <= j; ++i)
            if (x.degen(n + 1, i, x.degen(n, j, s)) != x.degen(n + 1, j + 1, x.degen(n, i, s)))
              return where("s_i s_j = s_{j+1} s_i", n, s);
      }
    }
  return std::nullopt;
}

inline void validate(const TruncatedSSet& x) {
  if (auto e = check_simplicial_identities(x)) throw std::invalid_argument(*e);
}

// A degreewise map between truncated simplicial sets.
struct SMap {
  SSetPtr src, tgt;
  std::vector<std::vector<int>> f;  // [n][s]

  int cap() const { return std::min(src->cap(), tgt->cap()); }
  int operator()(int n, int s) const { return f[n][s]; }
};

inline std::optional<std::string> check_smap(const SMap& m) {
  const int cap = m.cap();
  for (int n = 0; n <= cap; ++n) {
    if (m.f.size() <= static_cast<std::size_t>(n) || m.f[n].size() != m.src->size(n))
      return "map undefined in degree " + std::to_string(n);
    for (std::size_t s0 = 0; s0 < m.src->size(n); ++s0) {
      const int s = static_cast<int>(s0);
      const int t = m.f[n][s];
      if (t < 0 || static_cast<std::size_t>(t) >= m.tgt->size(n)) return "image out of range in degree " + std::to_string(n);
      if (n >= 1)
        for (int i = 0; i <= n; ++i)
          if (m.f[n - 1][m.src->face(n, i, s)] != m.tgt->face(n, i, t))
            return "face d_" + std::to_string(i) + " does not commute at " + m.src->label(n, s);
      if (n < cap)
        for (int j = 0; j <= n; ++j)
          if (m.f[n + 1][m.src->degen(n, j, s)] != m.tgt->degen(n, j, t))
            return "degeneracy s_" + std::to_string(j) + " does not commute at " + m.src->label(n, s);
    }
  }
  return std::nullopt;
}

inline void validate(const SMap& m) {
  if (auto e = check_smap(m)) throw std::invalid_argument("not a simplicial map " + m.src->name() + " -> " + m.tgt->name() + ": " + *e);
}

// Builds an SMap from a key-level function.
inline SMap smap_from_keys(SSetPtr src, SSetPtr tgt, int cap, const std::function<Key(int, const Key&)>& fn) {
  SMap m{src, tgt, {}};
  for (int n = 0; n <= cap; ++n) {
    m.f.emplace_back();
    for (std::size_t s = 0; s < src->size(n); ++s) m.f[n].push_back(tgt->index_of_key(n, fn(n, src->key(n, static_cast<int>(s)))));
  }
  return m;
}

inline SMap compose(const SMap& g, const SMap& f) {
  if (f.tgt != g.src) throw std::invalid_argument("maps are not composable");
  SMap h{f.src, g.tgt, {}};
  const int cap = std::min(f.cap(), g.cap());
  for (int n = 0; n <= cap; ++n) {
    h.f.emplace_back();
    for (int t : f.f[n]) h.f[n].push_back(g.f[n][t]);
  }
  return h;
}

inline bool is_bijective(const SMap& m) {
  for (int n = 0; n <= m.cap(); ++n) {
    if (m.src->size(n) != m.tgt->size(n)) return false;
    std::vector<char> hit(m.tgt->size(n), 0);
    for (int t : m.f[n]) {
      if (hit[t]) return false;
      hit[t] = 1;
    }
  }
  return true;
}

}  // namespace lcs
