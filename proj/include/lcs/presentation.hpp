#pragma once

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcs/zmod.hpp"

namespace lcs {

struct Letter {
  int gen;
  i64 exp;
  friend bool operator==(const Letter& a, const Letter& b) { return a.gen == b.gen && a.exp == b.exp; }
  friend bool operator<(const Letter& a, const Letter& b) { return a.gen != b.gen ? a.gen < b.gen : a.exp < b.exp; }
};
using Word = std::vector<Letter>;

inline Word free_reduce(const Word& w) {
  Word out;
  for (const Letter& l : w) {
    if (l.exp == 0) continue;
    if (!out.empty() && out.back().gen == l.gen) {
      out.back().exp += l.exp;
      if (out.back().exp == 0) out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return out;
}

// Free and cyclic reduction.
inline Word cyclic_reduce(Word w) {
  w = free_reduce(w);
  while (w.size() >= 2 && w.front().gen == w.back().gen) {
    w.front().exp += w.back().exp;
    w.pop_back();
    if (w.front().exp == 0) w.erase(w.begin());
    w = free_reduce(w);
  }
  return w;
}

inline Word inverse(const Word& w) {
  Word out;
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back({it->gen, -it->exp});
  return out;
}

inline Word operator*(const Word& a, const Word& b) {
  Word w = a;
  w.insert(w.end(), b.begin(), b.end());
  return free_reduce(w);
}

inline Word power(const Word& w, i64 k) {
  Word base = k < 0 ? inverse(w) : w;
  Word out;
  for (i64 i = 0; i < (k < 0 ? -k : k); ++i) out.insert(out.end(), base.begin(), base.end());
  return free_reduce(out);
}

inline Word gen_word(int g, i64 e = 1) { return e == 0 ? Word{} : Word{{g, e}}; }

// [a,b] = a^{-1} b^{-1} a b
inline Word commutator_word(int a, int b) { return {{a, -1}, {b, -1}, {a, 1}, {b, 1}}; }

inline i64 word_length(const Word& w) {
  i64 n = 0;
  for (const auto& l : w) n += l.exp < 0 ? -l.exp : l.exp;
  return n;
}

// Replace each generator g by images[g].
inline Word substitute(const Word& w, const std::vector<Word>& images) {
  Word out;
  for (const auto& l : w) {
    const Word p = power(images[l.gen], l.exp);
    out.insert(out.end(), p.begin(), p.end());
  }
  return free_reduce(out);
}

class Presentation {
 public:
  std::vector<std::string> gens;
  std::vector<Word> relators;
  std::optional<int> J;  // distinguished central generator, when present

  int add_gen(const std::string& name) {
    auto it = index_.find(name);
    if (it != index_.end()) throw std::invalid_argument("duplicate generator " + name);
    index_[name] = static_cast<int>(gens.size());
    gens.push_back(name);
    return static_cast<int>(gens.size()) - 1;
  }
  std::optional<int> find_gen(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  int gen(const std::string& name) const {
    auto g = find_gen(name);
    if (!g) throw std::invalid_argument("unknown generator " + name);
    return *g;
  }
  void add_relator(const Word& w) {
    for (const auto& l : w)
      if (l.gen < 0 || l.gen >= static_cast<int>(gens.size())) throw std::invalid_argument("relator uses undeclared generator");
    Word r = free_reduce(w);
    if (!r.empty()) relators.push_back(std::move(r));
  }
  int num_gens() const { return static_cast<int>(gens.size()); }

  std::string format(const Word& w) const {
    if (w.empty()) return "1";
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i) s += " ";
      s += gens[w[i].gen];
      if (w[i].exp != 1) s += "^" + std::to_string(w[i].exp);
    }
    return s;
  }

  std::string to_text() const {
    std::string s = "gens:";
    for (const auto& g : gens) s += " " + g;
    s += "\n";
    for (const auto& r : relators) s += "rel: " + format(r) + "\n";
    return s;
  }

 private:
  std::map<std::string, int> index_;
};

// Parse `gens: a b J` / `rel: a^2` / `rel: [a,b]` / `rel: a b J^-1`. A generator named J is distinguished.
inline Presentation parse_presentation(std::istream& in) {
  Presentation p;
  std::string line;
  int lineno = 0;
  bool have_gens = false;
  auto fail = [&](const std::string& msg) {
    throw std::invalid_argument("presentation line " + std::to_string(lineno) + ": " + msg);
  };
  auto parse_gen_power = [&](const std::string& tok) -> Letter {
    auto caret = tok.find('^');
    const std::string name = tok.substr(0, caret);
    auto g = p.find_gen(name);
    if (!g) fail("unknown generator '" + name + "'");
    i64 e = 1;
    if (caret != std::string::npos) {
      const std::string ex = tok.substr(caret + 1);
      char* end = nullptr;
      e = std::strtoll(ex.c_str(), &end, 10);
      if (ex.empty() || *end != '\0') fail("bad exponent '" + ex + "'");
    }
    return {*g, e};
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "gens:") {
      if (have_gens) fail("duplicate gens line");
      have_gens = true;
      std::string g;
      while (ls >> g) p.add_gen(g);
      if (auto j = p.find_gen("J")) p.J = *j;
    } else if (head == "rel:") {
      if (!have_gens) fail("rel before gens");
      std::string rest;
      std::getline(ls, rest);
      Word w;
      std::size_t i = 0;
      while (i < rest.size()) {
        if (std::isspace(static_cast<unsigned char>(rest[i]))) {
          ++i;
          continue;
        }
        if (rest[i] == '[') {
          auto close = rest.find(']', i);
          if (close == std::string::npos) fail("unterminated commutator");
          const std::string inner = rest.substr(i + 1, close - i - 1);
          auto comma = inner.find(',');
          if (comma == std::string::npos) fail("commutator needs two entries");
          auto trim = [](std::string s) {
            s.erase(0, s.find_first_not_of(" \t"));
            s.erase(s.find_last_not_of(" \t") + 1);
            return s;
          };
          const Letter a = parse_gen_power(trim(inner.substr(0, comma)));
          const Letter b = parse_gen_power(trim(inner.substr(comma + 1)));
          const Word wa{a}, wb{b};
          const Word c = inverse(wa) * inverse(wb) * wa * wb;
          w.insert(w.end(), c.begin(), c.end());
          i = close + 1;
        } else {
          auto j = i;
          while (j < rest.size() && !std::isspace(static_cast<unsigned char>(rest[j])) && rest[j] != '[') ++j;
          w.push_back(parse_gen_power(rest.substr(i, j - i)));
          i = j;
        }
      }
      p.add_relator(w);
    } else {
      fail("expected 'gens:' or 'rel:'");
    }
  }
  if (!have_gens) throw std::invalid_argument("presentation has no gens line");
  return p;
}

// Presentation after Tietze moves, with each original generator expressed in the new ones.
struct SimplifiedPresentation {
  Presentation pres;
  std::vector<Word> images;  // indexed by original generator
  std::optional<Word> J;     // image of the original J
};

// Eliminate generators that occur exactly once (with exponent +-1) in a short relator.
inline SimplifiedPresentation simplify(const Presentation& p, i64 max_relator_len = 4, i64 max_total_len = 2000000) {
  const int n = p.num_gens();
  std::vector<Word> images(n);
  for (int g = 0; g < n; ++g) images[g] = gen_word(g);
  std::vector<Word> rels;
  std::set<Word> seen;
  for (const auto& r : p.relators) {
    Word c = cyclic_reduce(r);
    if (!c.empty() && seen.insert(c).second) rels.push_back(std::move(c));
  }
  std::vector<char> alive(n, 1);
  std::vector<std::set<int>> occurs(n);
  for (std::size_t i = 0; i < rels.size(); ++i)
    for (const auto& l : rels[i]) occurs[l.gen].insert(static_cast<int>(i));
  // Images are expressed in surviving generators lazily: record substitutions and resolve at the end.
  std::vector<std::optional<Word>> subst(n);
  i64 total = 0;
  for (const auto& r : rels) total += word_length(r);

  for (i64 limit = 1; limit <= max_relator_len; ++limit) {
    bool progress = true;
    while (progress) {
      progress = false;
      for (std::size_t ri = 0; ri < rels.size(); ++ri) {
        const Word& r = rels[ri];
        if (r.empty() || word_length(r) > limit) continue;
        // find generator occurring once with exponent +-1
        int pick = -1;
        std::size_t pos = 0;
        for (std::size_t k = 0; k < r.size(); ++k) {
          if (r[k].exp != 1 && r[k].exp != -1) continue;
          int cnt = 0;
          for (const auto& l : r) cnt += l.gen == r[k].gen;
          if (cnt != 1) continue;
          if (pick < 0 || occurs[r[k].gen].size() < occurs[pick].size()) {
            pick = r[k].gen;
            pos = k;
          }
        }
        if (pick < 0) continue;
        // r = U x^e V = 1  =>  x^e = U^{-1} V^{-1}
        const Word U(r.begin(), r.begin() + pos), V(r.begin() + pos + 1, r.end());
        Word val = inverse(U) * inverse(V);
        if (r[pos].exp == -1) val = inverse(val);
        subst[pick] = val;
        alive[pick] = 0;
        std::vector<int> touched(occurs[pick].begin(), occurs[pick].end());
        std::vector<Word> img(n);
        for (int g = 0; g < n; ++g) img[g] = gen_word(g);
        img[pick] = val;
        for (int t : touched) {
          for (const auto& l : rels[t]) occurs[l.gen].erase(t);
          total -= word_length(rels[t]);
          rels[t] = static_cast<std::size_t>(t) == ri ? Word{} : cyclic_reduce(substitute(rels[t], img));
          total += word_length(rels[t]);
          for (const auto& l : rels[t]) occurs[l.gen].insert(t);
        }
        progress = true;
        if (total > max_total_len) break;
      }
      if (total > max_total_len) break;
    }
    if (total > max_total_len) break;
  }

  // Resolve substitutions into surviving generators.
  std::vector<int> newidx(n, -1);
  SimplifiedPresentation out;
  for (int g = 0; g < n; ++g)
    if (alive[g]) newidx[g] = out.pres.add_gen(p.gens[g]);
  std::vector<std::optional<Word>> resolved(n);
  std::function<Word(int)> resolve = [&](int g) -> Word {
    if (resolved[g]) return *resolved[g];
    Word w;
    if (alive[g]) {
      w = gen_word(newidx[g]);
    } else {
      for (const auto& l : *subst[g]) {
        const Word p2 = power(resolve(l.gen), l.exp);
        w.insert(w.end(), p2.begin(), p2.end());
      }
      w = free_reduce(w);
    }
    resolved[g] = w;
    return w;
  };
  for (int g = 0; g < n; ++g) out.images.push_back(resolve(g));
  std::set<Word> dedupe;
  for (const auto& r : rels) {
    if (r.empty()) continue;
    Word w;
    for (const auto& l : r) w.push_back({newidx[l.gen], l.exp});
    w = cyclic_reduce(w);
    if (!w.empty() && dedupe.insert(w).second) out.pres.add_relator(w);
  }
  if (p.J) {
    out.J = out.images[*p.J];
    if (out.J->size() == 1 && out.J->front().exp == 1) out.pres.J = out.J->front().gen;
  }
  return out;
}

}  // namespace lcs
