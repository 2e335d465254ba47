#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "lcs/contextuality.hpp"
#include "lcs/sset.hpp"

namespace lcs {

using nlohmann::json;

// ---------------------------------------------------------------- simplicial sets as JSON

// {"cap":N, "simplices":{"0":[ids],...}, "faces":{"n,i":{id:id}}, "degeneracies":{"n,j":{id:id}}}
// Faces of degree n land in degree n-1; degeneracies of degree n land in degree n+1.
inline json sset_to_json(const TruncatedSSet& x) {
  json out;
  out["cap"] = x.cap();
  out["simplices"] = json::object();
  out["faces"] = json::object();
  out["degeneracies"] = json::object();
  for (int n = 0; n <= x.cap(); ++n) {
    json ids = json::array();
    for (std::size_t s = 0; s < x.size(n); ++s) ids.push_back(x.label(n, static_cast<int>(s)));
    out["simplices"][std::to_string(n)] = ids;
    if (n > 0)
      for (int i = 0; i <= n; ++i) {
        json m = json::object();
        for (std::size_t s = 0; s < x.size(n); ++s)
          m[x.label(n, static_cast<int>(s))] = x.label(n - 1, x.face(n, i, static_cast<int>(s)));
        out["faces"][std::to_string(n) + "," + std::to_string(i)] = m;
      }
    if (n < x.cap())
      for (int j = 0; j <= n; ++j) {
        json m = json::object();
        for (std::size_t s = 0; s < x.size(n); ++s)
          m[x.label(n, static_cast<int>(s))] = x.label(n + 1, x.degen(n, j, static_cast<int>(s)));
        out["degeneracies"][std::to_string(n) + "," + std::to_string(j)] = m;
      }
  }
  return out;
}

namespace detail {

inline std::pair<int, int> parse_map_key(const std::string& k) {
  const auto comma = k.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument("");
    std::size_t p1 = 0, p2 = 0;
    const int n = std::stoi(k.substr(0, comma), &p1);
    const int i = std::stoi(k.substr(comma + 1), &p2);
    if (p1 != comma || p2 != k.size() - comma - 1) throw std::invalid_argument("");
    return {n, i};
  } catch (const std::exception&) {
    throw std::invalid_argument("map key '" + k + "' is not of the form 'n,i'");
  }
}

}  // namespace detail

inline SSetPtr sset_from_json(const json& j, std::string name = "file") {
  if (!j.is_object() || !j.contains("cap") || !j.contains("simplices"))
    throw std::invalid_argument("simplicial set JSON needs 'cap' and 'simplices'");
  const int cap = j.at("cap").get<int>();
  if (cap < 0 || cap > 6) throw std::invalid_argument("cap must lie in 0..6");
  auto x = std::make_shared<TruncatedSSet>(cap, std::move(name));
  const json& simp = j.at("simplices");
  for (int n = 0; n <= cap; ++n) {
    const std::string key = std::to_string(n);
    if (!simp.contains(key)) throw std::invalid_argument("no simplices listed in degree " + key);
    int idx = 0;
    for (const auto& id : simp.at(key)) x->add_simplex(n, Key{idx++}, id.get<std::string>());
  }
  if (x->size(0) == 0) throw std::invalid_argument("a simplicial set file needs at least one vertex");
  auto load_maps = [&](const char* field, bool faces) {
    if (!j.contains(field)) return;
    for (const auto& [k, m] : j.at(field).items()) {
      const auto [n, i] = detail::parse_map_key(k);
      const int tn = faces ? n - 1 : n + 1;
      if (n < 0 || n > cap || tn < 0 || tn > cap || i < 0 || i > n)
        throw std::invalid_argument(std::string(field) + " entry '" + k + "' out of range");
      for (const auto& [src, tgt] : m.items()) {
        const int s = x->index_of_label(n, src);
        const int t = x->index_of_label(tn, tgt.get<std::string>());
        if (faces)
          x->set_face(n, i, s, t);
        else
          x->set_degen(n, i, s, t);
      }
    }
  };
  load_maps("faces", true);
  load_maps("degeneracies", false);
  x->finalize();
  validate(*x);
  return x;
}

inline SSetPtr read_sset(std::istream& in, std::string name = "file") {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
  return sset_from_json(j, std::move(name));
}

// ---------------------------------------------------------------- distributions

// Lines `label a1[,a2] num/den`. The number of outcome entries is the degree. Only degrees 1 and 2
// appear; vertices carry the point mass and unlisted degenerate simplices are filled in from the
// simplex they degenerate from.
inline SimplicialDistribution read_distribution(std::istream& in, SSetPtr host, i64 d) {
  SimplicialDistribution q = SimplicialDistribution::zero(host, d);
  const TruncatedSSet& x = *host;
  std::vector<std::vector<char>> listed(3);
  for (int n = 0; n <= 2; ++n) listed[n].assign(x.size(n), 0);
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw std::invalid_argument("distribution line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string label, outcome, prob, extra;
    if (!(ls >> label)) continue;
    if (!(ls >> outcome >> prob) || (ls >> extra)) fail("expected 'simplex outcome probability'");
    ZVec a;
    std::istringstream os(outcome);
    std::string part;
    while (std::getline(os, part, ',')) {
      std::size_t used = 0;
      i64 v = 0;
      try {
        v = std::stoll(part, &used);
      } catch (const std::exception&) {
        fail("bad outcome '" + outcome + "'");
      }
      if (used != part.size() || v < 0 || v >= d) fail("outcome entries must lie in 0.." + std::to_string(d - 1));
      a.push_back(v);
    }
    const int n = static_cast<int>(a.size());
    if (n < 1 || n > 2) fail("outcomes have one or two entries");
    const auto s = x.find_label(n, label);
    if (!s) fail("unknown simplex '" + label + "' in degree " + std::to_string(n));
    mpq_class v;
    try {
      v = mpq_class(prob);
      if (v.get_den() == 0) throw std::invalid_argument("zero denominator");
      v.canonicalize();
    } catch (const std::exception&) {
      fail("bad probability '" + prob + "'");
    }
    listed[n][*s] = 1;
    q.p[n][*s][encode_outcome(a, d)] += v;
  }
  for (std::size_t s = 0; s < x.size(0); ++s) q.p[0][s][0] = 1;
  for (int n = 1; n <= 2; ++n)
    for (std::size_t s = 0; s < x.size(n); ++s) {
      if (!x.is_degenerate(n, static_cast<int>(s)) || listed[n][s]) continue;
      bool filled = false;
      for (int j = 0; j < n && !filled; ++j)
        for (std::size_t y = 0; y < x.size(n - 1) && !filled; ++y) {
          if (x.degen(n - 1, j, static_cast<int>(y)) != static_cast<int>(s)) continue;
          std::vector<mpq_class> push(outcome_count(d, n), 0);
          for (int o = 0; o < outcome_count(d, n - 1); ++o) push[nzd_degen(d, n - 1, j, o)] += q.p[n - 1][y][o];
          q.p[n][s] = push;
          filled = true;
        }
    }
  validate(q);
  return q;
}

inline void write_distribution(std::ostream& out, const SimplicialDistribution& q) {
  const TruncatedSSet& x = *q.host;
  for (int n = 1; n <= 2; ++n)
    for (int s : x.nondegenerate(n))
      for (int o = 0; o < outcome_count(q.d, n); ++o) {
        const mpq_class& v = q.p[n][s][o];
        if (v == 0) continue;
        const ZVec a = decode_outcome(o, q.d, n);
        out << x.label(n, s) << ' ' << a[0];
        for (std::size_t k = 1; k < a.size(); ++k) out << ',' << a[k];
        out << ' ' << v.get_str() << '\n';
      }
}

// ---------------------------------------------------------------- verdicts

inline json deterministic_to_json(const TruncatedSSet& x, const ZVec& f) {
  json m = json::object();
  for (int e : x.nondegenerate(1)) m[x.label(1, e)] = f[e];
  return m;
}

inline json verdict_to_json(const SimplicialDistribution& q, const Verdict& v) {
  const TruncatedSSet& x = *q.host;
  json out;
  out["verdict"] = v.contextual ? "contextual" : "noncontextual";
  out["verified"] = verify_verdict(q, v);
  if (v.contextual) {
    json terms = json::array();
    for (const auto& t : v.farkas.terms) {
      const ZVec a = decode_outcome(t.outcome, q.d, t.degree);
      terms.push_back({{"simplex", x.label(t.degree, t.simplex)},
                       {"outcome", a},
                       {"coeff", t.coeff.get_str()}});
    }
    out["farkas"] = {{"constant", v.farkas.constant.get_str()},
                     {"value_on_distribution", farkas_value(v.farkas, q).get_str()},
                     {"terms", terms}};
  } else {
    json w = json::array();
    for (const auto& m : v.decomposition)
      w.push_back({{"weight", m.weight.get_str()}, {"assignment", deterministic_to_json(x, m.f)}});
    out["witness"] = w;
  }
  return out;
}

}  // namespace lcs
