#pragma once

#include <chrono>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "lcs/abelian.hpp"
#include "lcs/cohomology.hpp"
#include "lcs/contextuality.hpp"
#include "lcs/fundamental.hpp"
#include "lcs/group_spec.hpp"
#include "lcs/homs.hpp"
#include "lcs/simplicial.hpp"
#include "lcs/todd_coxeter.hpp"

namespace lcs {

enum class Status { pass, fail, inconclusive };

inline const char* status_name(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    default: return "inconclusive";
  }
}

struct CheckResult {
  int criterion = 0;
  std::string title;
  Status status = Status::pass;
  nlohmann::json details = nlohmann::json::object();
  std::vector<std::string> problems;
  double seconds = 0;

  CheckResult() = default;
  CheckResult(int id, std::string t) : criterion(id), title(std::move(t)) {}

  void require(bool ok, const std::string& what) {
    if (ok) return;
    status = Status::fail;
    if (problems.size() < 20) problems.push_back(what);
  }
  void undecided(const std::string& what) {
    if (status == Status::pass) status = Status::inconclusive;
    if (problems.size() < 20) problems.push_back(what);
  }
};

namespace detail {

inline ZVec mask_bits(int mask, int n = 6) {
  ZVec b(n);
  for (int i = 0; i < n; ++i) b[i] = (mask >> i) & 1;
  return b;
}

inline std::string vec_str(const ZVec& v) {
  std::string s;
  for (i64 x : v) s += std::to_string(x);
  return s;
}

inline std::size_t linear_count(const LinearSystem& s) {
  const auto r = solve(s.A, s.b);
  return r ? static_cast<std::size_t>(r->count()) : 0;
}

inline LinearSystem random_system(std::mt19937& rng, i64 d, int max_rows, int max_cols) {
  const int r = 1 + static_cast<int>(rng() % max_rows), c = 1 + static_cast<int>(rng() % max_cols);
  std::vector<ZVec> rows(r, ZVec(c));
  for (auto& row : rows)
    for (auto& x : row) x = static_cast<i64>(rng() % d);
  ZVec b(r);
  for (auto& x : b) x = static_cast<i64>(rng() % d);
  return LinearSystem(ZModMatrix(d, rows), b);
}

inline Cochain random_normalized(SSetPtr x, i64 d, std::mt19937& rng) {
  Cochain g = Cochain::zero(x, 2, d);
  for (std::size_t s = 0; s < x->size(2); ++s)
    if (!x->is_degenerate(2, static_cast<int>(s))) g.set(static_cast<int>(s), static_cast<i64>(rng() % d));
  return g;
}

}  // namespace detail

// 1. K33 over Z_2: solvable iff the parities sum to zero, 16 solutions each, against a 2^9 scan.
inline CheckResult check_k33_solvability() {
  CheckResult r{1, "K33 solvability over Z_2"};
  const FinGroupJ z2 = cyclic_group(2);
  int solvable = 0;
  for (int mask = 0; mask < 64; ++mask) {
    const LinearSystem s = k33_system(detail::mask_bits(mask));
    const std::size_t count = solutions(s, z2).size();
    std::size_t brute = 0;
    for (int t = 0; t < 512; ++t) {
      std::vector<int> T(9);
      for (int j = 0; j < 9; ++j) T[j] = (t >> j) & 1 ? 1 - z2.identity() : z2.identity();
      brute += is_solution(s, z2, T);
    }
    const bool even = __builtin_popcount(static_cast<unsigned>(mask)) % 2 == 0;
    const std::string tag = "b=" + detail::vec_str(detail::mask_bits(mask));
    r.require(count == brute, tag + ": solutions() disagrees with the exhaustive scan");
    r.require(count == detail::linear_count(s), tag + ": solutions() disagrees with solve()");
    r.require(even ? count == 16 : count == 0, tag + ": found " + std::to_string(count) + " solutions");
    solvable += count > 0;
  }
  r.details["solvable_parity_vectors"] = solvable;
  r.details["solutions_when_solvable"] = 16;
  return r;
}

// 2. Gamma(A,b) for K33, d = 2: order 32, D8*D8 for odd parity and Z_2^5 for even parity.
inline CheckResult check_k33_solution_group(std::size_t cap = 1000000) {
  CheckResult r{2, "K33 solution group, d = 2"};
  const FinGroupJ dd = build_group("central_product(dihedral:8,dihedral:8)");
  int odd_iso = 0, even_elem = 0;
  for (int mask = 0; mask < 64; ++mask) {
    const std::string tag = "b=" + detail::vec_str(detail::mask_bits(mask));
    const auto tc = todd_coxeter_simplified(solution_group(k33_system(detail::mask_bits(mask))), cap);
    if (!tc) {
      r.undecided(tag + ": coset enumeration exceeded the cap");
      continue;
    }
    r.require(tc->order == 32 && tc->has_table, tag + ": order " + std::to_string(tc->order));
    if (!tc->has_table) continue;
    const bool odd = __builtin_popcount(static_cast<unsigned>(mask)) % 2 == 1;
    if (odd) {
      r.require(!tc->group.is_abelian(), tag + ": abelian for odd parity");
      const bool iso = tc->J && find_isomorphism(tc->group, dd, std::make_pair(*tc->J, dd.J())).has_value();
      r.require(iso, tag + ": not isomorphic to D8*D8 with J matched");
      odd_iso += iso;
    } else {
      const bool ok = tc->group.is_abelian() && is_elementary_abelian(tc->group, 2);
      r.require(ok, tag + ": not elementary abelian");
      even_elem += ok;
    }
  }
  r.details["odd_parity_isomorphic_to_D8*D8"] = odd_iso;
  r.details["even_parity_elementary_abelian"] = even_elem;
  return r;
}

// 3. K33 over Z_3: Gamma abelian; whenever J has order 3 the system is solvable over Z_3; no
// word w = J^a w^op with a != 0 or w != w^op up to length 4.
inline CheckResult check_k33_odd(std::size_t cap = 1000000) {
  CheckResult r{3, "K33 over Z_3"};
  int abelian = 0, j_full = 0, solvable = 0;
  for (int code = 0; code < 729; ++code) {
    ZVec b(6);
    for (int i = 0, c = code; i < 6; ++i, c /= 3) b[i] = c % 3;
    const std::string tag = "b=" + detail::vec_str(b);
    const LinearSystem s = k33_system(b, 3);
    const Presentation p = solution_group(s);
    const auto tc = todd_coxeter_simplified(p, cap);
    if (!tc) {
      r.undecided(tag + ": coset enumeration exceeded the cap");
      continue;
    }
    const bool ab = abelianization(p).order() == tc->order;
    r.require(ab, tag + ": abelianization order differs from the group order");
    abelian += ab;
    const int jord = tc->has_table ? tc->group.element_order(*tc->J) : 0;
    const i64 cls = mod_reduce(b[0] + b[1] + b[2] - b[3] - b[4] - b[5], 3);
    const bool lin = detail::linear_count(s) > 0;
    r.require((jord == 3) == (cls == 0), tag + ": J order does not follow the row/column balance");
    if (jord == 3) {
      ++j_full;
      r.require(lin, tag + ": J has order 3 but no solution over Z_3");
    }
    r.require(lin == (cls == 0), tag + ": solvability over Z_3 does not follow the balance");
    solvable += lin;
  }
  r.details["abelian"] = abelian;
  r.details["J_of_order_3"] = j_full;
  r.details["solvable_over_Z3"] = solvable;

  std::size_t words = 0, violations = 0;
  for (const ZVec& b : {ZVec{0, 0, 0, 0, 0, 0}, ZVec{1, 0, 0, 0, 0, 0}, ZVec{1, 1, 0, 0, 0, 0}, ZVec{2, 1, 0, 0, 1, 2}}) {
    const auto tc = todd_coxeter_simplified(solution_group(k33_system(b, 3)), cap);
    if (!tc || !tc->has_table) {
      r.undecided("b=" + detail::vec_str(b) + ": no Cayley table for the opposite-word scan");
      continue;
    }
    const std::vector<int> gens(tc->gen_element.begin(), tc->gen_element.end() - 1);
    const OppositeWordReport w = opposite_word_check(tc->group, gens, *tc->J, 3, 4);
    words += w.words;
    violations += w.violations;
    r.require(w.violations == 0, "b=" + detail::vec_str(b) + ": opposite-word violation");
  }
  r.details["opposite_words_checked"] = words;
  r.details["opposite_word_violations"] = violations;
  return r;
}

// 4. Exact LP: the two-qubit Pauli distribution on the odd K33 scenario is contextual with a
// Farkas witness, the uniform mixture of deterministic distributions is not.
inline CheckResult check_contextuality() {
  CheckResult r{4, "contextuality certificates"};
  const SystemSpaces k = system_spaces(k33_system(detail::mask_bits(1)), 2);
  const SimplicialDistribution q = quantum_distribution(k, k33_pauli_solution(detail::mask_bits(1)), CMatrix::Identity(4, 4) / 4.0);
  const Verdict vq = is_contextual(q);
  r.require(vq.contextual, "quantum distribution judged noncontextual");
  r.require(verify_verdict(q, vq), "Farkas witness fails substitution");
  r.details["farkas_value"] = farkas_value(vq.farkas, q).get_str();
  r.details["farkas_terms"] = vq.farkas.terms.size();

  const auto dets = enumerate_deterministic(*k.nzd_sigma, 2);
  std::vector<Weighted> mix;
  for (const auto& f : dets) mix.push_back({f, mpq_class(1, static_cast<long>(dets.size()))});
  const SimplicialDistribution u = theta(k.nzd_sigma, 2, mix);
  const Verdict vu = is_contextual(u);
  r.require(!vu.contextual, "uniform classical distribution judged contextual");
  r.require(verify_verdict(u, vu), "decomposition of the uniform distribution fails substitution");
  r.details["deterministic_distributions"] = dets.size();
  r.details["decomposition_support"] = vu.decomposition.size();
  return r;
}

// 5. Precomposition along phi and psi is a bijection of solution sets for the 2x2 example and K33.
inline CheckResult check_reduction(std::size_t cap = 1000000) {
  CheckResult r{5, "reduction bijections"};
  const std::vector<FinGroupJ> targets{cyclic_group(2), build_group("cyclic:4:2"), dihedral_group(8), quaternion_group(),
                                       build_group("central_product(dihedral:8,dihedral:8)")};
  std::vector<std::pair<std::string, LinearSystem>> systems;
  for (i64 b1 = 0; b1 < 2; ++b1)
    for (i64 b2 = 0; b2 < 2; ++b2)
      systems.push_back({"2x2 b=" + std::to_string(b1) + std::to_string(b2), example_2x2_system(b1, b2)});
  for (int mask : {0, 1})
    systems.push_back({"K33 b=" + detail::vec_str(detail::mask_bits(mask)), k33_system(detail::mask_bits(mask))});
  nlohmann::json counts = nlohmann::json::object();
  for (const auto& [name, s] : systems) {
    const ReductionMaps m = reduction_maps(system_spaces(s, 2));
    const auto tc = todd_coxeter_simplified(m.target, cap);
    if (!tc) {
      r.undecided(name + ": coset enumeration of the reduced group exceeded the cap");
    } else {
      r.require(relator_failures(m.source, m.phi, tc) == std::size_t{0}, name + ": phi breaks a relator");
    }
    for (const auto& g : targets) {
      const TransportResult t = transport_homs(m.source, m.target, m.phi, m.psi, g);
      const std::size_t sol = solutions(s, g).size();
      r.require(t.ok(), name + " in " + g.label() + ": precomposition is not a bijection");
      r.require(t.pinned_a == sol && t.pinned_b == sol, name + " in " + g.label() + ": counts differ from solutions()");
      counts[name][g.label()] = sol;
    }
  }
  r.details["solution_counts"] = counts;
  return r;
}

// 6. pi_1(Z_d, X_gamma) against Gamma(A_X, b_gamma): relator images and Hom counts.
inline CheckResult check_twisted_iso(std::size_t cap = 200000, unsigned seed = 11) {
  CheckResult r{6, "twisted products against extracted systems"};
  int instances = 0, by_table = 0, by_local = 0;
  auto run = [&](const std::string& name, const Cochain& g, const std::vector<FinGroupJ>& groups) {
    const IsoCheckReport rep = theorem_iso_check(g, groups, cap);
    ++instances;
    r.require(rep.ok(), name + ": relator images or Hom counts disagree");
    if (!rep.relators_verified())
      r.undecided(name + ": relator images neither checked in a table nor locally certified");
    else if (rep.phi_failures && rep.psi_failures)
      ++by_table;
    else
      ++by_local;
  };
  const TorusFixture t = k33_torus_fixture(2);
  const std::vector<FinGroupJ> g2{cyclic_group(2), build_group("cyclic:4:2"), dihedral_group(8), quaternion_group()};
  for (int mask = 0; mask < 64; mask += 7) run("torus d=2 b=" + detail::vec_str(detail::mask_bits(mask)), torus_cocycle(t, detail::mask_bits(mask)), g2);
  for (const ZVec& b : {ZVec{0, 0, 0, 0, 0, 0}, ZVec{1, 0, 0, 0, 0, 0}, ZVec{2, 1, 0, 0, 1, 0}, ZVec{1, 1, 1, 0, 0, 0}})
    run("torus d=3 b=" + detail::vec_str(b), torus_cocycle(t, b, 3), {cyclic_group(3), heisenberg_group(3)});
  for (i64 b1 = 0; b1 < 2; ++b1)
    for (i64 b2 = 0; b2 < 2; ++b2)
      run("2x2 b=" + std::to_string(b1) + std::to_string(b2), gamma_b(system_spaces(example_2x2_system(b1, b2), 2)), g2);
  std::mt19937 rng(seed);
  for (int rep = 0; rep < 40; ++rep) {
    SSetPtr x = random_small_sset(rng);
    for (i64 d : {2, 3}) {
      const Cochain g = detail::random_normalized(x, d, rng);
      run("random #" + std::to_string(rep) + " d=" + std::to_string(d), g,
          d == 2 ? std::vector<FinGroupJ>{cyclic_group(2), dihedral_group(8)} : std::vector<FinGroupJ>{cyclic_group(3)});
    }
  }
  r.details["instances"] = instances;
  r.details["relators_checked_in_tables"] = by_table;
  r.details["relators_certified_locally"] = by_local;
  return r;
}

// 7. Gamma(Z_2, E_2^+) has order 32, is isomorphic to E_2^+, and K(Z_2, E_2^+) is trivial.
inline CheckResult check_extraspecial_2(std::size_t cap = 1000000) {
  CheckResult r{7, "extraspecial 2-group of order 32"};
  const FinGroupJ e = build_group("extraspecial:2:2:+");
  const KGroup k = k_group(e, 2);
  const auto gamma = todd_coxeter_simplified(k.target, cap);
  if (!gamma) {
    r.undecided("coset enumeration of pi_1 N(Z_2, E) exceeded the cap");
    return r;
  }
  r.details["gamma_order"] = gamma->order;
  r.require(gamma->order == 32, "Gamma(Z_2, E) has order " + std::to_string(gamma->order));
  r.require(gamma->has_table && find_isomorphism(gamma->group, e).has_value(), "Gamma(Z_2, E) is not isomorphic to E");
  r.require(relator_failures(k.pres, k.images, gamma) == std::size_t{0}, "K generators do not map into pi_1");
  const auto kt = todd_coxeter_simplified(k.pres, cap);
  if (!kt)
    r.undecided("coset enumeration of K exceeded the cap");
  else {
    r.details["K_order"] = kt->order;
    r.require(kt->order == 1, "K(Z_2, E) has order " + std::to_string(kt->order));
  }
  return r;
}

// 8. Odd p: noncommuting torsion pairs exist, and solutions in E_1^+(3) imply solutions in Z_3.
inline CheckResult check_odd_p(unsigned seed = 5) {
  CheckResult r{8, "odd-p properties"};
  const std::vector<std::pair<std::string, FinGroup>> groups{
      {"heisenberg:3", heisenberg_group(3)}, {"e1:3:2", build_e1(3, 2).group}, {"Z3 wr Z3", wreath_group(3)}};
  for (const auto& [name, g] : groups) {
    const auto pr = find_torsion_pair(g, 3);
    bool ok = pr.has_value();
    if (ok) {
      const auto [a, b] = *pr;
      ok = g.is_torsion(a, 3) && g.is_torsion(b, 3) && g.is_torsion(g.mul(g.inv(a), b), 3) && !g.commute(a, b);
    }
    r.require(ok, name + ": no valid torsion pair");
  }
  const FinGroupJ e = build_group("extraspecial:3:1:+"), z3 = cyclic_group(3);
  std::mt19937 rng(seed);
  int in_e = 0, in_z = 0;
  for (int t = 0; t < 200; ++t) {
    const LinearSystem s = detail::random_system(rng, 3, 4, 4);
    const bool se = !solutions(s, e, 1).empty();
    const bool sz = !solutions(s, z3, 1).empty();
    in_e += se;
    in_z += sz;
    r.require(!se || sz, "system #" + std::to_string(t) + " solvable in E_1^+(3) but not in Z_3");
  }
  r.details["solvable_in_E"] = in_e;
  r.details["solvable_in_Z3"] = in_z;
  r.require(in_e > 0, "no random system was solvable in E_1^+(3)");
  return r;
}

// 9. The splitting map E_1(9) -> E_1(3) on commuting 3-torsion pairs and on the embedded copy.
inline CheckResult check_frembs_split() {
  CheckResult r{9, "splitting map on E_1(9)"};
  const MonomialGroup e9 = build_e1(3, 2), e3 = build_e1(3, 1);
  const FinGroupJ& g = e9.group;
  std::vector<int> image(g.order());
  for (int a = 0; a < g.order(); ++a) image[a] = e3.index_of(phi_frembs(e9.elements[a]));
  std::size_t pairs = 0, bad = 0;
  const std::vector<int> tors = g.FinGroup::torsion(3);
  for (int a : tors)
    for (int b : tors) {
      if (!g.commute(a, b)) continue;
      ++pairs;
      bad += image[g.mul(a, b)] != e3.group.mul(image[a], image[b]);
    }
  r.require(bad == 0, std::to_string(bad) + " commuting pairs where the map is not multiplicative");
  r.require(image[g.identity()] == e3.group.identity(), "identity not preserved");
  std::size_t fixed = 0;
  for (const auto& x : e3.elements) fixed += phi_frembs(embed_e1(x)) == x;
  r.require(fixed == e3.elements.size(), "not the identity on the embedded E_1(3)");
  r.details["commuting_torsion_pairs"] = pairs;
  r.details["embedded_elements"] = fixed;
  return r;
}

// 10. Power maps compose, scale the extension class up to a coboundary, and the prime-power
// splitting of solutions over Z_6 is injective.
inline CheckResult check_power_maps(unsigned seed = 17) {
  CheckResult r{10, "power maps"};
  for (const auto& [d, spec] : std::vector<std::pair<i64, std::string>>{{2, "dihedral:8"}, {4, "cyclic:4"}, {6, "cyclic:6"}}) {
    const FinGroupJ g = build_group(spec);
    const SSetPtr n = comm_nerve(g, d, 2);
    for (i64 m : {-1, 2, 3, 5})
      for (i64 m2 : {-1, 2, 3, 5}) {
        const SMap a = power_map_s(g, m, n, n), b = power_map_s(g, m2, n, n), ab = power_map_s(g, m * m2, n, n);
        r.require(compose(a, b).f == ab.f, spec + ": omega_" + std::to_string(m) + " o omega_" + std::to_string(m2) +
                                               " differs from omega_" + std::to_string(m * m2));
      }
  }
  int witnesses = 0;
  for (const char* spec : {"dihedral:8", "quaternion"}) {
    const auto ext = quotient_by_J(build_group(spec));
    const NbarCocycle c = gamma_phi_d(ext, 2);
    for (i64 m : {-1, 3}) {
      const Cochain pulled = pullback(c.gamma, nbar_power_map(ext, m, c.nbar));
      const auto w = cohomologous(scale(c.gamma, m), pulled);
      const bool ok = w && scale(c.gamma, m) + coboundary(*w) == pulled;
      r.require(ok, std::string(spec) + ": no cohomologous witness for m = " + std::to_string(m));
      witnesses += ok;
    }
  }
  r.details["cohomologous_witnesses"] = witnesses;

  std::mt19937 rng(seed);
  const FinGroupJ z6 = cyclic_group(6), mixed = build_group("product(cyclic:6,dihedral:8)");
  std::size_t total = 0;
  for (int t = 0; t < 40; ++t) {
    const LinearSystem s = detail::random_system(rng, 6, 3, 3);
    for (const auto* g : {&z6, &mixed}) {
      const auto sols = solutions(s, *g, 5000);
      std::set<std::vector<std::vector<int>>> images;
      for (const auto& T : sols) {
        std::vector<std::vector<int>> key;
        for (const auto& part : prime_power_parts(s, *g, T)) {
          r.require(is_solution(part.system, part.group, part.T), "a reduction is not a solution mod " + std::to_string(part.modulus));
          key.push_back(part.T);
        }
        images.insert(key);
      }
      r.require(images.size() == sols.size(), "prime-power reduction is not injective on system #" + std::to_string(t));
      total += sols.size();
    }
  }
  r.details["d6_solutions_reduced"] = total;
  return r;
}

// 11. Structural properties over a fixed corpus.
inline CheckResult check_structure(unsigned seed = 29) {
  CheckResult r{11, "structural properties"};
  std::mt19937 rng(seed);
  const SystemSpaces ex = system_spaces(example_2x2_system(1, 0), 3);
  const SystemSpaces k33 = system_spaces(k33_system(detail::mask_bits(1)), 2);
  const TorusFixture torus = k33_torus_fixture(3);
  std::vector<std::pair<std::string, SSetPtr>> spaces{
      {"N(D8)", nerve(dihedral_group(8), 3)},
      {"N(Z_2,Q8)", comm_nerve(quaternion_group(), 2, 3)},
      {"N(Z_3,H3)", comm_nerve(heisenberg_group(3), 3, 2)},
      {"E(Z_2,D8)", e_space(dihedral_group(8), 2, 3)},
      {"wedge", wedge_zd(2, 3, 3)},
      {"N(Z_2,Sigma) 2x2", ex.nzd_sigma},
      {"reduced 2x2", ex.nbar.space},
      {"N(Z_2,Sigma) K33", k33.nzd_sigma},
      {"torus", torus.X},
      {"twisted torus", twisted_product(torus_cocycle(torus, detail::mask_bits(1)))}};
  for (int i = 0; i < 10; ++i) spaces.push_back({"random #" + std::to_string(i), random_small_sset(rng)});
  for (const auto& [name, x] : spaces) {
    const auto problem = check_simplicial_identities(*x);
    r.require(!problem, name + ": " + problem.value_or(""));
  }
  r.details["simplicial_sets"] = spaces.size();

  // cocycle conditions
  for (i64 b1 = 0; b1 < 2; ++b1)
    for (i64 b2 = 0; b2 < 2; ++b2)
      r.require(is_cocycle(gamma_b(system_spaces(example_2x2_system(b1, b2), 3))), "gamma_b of the 2x2 example");
  r.require(is_cocycle(gamma_b(k33)), "gamma_b of K33");
  for (int mask = 0; mask < 64; mask += 9) r.require(is_cocycle(torus_cocycle(torus, detail::mask_bits(mask))), "torus cocycle");
  for (const char* spec : {"dihedral:8", "quaternion", "heisenberg:3"}) {
    const auto ext = quotient_by_J(build_group(spec));
    r.require(is_group_cocycle(ext.Gbar, cocycle_from_section(ext)), std::string(spec) + ": section cocycle");
    r.require(is_cocycle(gamma_phi_d(ext, 3).gamma), std::string(spec) + ": gamma_phi");
  }

  // d o d = 0
  for (const auto& [name, x] : spaces)
    for (int n = 0; n + 2 <= x->cap(); ++n)
      for (i64 d : {2, 6}) {
        Cochain f = Cochain::zero(x, n, d);
        for (std::size_t s = 0; s < x->size(n); ++s) f.set(static_cast<int>(s), static_cast<i64>(rng() % d));
        const Cochain dd = coboundary(coboundary(f));
        r.require(detail::is_zero(dd.values), name + ": d o d != 0 in degree " + std::to_string(n));
      }

  // solution sets against Hom sets and against linear algebra
  std::vector<LinearSystem> systems;
  for (i64 b1 = 0; b1 < 2; ++b1)
    for (i64 b2 = 0; b2 < 2; ++b2) systems.push_back(example_2x2_system(b1, b2));
  for (int mask : {0, 1, 3}) systems.push_back(k33_system(detail::mask_bits(mask)));
  systems.push_back(LinearSystem(ZModMatrix(6, {{1, 5, 0}, {0, 1, 3}, {2, 0, 1}}), {1, 2, 3}));
  for (int t = 0; t < 12; ++t) systems.push_back(detail::random_system(rng, t % 2 ? 3 : 4, 3, 3));
  std::size_t pairs = 0;
  for (const auto& s : systems) {
    std::vector<FinGroupJ> groups{cyclic_group(static_cast<int>(s.d()))};
    if (s.d() == 2) groups.insert(groups.end(), {dihedral_group(8), quaternion_group()});
    if (s.d() == 3) groups.push_back(heisenberg_group(3));
    if (s.d() == 4) groups.push_back(cyclic_group(8, 4));
    for (const auto& g : groups) {
      ++pairs;
      r.require(solutions(s, g).size() == count_homs(solution_group(s), g, true),
                g.label() + ": solutions and pinned homs of the solution group differ");
    }
    r.require(solutions(s, cyclic_group(static_cast<int>(s.d()))).size() == detail::linear_count(s),
              "solve() and solutions() disagree over Z_" + std::to_string(s.d()));
  }
  r.details["system_group_pairs"] = pairs;

  // Theta on a point mass is the delta distribution, and LP verdicts survive substitution
  const SystemSpaces small = system_spaces(example_2x2_system(1, 1), 2);
  for (const SSetPtr& host : {small.nzd_sigma, k33.nzd_sigma}) {
    const auto dets = enumerate_deterministic(*host, 2);
    for (std::size_t i = 0; i < dets.size(); i += 7) {
      SimplicialDistribution delta = SimplicialDistribution::zero(host, 2);
      for (int n = 0; n <= 2; ++n)
        for (std::size_t s = 0; s < host->size(n); ++s)
          delta.p[n][s][deterministic_outcome(*host, dets[i], n, static_cast<int>(s), 2)] = 1;
      r.require(theta(host, 2, {{dets[i], 1}}) == delta, "Theta of a deterministic map is not a point mass");
    }
    std::vector<Weighted> mix;
    for (int t = 0; t < 3; ++t) mix.push_back({dets[rng() % dets.size()], mpq_class(1, 3)});
    const SimplicialDistribution q = theta(host, 2, mix);
    const Verdict v = is_contextual(q);
    r.require(!v.contextual && verify_verdict(q, v), "mixture verdict fails substitution");
  }
  const SimplicialDistribution qd = quantum_distribution(k33, k33_pauli_solution(detail::mask_bits(1)),
                                                         random_rational_pure_state(4, rng));
  const Verdict vq = is_contextual(qd);
  r.require(vq.contextual && verify_verdict(qd, vq), "quantum verdict fails substitution");
  Verdict tampered = vq;
  tampered.farkas.constant += 1000;
  r.require(!verify_verdict(qd, tampered), "a corrupted Farkas witness passed substitution");
  return r;
}

struct CriterionSpec {
  int id;
  double limit_seconds;
  std::function<CheckResult()> run;
};

// A nonzero seed replaces the fixed seeds of the randomized corpora.
inline std::vector<CriterionSpec> all_criteria(unsigned seed = 0) {
  auto pick = [seed](unsigned fixed) { return seed ? seed : fixed; };
  return {{1, 1, [] { return check_k33_solvability(); }},
          {2, 10, [] { return check_k33_solution_group(); }},
          {3, 60, [] { return check_k33_odd(); }},
          {4, 10, [] { return check_contextuality(); }},
          {5, 60, [] { return check_reduction(); }},
          {6, 120, [=] { return check_twisted_iso(200000, pick(11)); }},
          {7, 120, [] { return check_extraspecial_2(); }},
          {8, 120, [=] { return check_odd_p(pick(5)); }},
          {9, 60, [] { return check_frembs_split(); }},
          {10, 120, [=] { return check_power_maps(pick(17)); }},
          {11, 600, [=] { return check_structure(pick(29)); }}};
}

inline CheckResult run_timed(const CriterionSpec& c) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult r;
  try {
    r = c.run();
  } catch (const std::exception& e) {
    r.criterion = c.id;
    r.status = Status::fail;
    r.problems.push_back(std::string("exception: ") + e.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (r.seconds > c.limit_seconds && r.status == Status::pass) {
    r.status = Status::fail;
    r.problems.push_back("time limit exceeded");
  }
  return r;
}

// Scenario names accepted by `reproduce`, each with the criteria it runs.
inline const std::vector<std::pair<std::string, std::vector<int>>>& scenarios() {
  static const std::vector<std::pair<std::string, std::vector<int>>> s{
      {"k33", {1, 2, 3, 4}},      {"example-2-15", {5}},  {"twisted-iso", {6}},  {"extraspecial-2", {7}},
      {"odd-p", {8}},             {"frembs-split", {9}},  {"power-maps", {10}},  {"properties", {11}}};
  return s;
}

}  // namespace lcs
