#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "lcs/abelian.hpp"
#include "lcs/group_spec.hpp"
#include "lcs/homs.hpp"
#include "lcs/linear_system.hpp"
#include "lcs/todd_coxeter.hpp"
#include "lcs/zmod.hpp"

using namespace lcs;

namespace {

Presentation parse(const std::string& s) {
  std::istringstream in(s);
  return parse_presentation(in);
}

// Every map from the generators to G checked against all relators.
std::size_t brute_hom_count(const Presentation& p, const FinGroupJ& g, bool pin_J) {
  const int n = p.num_gens();
  std::vector<int> img(n, 0);
  std::size_t count = 0;
  while (true) {
    if (is_hom(p, g, img, pin_J)) ++count;
    int k = 0;
    while (k < n && ++img[k] == g.order()) img[k++] = 0;
    if (k == n) break;
  }
  return count;
}

// All assignments columns -> G checked against the definition of a solution.
std::size_t brute_solution_count(const LinearSystem& s, const FinGroupJ& g) {
  const int n = static_cast<int>(s.cols());
  std::vector<int> t(n, 0);
  std::size_t count = 0;
  while (true) {
    if (is_solution(s, g, t)) ++count;
    int k = 0;
    while (k < n && ++t[k] == g.order()) t[k++] = 0;
    if (k == n) break;
  }
  return count;
}

ZVec parity_vector(int mask) {
  ZVec b(6);
  for (int i = 0; i < 6; ++i) b[i] = (mask >> i) & 1;
  return b;
}

}  // namespace

TEST_CASE("words") {
  const Word w{{0, 1}, {1, 2}, {1, -2}, {0, 2}};
  CHECK(free_reduce(w) == Word{{0, 3}});
  CHECK(free_reduce(inverse(w) * w).empty());
  CHECK(cyclic_reduce({{0, 1}, {1, 1}, {0, -1}}) == Word{{1, 1}});
  CHECK(word_length(power(Word{{0, 1}, {1, -1}}, -3)) == 6);
}

TEST_CASE("presentation files") {
  const Presentation p = parse("gens: a b J\nrel: a^2\nrel: [a,b]\nrel: a b J^-1\n# comment\n");
  CHECK(p.num_gens() == 3);
  REQUIRE(p.J.has_value());
  CHECK(p.gens[*p.J] == "J");
  CHECK(p.relators.size() == 3);
  const Presentation q = parse(p.to_text());
  CHECK(q.relators == p.relators);
  CHECK(q.gens == p.gens);
  try {
    parse("gens: a\nrel: a c\n");
    FAIL("expected an error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("coset enumeration on known groups") {
  for (int d = 1; d <= 7; ++d) {
    auto t = todd_coxeter(parse("gens: e\nrel: e^" + std::to_string(d) + "\n"));
    REQUIRE(t);
    CHECK(t->order == d);
  }
  auto d8 = todd_coxeter(parse("gens: r s\nrel: r^4\nrel: s^2\nrel: s r s r\n"));
  REQUIRE(d8);
  CHECK(d8->order == 8);
  CHECK(find_isomorphism(d8->group, dihedral_group(8)).has_value());
  auto q8 = todd_coxeter(parse("gens: i j\nrel: i^4\nrel: i^2 j^-2\nrel: j^-1 i j i\n"));
  REQUIRE(q8);
  CHECK(q8->order == 8);
  CHECK(find_isomorphism(q8->group, quaternion_group()).has_value());
  auto a5 = todd_coxeter(parse("gens: a b\nrel: a^2\nrel: b^3\nrel: a b a b a b a b a b\n"));
  REQUIRE(a5);
  CHECK(a5->order == 60);
  // Z is infinite: the cap must be reported, never a wrong order.
  CHECK_FALSE(todd_coxeter(parse("gens: a b\nrel: [a,b]\n"), 5000).has_value());
}

TEST_CASE("tietze simplification preserves the group") {
  const Presentation p = parse("gens: a b c\nrel: a^4\nrel: b a^-1 b^-1 a^-1\nrel: c b^-1 a\nrel: b^2 a^2\n");
  const SimplifiedPresentation s = simplify(p);
  CHECK(s.pres.num_gens() < p.num_gens());
  auto t1 = todd_coxeter(p), t2 = todd_coxeter_simplified(p);
  REQUIRE(t1);
  REQUIRE(t2);
  CHECK(t1->order == t2->order);
  CHECK(find_isomorphism(t1->group, t2->group).has_value());
  // generator images satisfy the original relators
  for (const auto& r : p.relators) CHECK(evaluate_word(t2->group, t2->gen_element, r) == t2->group.identity());
}

TEST_CASE("abelianization") {
  CHECK(abelianization(parse("gens: a b\nrel: [a,b]\n")).to_string() == "Z x Z");
  CHECK(abelianization(parse("gens: a b c\nrel: a^2\nrel: b^2\nrel: c^2\n")).to_string() == "Z_2 x Z_2 x Z_2");
  CHECK(abelianization(parse("gens: a b\nrel: a^4\nrel: a^2 b^-6\n")).to_string() == "Z_2 x Z_12");
  CHECK(abelianization(parse("gens: a\nrel: a^6\nrel: a^4\n")).order() == 2);
  CHECK(elementarization(parse("gens: a b\nrel: a^4\nrel: b^3\n"), 2) == 1);
}

TEST_CASE("solution groups of K33") {
  const LinearSystem odd = k33_system(parity_vector(1));
  const Presentation g = solution_group(odd);
  CHECK(g.num_gens() == 10);
  auto t = todd_coxeter(g);
  REQUIRE(t);
  CHECK(t->order == 32);
  CHECK_FALSE(t->group.is_abelian());
  const FinGroupJ e = build_group("central_product(dihedral:8,dihedral:8)");
  CHECK(find_isomorphism(t->group, e, std::make_pair(*t->J, e.J())).has_value());

  auto even = todd_coxeter(solution_group(k33_system(parity_vector(3))));
  REQUIRE(even);
  CHECK(even->order == 32);
  CHECK(even->group.is_abelian());
  CHECK(is_elementary_abelian(even->group, 2));
  CHECK(abelianization(solution_group(k33_system(parity_vector(0)))).to_string() == "Z_2 x Z_2 x Z_2 x Z_2 x Z_2");
}

TEST_CASE("hom enumeration agrees with brute force") {
  const FinGroupJ z2 = cyclic_group(2), d8 = dihedral_group(8), q8 = quaternion_group(), z4 = cyclic_group(4, 2);
  for (const auto* g : {&z2, &d8, &q8, &z4}) {
    for (int b1 = 0; b1 < 2; ++b1)
      for (int b2 = 0; b2 < 2; ++b2) {
        const LinearSystem s = example_2x2_system(b1, b2);
        const Presentation p = solution_group(s);
        CHECK(count_homs(p, *g, true) == brute_hom_count(p, *g, true));
        CHECK(count_homs(p, *g, false) == brute_hom_count(p, *g, false));
        CHECK(solutions(s, *g).size() == brute_solution_count(s, *g));
        CHECK(solutions(s, *g).size() == count_homs(p, *g, true));
      }
  }
  const Presentation cyc = parse("gens: e\nrel: e^4\n");
  CHECK(count_homs(cyc, cyclic_group(4), false) == 4);
}

TEST_CASE("K33 solutions in Z_2 and in D8*D8") {
  const FinGroupJ z2 = cyclic_group(2);
  for (int mask = 0; mask < 64; ++mask) {
    const LinearSystem s = k33_system(parity_vector(mask));
    const auto sols = solutions(s, z2);
    const int parity = __builtin_popcount(mask) % 2;
    CHECK(sols.size() == (parity ? 0u : 16u));
    const auto lin = solve(s.A, s.b);
    CHECK(lin.has_value() == !parity);
    if (lin) CHECK(static_cast<std::size_t>(lin->count()) == sols.size());
    CHECK(count_homs(solution_group(s), z2, true) == sols.size());
  }
  const FinGroupJ e = build_group("central_product(dihedral:8,dihedral:8)");
  const LinearSystem odd = k33_system(parity_vector(1));
  const auto sols = solutions(odd, e, 5);
  REQUIRE_FALSE(sols.empty());
  for (const auto& t : sols) CHECK(is_solution(odd, e, t));
  CHECK(solutions(odd, e).size() == count_homs(solution_group(odd), e, true));
}

TEST_CASE("systems over Z_d with non-unit coefficients") {
  const FinGroupJ z6 = cyclic_group(6), z12 = cyclic_group(12, 6);
  const LinearSystem s(ZModMatrix(6, {{1, 5, 0}, {0, 1, 3}, {2, 0, 1}}), {1, 2, 3});
  for (const auto* g : {&z6, &z12}) {
    CHECK(solutions(s, *g).size() == brute_solution_count(s, *g));
    CHECK(solutions(s, *g).size() == count_homs(solution_group(s), *g, true));
  }
  const auto lin = solve(s.A, s.b);
  CHECK(solutions(s, z6).size() == static_cast<std::size_t>(lin ? lin->count() : 0));
}

TEST_CASE("prime-power parts of solutions over Z_6") {
  std::mt19937 rng(17);
  const FinGroupJ z6 = cyclic_group(6), mixed = build_group("product(cyclic:6,dihedral:8)");
  std::size_t seen = 0;
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<ZVec> rows(3, ZVec(3));
    for (auto& r : rows)
      for (auto& x : r) x = rng() % 6;
    ZVec b(3);
    for (auto& x : b) x = rng() % 6;
    const LinearSystem s(ZModMatrix(6, rows), b);
    for (const auto* g : {&z6, &mixed}) {
      std::set<std::vector<std::vector<int>>> images;
      const auto sols = solutions(s, *g, 2000);
      for (const auto& T : sols) {
        const auto parts = prime_power_parts(s, *g, T);
        REQUIRE(parts.size() == 2);
        std::vector<std::vector<int>> key;
        for (const auto& part : parts) {
          CHECK(is_solution(part.system, part.group, part.T));
          key.push_back(part.T);
        }
        for (std::size_t j = 0; j < T.size(); ++j) CHECK(g->mul(parts[0].T[j], parts[1].T[j]) == T[j]);
        images.insert(key);
      }
      CHECK(images.size() == sols.size());
      seen += sols.size();
    }
  }
  CHECK(seen > 0);
  CHECK(factorize(360) == std::vector<std::pair<i64, int>>{{2, 3}, {3, 2}, {5, 1}});
}
