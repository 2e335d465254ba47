#include <set>

#include "doctest.h"
#include "lcs/group_spec.hpp"
#include "lcs/homs.hpp"
#include "lcs/simplicial.hpp"

using namespace lcs;

namespace {

std::set<std::string> labels(const TruncatedSSet& x, int n) {
  std::set<std::string> out;
  for (std::size_t s = 0; s < x.size(n); ++s) out.insert(x.label(n, static_cast<int>(s)));
  return out;
}

// Number of functions on the columns whose support lies inside a single row support.
int brute_realization_vertices(const LinearSystem& s) {
  const int c = static_cast<int>(s.cols());
  i64 total = 1;
  for (int v = 0; v < c; ++v) total *= s.d();
  int count = 0;
  for (i64 code = 0; code < total; ++code) {
    std::vector<int> supp;
    i64 x = code;
    for (int v = 0; v < c; ++v, x /= s.d())
      if (x % s.d()) supp.push_back(v);
    bool inside = supp.empty();
    for (std::size_t i = 0; i < s.rows() && !inside; ++i) {
      const auto row = s.support(i);
      inside = std::all_of(supp.begin(), supp.end(),
                           [&](int v) { return std::find(row.begin(), row.end(), static_cast<std::size_t>(v)) != row.end(); });
    }
    count += inside;
  }
  return count;
}

ZVec parity(int mask) {
  ZVec b(6);
  for (int i = 0; i < 6; ++i) b[i] = (mask >> i) & 1;
  return b;
}

// Every simplex of the sub-nerve exists in the full nerve with matching faces and degeneracies.
void check_sub_nerve(const TruncatedSSet& sub, const TruncatedSSet& full) {
  for (int n = 0; n <= sub.cap(); ++n)
    for (std::size_t s = 0; s < sub.size(n); ++s) {
      const int t = full.index_of_key(n, sub.key(n, static_cast<int>(s)));
      for (int i = 0; n > 0 && i <= n; ++i)
        CHECK(full.key(n - 1, full.face(n, i, t)) == sub.key(n - 1, sub.face(n, i, static_cast<int>(s))));
      for (int j = 0; n < sub.cap() && j <= n; ++j)
        CHECK(full.key(n + 1, full.degen(n, j, t)) == sub.key(n + 1, sub.degen(n, j, static_cast<int>(s))));
    }
}

}  // namespace

TEST_CASE("complexes of systems") {
  const SimplicialComplex ex = complex_of_system(example_2x2_system(0, 0));
  REQUIRE(ex.facets.size() == 1);
  CHECK(ex.facets[0] == std::vector<int>{0, 1});
  const SimplicialComplex k = complex_of_system(k33_system(parity(0)));
  CHECK(k.facets.size() == 6);
  for (const auto& f : k.facets) CHECK(f.size() == 3);
  const SimplicialComplex one = complex_of_system(LinearSystem(ZModMatrix(2, {{1}}), {1}));
  CHECK(one.facets.size() == 1);
  CHECK(one.num_vertices() == 1);
  CHECK(k.contains({0, 1}));
  CHECK_FALSE(k.contains({0, 4}));
  CHECK_THROWS_AS(complex_of_system(LinearSystem(ZModMatrix(2, {{0, 0}}), {0})), std::invalid_argument);
}

TEST_CASE("nerves") {
  const FinGroupJ d8 = dihedral_group(8);
  const SSetPtr nz2 = nerve_zd(2, 3);
  CHECK(nz2->size(2) == 4);
  CHECK(nz2->nondegenerate(1).size() == 1);
  CHECK(nerve_zd(5, 2)->nondegenerate(1).size() == 4);
  const SSetPtr nd8 = nerve(d8, 2);
  CHECK_NOTHROW(validate(*nd8));
  for (int g = 0; g < 8; ++g)
    for (int h = 0; h < 8; ++h) {
      const int s = nd8->index_of_key(2, {g, h});
      CHECK(nd8->key(1, nd8->face(2, 1, s)) == Key{d8.mul(g, h)});
    }

  const SSetPtr c = comm_nerve(d8, 2, 3);
  CHECK_NOTHROW(validate(*c));
  CHECK(c->size(1) == 6);
  check_sub_nerve(*c, *nerve(d8, 3));
  const FinGroupJ q8 = quaternion_group();
  const SSetPtr cq = comm_nerve(q8, 2, 2);
  CHECK(cq->size(1) == 2);
  CHECK(cq->size(2) == 4);
  const SSetPtr z3 = comm_nerve(cyclic_group(3), 3, 3);
  CHECK(z3->size(3) == 27);
}

TEST_CASE("realization spaces of systems") {
  const SimplicialComplex ex = complex_of_system(example_2x2_system(0, 0));
  const SSetPtr n = nzd_sigma(ex, 2, 3);
  CHECK_NOTHROW(validate(*n));
  CHECK(labels(*n, 1) == std::set<std::string>{"00", "01", "10", "11"});
  CHECK(n->size(2) == 16);
  CHECK(nzd_sigma(make_complex({"v"}, {{0}}), 3, 2)->size(1) == 3);

  const LinearSystem k33 = k33_system(parity(1));
  const SSetPtr nk = nzd_sigma(complex_of_system(k33), 2, 2);
  CHECK(static_cast<int>(nk->size(1)) == brute_realization_vertices(k33));
  CHECK(nk->size(1) == 34);
  CHECK_NOTHROW(validate(*nk));

  const LinearSystem z3(ZModMatrix(3, {{1, 2, 0}, {0, 1, 1}}), {0, 1});
  CHECK(static_cast<int>(nzd_sigma(complex_of_system(z3), 3, 1)->size(1)) == brute_realization_vertices(z3));
}

TEST_CASE("wedge maps and the reduced quotient") {
  const LinearSystem s = example_2x2_system(1, 0);
  const SystemSpaces sp = system_spaces(s, 3);
  CHECK_NOTHROW(validate(*sp.wedge.wedge));
  CHECK_NOTHROW(validate(sp.wedge.alpha));
  CHECK_NOTHROW(validate(sp.wedge.beta));
  const TruncatedSSet& w = *sp.wedge.wedge;
  CHECK(sp.nzd_sigma->label(1, sp.wedge.alpha(1, w.index_of_label(1, "1:1"))) == "11");
  CHECK(sp.nzd_sigma->label(1, sp.wedge.alpha(1, w.index_of_label(1, "2:1"))) == "10");
  CHECK(sp.nzd->label(1, sp.wedge.beta(1, w.index_of_label(1, "1:1"))) == "1");
  CHECK(sp.nzd->label(1, sp.wedge.beta(1, w.index_of_label(1, "2:1"))) == "0");

  const TruncatedSSet& q = *sp.nbar.space;
  CHECK_NOTHROW(validate(q));
  CHECK_NOTHROW(validate(sp.nbar.proj));
  CHECK(labels(q, 1) == std::set<std::string>{"00", "01"});
  CHECK(labels(q, 2) == std::set<std::string>{"(00,00)", "(00,01)", "(01,00)", "(01,01)", "(01,10)", "(10,01)",
                                              "(11,01)", "(01,11)", "(11,10)", "(10,11)"});
  CHECK(q.label(0, q.basepoint()) == "*");
  CHECK(q.label(1, 0) == "00");
  CHECK(q.size(0) == 1);

  // simplices outside the collapsed subset map bijectively onto the non-basepoint simplices
  for (int n = 0; n <= 3; ++n) {
    std::vector<int> hits(q.size(n), 0);
    for (int t : sp.nbar.proj.f[n]) ++hits[t];
    for (std::size_t t = 1; t < q.size(n); ++t) CHECK(hits[t] == 1);
    std::size_t in_image = 0;
    std::set<int> img(sp.wedge.alpha.f[n].begin(), sp.wedge.alpha.f[n].end());
    in_image = img.size();
    CHECK(hits[0] == static_cast<int>(in_image));
  }

  const LinearSystem k33 = k33_system(parity(1));
  const SystemSpaces kp = system_spaces(k33, 2);
  CHECK(kp.nbar.space->size(1) == 34 - 6);
  for (std::size_t f = 1; f <= 6; ++f) {
    const int e = kp.wedge.wedge->index_of_label(1, std::to_string(f) + ":1");
    CHECK(kp.nzd->label(1, kp.wedge.beta(1, e)) == (f == 1 ? "1" : "0"));
  }

  const LinearSystem single(ZModMatrix(3, {{1}}), {2});
  const SystemSpaces one = system_spaces(single, 2);
  CHECK(is_bijective(one.wedge.alpha));
  CHECK(one.nbar.space->size(2) == 1);
}

TEST_CASE("quotients reject non-closed subsets") {
  const SSetPtr n = nerve_zd(3, 2);
  std::vector<std::vector<char>> z{{1}, {1, 1, 0}, std::vector<char>(9, 0)};
  z[2][0] = 1;
  CHECK_THROWS_AS(quotient_by_subset(n, z, "bad"), std::invalid_argument);
  std::vector<std::vector<char>> all{{1}, {1, 1, 1}, std::vector<char>(9, 1)};
  const auto pt = quotient_by_subset(n, all, "pt");
  CHECK(pt.space->size(1) == 1);
  CHECK(pt.space->size(2) == 1);
}

TEST_CASE("twisted products") {
  const SSetPtr host = nerve_zd(2, 3);
  const Cochain zero = Cochain::zero(host, 2, 3);
  const SSetPtr xg = twisted_product(zero, 2);
  CHECK_NOTHROW(validate(*xg));
  CHECK(xg->size(2) == 9 * host->size(2));
  for (std::size_t s = 0; s < xg->size(2); ++s) {
    const Key& k = xg->key(2, static_cast<int>(s));
    const Key& f0 = xg->key(1, xg->face(2, 0, static_cast<int>(s)));
    CHECK(f0[0] == k[1]);
  }

  Cochain bad = Cochain::zero(host, 2, 2);
  bad.set(0, 1);  // (0,0) is degenerate
  CHECK_THROWS_AS(twisted_product(bad), std::invalid_argument);

  // the carry cocycle on NZ_2 twists it into NZ_4
  Cochain carry = Cochain::zero(host, 2, 2);
  carry.set(host->index_of_key(2, {1, 1}), 1);
  CHECK(is_cocycle(carry));
  CHECK_NOTHROW(twisted_product(carry));
  const SSetPtr z4 = twisted_product(carry);
  CHECK_NOTHROW(validate(*z4));
  const int s = host->index_of_key(2, {1, 1});
  const int t = z4->index_of_key(2, {0, 1, s});
  CHECK(z4->key(1, z4->face(2, 0, t)) == Key{0, host->index_of_key(1, {1})});

  const SSetPtr nz3 = nerve_zd(3, 3);
  Cochain broken = Cochain::zero(nz3, 2, 3);
  broken.set(nz3->index_of_key(2, {1, 1}), 1);
  CHECK_FALSE(is_cocycle(broken));
  CHECK_THROWS_AS(twisted_product(broken), std::invalid_argument);
}

TEST_CASE("twisted products recover commutative nerves") {
  for (const char* spec : {"dihedral:8", "quaternion", "central_product(dihedral:8,dihedral:8)", "extraspecial:3:1:+"}) {
    CAPTURE(spec);
    const FinGroupJ g = build_group(spec);
    const auto ext = quotient_by_J(g);
    const SSetPtr nbar = nbar_group(ext, g.d(), 3);
    CHECK_NOTHROW(validate(*nbar));
    const Cochain gamma = section_cocycle(nbar, ext);
    CHECK(is_cocycle(gamma));
    CHECK(is_normalized(gamma));
    const SSetPtr xg = twisted_product(gamma, 2);
    const SSetPtr target = comm_nerve(g, g.d(), 2);
    for (int n = 0; n <= 2; ++n) CHECK(xg->size(n) == target->size(n));
    const SMap iso = twisted_iso(ext, gamma, xg, target);
    CHECK(is_bijective(iso));
  }
  const FinGroupJ d8 = dihedral_group(8);
  const auto ext = quotient_by_J(d8);
  const SSetPtr nbar = nbar_group(ext, 2, 3);
  const Cochain gamma = section_cocycle(nbar, ext);
  const SSetPtr xg = twisted_product(gamma, 2);
  const SSetPtr target = comm_nerve(d8, 2, 2);
  const SMap iso = twisted_iso(ext, gamma, xg, target);
  // r has order 4, so only reflections survive in degree 1
  const int sbar = nbar->key(1, 1)[0];
  CHECK(d8.element_order(ext.section[sbar]) == 2);
  const int src = xg->index_of_key(1, {1, 1});
  CHECK(target->key(1, iso(1, src)) == Key{d8.mul(d8.J(), ext.section[sbar])});
  CHECK(iso(0, 0) == 0);
}

TEST_CASE("E(Z_d,G)") {
  const FinGroupJ d8 = dihedral_group(8);
  const SSetPtr e = e_space(d8, 2, 3);
  CHECK_NOTHROW(validate(*e));
  CHECK(e->size(1) == 48);
  for (std::size_t s = 0; s < e->size(1); ++s) {
    const Key& k = e->key(1, static_cast<int>(s));
    CHECK(e->key(0, e->face(1, 1, static_cast<int>(s))) == Key{k[0]});
    CHECK(e->key(0, e->face(1, 0, static_cast<int>(s))) == Key{d8.mul(k[0], k[1])});
  }
  const SSetPtr e2 = e_space(cyclic_group(2), 2, 3);
  for (int n = 0; n <= 3; ++n) CHECK(e2->size(n) == static_cast<std::size_t>(2 << n));
}

TEST_CASE("maps from solutions") {
  const LinearSystem odd = k33_system(parity(1));
  const FinGroupJ e = build_group("central_product(dihedral:8,dihedral:8)");
  const SystemSpaces sp = system_spaces(odd, 2);
  const SSetPtr comm = comm_nerve(e, 2, 2);
  const auto sols = solutions(odd, e, 3);
  REQUIRE_FALSE(sols.empty());
  for (const auto& T : sols) {
    const SMap f = map_from_solution(sp, e, T, comm);
    for (std::size_t i = 0; i < odd.rows(); ++i) {
      const int w = sp.wedge.wedge->index_of_label(1, std::to_string(i + 1) + ":1");
      CHECK(comm->key(1, f(1, sp.wedge.alpha(1, w))) == Key{e.pow(e.J(), odd.b[i])});
    }
  }
  std::vector<int> not_solution(9, e.identity());
  CHECK_THROWS_AS(map_from_solution(sp, e, not_solution, comm), std::invalid_argument);

  const LinearSystem zero = k33_system(parity(0));
  const SystemSpaces zp = system_spaces(zero, 2);
  const SMap f0 = map_from_solution(zp, e, std::vector<int>(9, e.identity()), comm);
  for (int t : f0.f[1]) CHECK(t == comm->index_of_key(1, {e.identity()}));

  const LinearSystem single(ZModMatrix(2, {{1}}), {1});
  const FinGroupJ z2 = cyclic_group(2);
  const SystemSpaces ss = system_spaces(single, 2);
  const SSetPtr cz = comm_nerve(z2, 2, 2);
  const SMap fs = map_from_solution(ss, z2, {1}, cz);
  CHECK(cz->key(1, fs(1, ss.nzd_sigma->index_of_label(1, "1"))) == Key{1});
}

TEST_CASE("power maps on commutative nerves") {
  const FinGroupJ z4 = cyclic_group(4);
  const SSetPtr n4 = comm_nerve(z4, 4, 2);
  const SMap w1 = power_map_s(z4, 1, n4, n4);
  for (int n = 0; n <= 2; ++n)
    for (std::size_t s = 0; s < n4->size(n); ++s) CHECK(w1(n, static_cast<int>(s)) == static_cast<int>(s));
  const SMap w2 = power_map_s(z4, 2, n4, n4);
  CHECK(n4->key(2, w2(2, n4->index_of_key(2, {1, 3}))) == Key{2, 2});

  // q = 3 on Z_6 lands in the 2-torsion; composing with the inverse of 3 mod 2 is reduction mod 2
  const FinGroupJ z6 = cyclic_group(6);
  const SSetPtr n6 = comm_nerve(z6, 6, 2), n62 = comm_nerve(z6, 2, 2);
  const SMap w3 = power_map_s(z6, 3, n6, n62);
  const SMap w1b = power_map_s(z6, 1, n62, n62);
  const SMap both = compose(w1b, w3);
  for (int n = 0; n <= 2; ++n)
    for (std::size_t s = 0; s < n6->size(n); ++s) {
      Key expect;
      for (int a : n6->key(n, static_cast<int>(s))) expect.push_back(3 * (a % 2));
      CHECK(n62->key(n, both(n, static_cast<int>(s))) == expect);
    }

  const FinGroupJ d8 = dihedral_group(8);
  const SSetPtr nd = comm_nerve(d8, 2, 2);
  for (i64 m : {-1, 3})
    for (i64 m2 : {-1, 3, 5}) {
      const SMap a = power_map_s(d8, m, nd, nd), b = power_map_s(d8, m2, nd, nd), ab = power_map_s(d8, m * m2, nd, nd);
      CHECK(compose(a, b).f == ab.f);
    }
}

TEST_CASE("sets from nondegenerate cells") {
  // the circle with one vertex and one loop
  const std::vector<NondegCell> circle{{0, "v", {}}, {1, "e", {{0, {}}, {0, {}}}}};
  const SSetPtr s1 = sset_from_cells(circle, 3, "S1");
  CHECK(s1->size(0) == 1);
  CHECK(s1->size(1) == 2);
  CHECK(s1->size(2) == 3);
  CHECK(s1->size(3) == 4);
  CHECK(labels(*s1, 2) == std::set<std::string>{"s1(s0(v))", "s0(e)", "s1(e)"});
  CHECK(s1->nondegenerate(2).empty());

  // a 2-simplex whose last face is degenerate: the collapsed cone on a loop
  const std::vector<NondegCell> cone{{0, "v", {}}, {1, "e", {{0, {}}, {0, {}}}}, {2, "c", {{1, {}}, {1, {}}, {0, {0, 0}}}}};
  const SSetPtr x = sset_from_cells(cone, 3, "cone");
  CHECK(x->nondegenerate(2).size() == 1);

  CHECK_THROWS_AS(sset_from_cells({{0, "v", {}}, {1, "e", {{0, {}}}}}, 2, "bad"), std::invalid_argument);
  // inconsistent faces violate the simplicial identities
  const std::vector<NondegCell> wrong{
      {0, "a", {}}, {0, "b", {}}, {1, "e", {{1, {}}, {0, {}}}}, {1, "f", {{1, {}}, {0, {}}}}, {2, "t", {{2, {}}, {3, {}}, {2, {}}}}};
  CHECK_THROWS_AS(sset_from_cells(wrong, 2, "wrong"), std::invalid_argument);
}

TEST_CASE("the K33 torus") {
  const TorusFixture t = k33_torus_fixture();
  const TruncatedSSet& x = *t.X;
  CHECK(x.nondegenerate(0).size() == 3);
  CHECK(x.nondegenerate(1).size() == 9);
  CHECK(x.nondegenerate(2).size() == 6);
  CHECK(x.nondegenerate(3).empty());
  const int euler = 3 - 9 + 6;
  CHECK(euler == 0);
  CHECK(x.label(0, x.basepoint()) == "A");

  // each edge is shared by exactly the two triangles of its K33 edge
  const LinearSystem k33 = k33_system(parity(0));
  for (std::size_t r = 0; r < 6; ++r) {
    const int tri = x.index_of_label(2, t.triangles[r]);
    std::set<std::string> faces;
    for (int i = 0; i <= 2; ++i) faces.insert(x.label(1, x.face(2, i, tri)));
    std::set<std::string> expect;
    for (std::size_t c : k33.support(r)) expect.insert(t.edges[c]);
    CHECK(faces == expect);
  }
  const int s1 = x.index_of_label(2, "sigma1");
  CHECK(x.label(1, x.face(2, 0, s1)) == "x");
  CHECK(x.label(1, x.face(2, 1, s1)) == "t1");
  CHECK(x.label(1, x.face(2, 2, s1)) == "z1");
}
