#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "doctest.h"
#include "lcs/cohomology.hpp"
#include "lcs/io.hpp"

using namespace lcs;

namespace {

SSetPtr round_trip(const TruncatedSSet& x) {
  std::istringstream in(sset_to_json(x).dump());
  return read_sset(in, x.name());
}

SimplicialDistribution parse_dist(const std::string& text, SSetPtr host, i64 d) {
  std::istringstream in(text);
  return read_distribution(in, std::move(host), d);
}

const SystemSpaces& k33_spaces() {
  static const SystemSpaces k = system_spaces(k33_system({1, 0, 0, 0, 0, 0}), 2);
  return k;
}

// Output of a CLI invocation, and its exit status.
std::pair<int, std::string> run_cli(const std::string& args) {
  const std::string out_file = "cli_io_out.txt";
  const std::string cmd = std::string(LCS_CLI_PATH) + " " + args + " > " + out_file + " 2>&1";
  const int raw = std::system(cmd.c_str());
  std::ifstream in(out_file);
  std::stringstream ss;
  ss << in.rdbuf();
  std::remove(out_file.c_str());
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, ss.str()};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

const char* k33_lcs =
    "2 6 9\n"
    "1 1 1 0 0 0 0 0 0\n"
    "0 0 0 1 1 1 0 0 0\n"
    "0 0 0 0 0 0 1 1 1\n"
    "1 0 0 1 0 0 1 0 0\n"
    "0 1 0 0 1 0 0 1 0\n"
    "0 0 1 0 0 1 0 0 1\n";

}  // namespace

TEST_CASE("simplicial sets survive a JSON round trip") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 25; ++trial) {
    const SSetPtr x = random_small_sset(rng);
    const SSetPtr y = round_trip(*x);
    CHECK(sset_to_json(*y) == sset_to_json(*x));
    for (int n = 0; n <= x->cap(); ++n) CHECK(y->nondegenerate(n) == x->nondegenerate(n));
  }
  const SSetPtr k = k33_spaces().nzd_sigma;
  CHECK(sset_to_json(*round_trip(*k)) == sset_to_json(*k));
  const TorusFixture t = k33_torus_fixture(2);
  const SSetPtr tx = round_trip(*t.X);
  const Cochain g = torus_cocycle(t, {1, 0, 0, 0, 0, 0}, 2);
  Cochain h = Cochain::zero(tx, 2, 2);
  for (std::size_t s = 0; s < t.X->size(2); ++s) h.set(static_cast<int>(s), g(static_cast<int>(s)));
  CHECK(is_cocycle(h));
  CHECK(format_lcs(extract_linear_system(h)) == format_lcs(extract_linear_system(g)));
}

TEST_CASE("malformed simplicial set files are rejected") {
  const json good = sset_to_json(*k33_torus_fixture(2).X);
  auto rejects = [](const json& j) { CHECK_THROWS_AS(sset_from_json(j), std::invalid_argument); };
  std::istringstream broken("{\"cap\": 2, \"simplices\": ");
  CHECK_THROWS_AS(read_sset(broken), std::invalid_argument);
  json j = good;
  j.erase("cap");
  rejects(j);
  j = good;
  j["cap"] = 9;
  rejects(j);
  j = good;
  j["simplices"].erase("1");
  rejects(j);
  j = good;
  j["faces"]["3,0"] = json::object();
  rejects(j);
  j = good;
  j["faces"]["two,zero"] = json::object();
  rejects(j);
  j = good;
  j["faces"]["1,0"]["x"] = "nowhere";
  rejects(j);
  // A face assignment that breaks the simplicial identities.
  j = good;
  j["faces"]["1,0"]["x"] = "A";
  j["faces"]["1,1"]["x"] = "E";
  rejects(j);
}

TEST_CASE("distribution files") {
  const SystemSpaces& k = k33_spaces();
  const SimplicialDistribution q = quantum_distribution(k, k33_pauli_solution({1, 0, 0, 0, 0, 0}),
                                                        CMatrix::Identity(4, 4) / 4.0);
  std::ostringstream out;
  write_distribution(out, q);
  CHECK(parse_dist(out.str(), k.nzd_sigma, 2) == q);

  const std::string edge = k.nzd_sigma->label(1, k.nzd_sigma->nondegenerate(1).front());
  CHECK_THROWS_AS(parse_dist(edge + " 0 1/2\n", k.nzd_sigma, 2), std::invalid_argument);  // mass 1/2 only
  CHECK_THROWS_AS(parse_dist(edge + " 2 1\n", k.nzd_sigma, 2), std::invalid_argument);
  CHECK_THROWS_AS(parse_dist(edge + " 0 1/0\n", k.nzd_sigma, 2), std::invalid_argument);
  CHECK_THROWS_AS(parse_dist(edge + " 0 half\n", k.nzd_sigma, 2), std::invalid_argument);
  CHECK_THROWS_AS(parse_dist("no-such-simplex 0 1\n", k.nzd_sigma, 2), std::invalid_argument);
  CHECK_THROWS_AS(parse_dist(edge + " 0,1,0 1\n", k.nzd_sigma, 2), std::invalid_argument);
  try {
    parse_dist("# header\n\n" + edge + " 0\n", k.nzd_sigma, 2);
    FAIL("accepted a line without probability");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("verdict JSON") {
  const SystemSpaces& k = k33_spaces();
  const SimplicialDistribution q = quantum_distribution(k, k33_pauli_solution({1, 0, 0, 0, 0, 0}),
                                                        CMatrix::Identity(4, 4) / 4.0);
  const json v = verdict_to_json(q, is_contextual(q));
  CHECK(v["verdict"] == "contextual");
  CHECK(v["verified"] == true);
  CHECK(mpq_class(v["farkas"]["value_on_distribution"].get<std::string>()) < 0);
  CHECK(v.dump() == verdict_to_json(q, is_contextual(q)).dump());

  const auto dets = enumerate_deterministic(*k.nzd_sigma, 2);
  const SimplicialDistribution u = theta(k.nzd_sigma, 2, {{dets[0], mpq_class(1, 2)}, {dets[5], mpq_class(1, 2)}});
  const json w = verdict_to_json(u, is_contextual(u));
  CHECK(w["verdict"] == "noncontextual");
  CHECK(w["verified"] == true);
  mpq_class total = 0;
  for (const auto& m : w["witness"]) total += mpq_class(m["weight"].get<std::string>());
  CHECK(total == 1);
}

TEST_CASE("command line tool") {
  write_file("cli_k33_odd.lcs", std::string(k33_lcs) + "1 0 0 0 0 0\n");
  write_file("cli_k33_even.lcs", std::string(k33_lcs) + "0 0 0 0 0 0\n");
  write_file("cli_bad.lcs", "2 1 2\n1 x\n0\n");

  auto [code, out] = run_cli("solve cli_k33_odd.lcs --group cyclic:2");
  CHECK(code == 1);
  CHECK(out.find("solutions: 0") != std::string::npos);
  std::tie(code, out) = run_cli("solve cli_k33_odd.lcs --group 'central_product(dihedral:8,dihedral:8)' --limit 1");
  CHECK(code == 0);
  std::tie(code, out) = run_cli("solve cli_k33_even.lcs --group cyclic:2 --json");
  CHECK(code == 0);
  CHECK(json::parse(out)["solutions"] == 16);

  std::tie(code, out) = run_cli("--json solgroup cli_k33_odd.lcs");
  CHECK(code == 0);
  const json sg = json::parse(out);
  CHECK(sg["order"] == 32);
  CHECK(sg["abelian"] == false);
  CHECK(sg["solvable_in_Z_d"] == false);
  std::tie(code, out) = run_cli("solgroup cli_k33_odd.lcs --todd-coxeter-cap 5");
  CHECK(code == 2);

  std::tie(code, out) = run_cli("solve cli_bad.lcs --group cyclic:2");
  CHECK(code == 3);
  CHECK(out.find("line 2") != std::string::npos);
  std::tie(code, out) = run_cli("solve missing.lcs --group cyclic:2");
  CHECK(code == 3);
  std::tie(code, out) = run_cli("solve cli_k33_odd.lcs --group nonsense:3");
  CHECK(code == 3);
  std::tie(code, out) = run_cli("frobnicate");
  CHECK(code == 3);

  std::tie(code, out) = run_cli("distribution pauli --b 100000 > cli_pauli.dist; " + std::string(LCS_CLI_PATH) +
                                " --json contextual k33 cli_pauli.dist");
  CHECK(code == 0);
  CHECK(json::parse(out)["verdict"] == "contextual");
  std::tie(code, out) = run_cli("distribution uniform > cli_uniform.dist; " + std::string(LCS_CLI_PATH) +
                                " --json contextual k33 cli_uniform.dist");
  CHECK(code == 0);
  CHECK(json::parse(out)["verdict"] == "noncontextual");

  std::tie(code, out) = run_cli("realize k33-torus --b 100000 --write-sset cli_torus.json");
  CHECK(code == 0);
  std::tie(code, out) = run_cli("realize cli_torus.json");
  CHECK(code == 0);
  std::tie(code, out) = run_cli("realize example-2-15 --json");
  CHECK(code == 0);
  CHECK(json::parse(out)["system"]["d"] == 2);

  std::tie(code, out) = run_cli("kgroup --group extraspecial:2:2:+ --d 2 --json");
  CHECK(code == 0);
  CHECK(json::parse(out)["K_order"] == 1);

  std::tie(code, out) = run_cli("--json reproduce power-maps");
  CHECK(code == 0);
  const std::string first = out;
  std::tie(code, out) = run_cli("--json reproduce power-maps");
  CHECK(out == first);
  std::tie(code, out) = run_cli("reproduce no-such-scenario");
  CHECK(code == 3);

  for (const char* f : {"cli_k33_odd.lcs", "cli_k33_even.lcs", "cli_bad.lcs", "cli_pauli.dist", "cli_uniform.dist",
                        "cli_torus.json"})
    std::remove(f);
}
