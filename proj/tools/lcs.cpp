#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "lcs/io.hpp"
#include "lcs/reproduce.hpp"

using namespace lcs;

namespace {

enum Exit { kPass = 0, kFail = 1, kInconclusive = 2, kInputError = 3 };

struct Options {
  std::string group;
  std::size_t tc_cap = 1000000;
  int cap = 2;
  bool json = false;
  unsigned seed = 0;
  bool timings = false;
};

// FNV-1a digests of every file read, reported with the results.
json input_digests = json::object();

std::string fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) h = (h ^ c) * 1099511628211ull;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  input_digests[path] = fnv1a(ss.str());
  return ss.str();
}

LinearSystem load_system(const std::string& path) {
  std::istringstream in(read_file(path));
  try {
    return parse_lcs(in);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

ZVec parse_bits(const std::string& s, std::size_t n, i64 d) {
  ZVec b;
  for (char c : s) {
    if (c == ',' || c == ' ') continue;
    if (c < '0' || c - '0' >= d) throw std::invalid_argument("--b entries must be digits below " + std::to_string(d));
    b.push_back(c - '0');
  }
  if (b.size() != n) throw std::invalid_argument("--b needs " + std::to_string(n) + " entries");
  return b;
}

json system_json(const LinearSystem& s) {
  json rows = json::array();
  for (std::size_t i = 0; i < s.rows(); ++i) rows.push_back(s.A.row(i));
  return {{"d", s.d()}, {"rows", s.row_labels}, {"cols", s.col_labels}, {"A", rows}, {"b", s.b}};
}

void emit(const Options& o, json j, const std::string& text) {
  if (!input_digests.empty()) j["inputs"] = input_digests;
  if (o.json)
    std::cout << j.dump(2) << '\n';
  else
    std::cout << text;
}

// ---------------------------------------------------------------- solve

int cmd_solve(const Options& o, const std::string& file, std::size_t limit) {
  if (o.group.empty()) throw std::invalid_argument("solve needs --group");
  const LinearSystem s = load_system(file);
  const FinGroupJ g = build_group(o.group);
  const auto sols = solutions(s, g);
  json wit = json::array();
  std::ostringstream text;
  text << "system " << file << " over Z_" << s.d() << " in " << g.label() << " (order " << g.order() << ")\n";
  text << "solutions: " << sols.size() << '\n';
  for (std::size_t k = 0; k < sols.size() && k < limit; ++k) {
    json w = json::object();
    text << "  ";
    for (std::size_t j = 0; j < s.cols(); ++j) {
      w[s.col_labels[j]] = g.name(sols[k][j]);
      text << s.col_labels[j] << '=' << g.name(sols[k][j]) << (j + 1 < s.cols() ? " " : "\n");
    }
    wit.push_back(w);
  }
  emit(o, {{"command", "solve"}, {"group", g.label()}, {"solutions", sols.size()}, {"witnesses", wit}}, text.str());
  return sols.empty() ? kFail : kPass;
}

// ---------------------------------------------------------------- solgroup

int cmd_solgroup(const Options& o, const std::string& file, bool show_presentation) {
  const LinearSystem s = load_system(file);
  const Presentation p = solution_group(s);
  const AbelianInvariants ab = abelianization(p);
  const auto tc = todd_coxeter_simplified(p, o.tc_cap);
  json j{{"command", "solgroup"}, {"generators", p.num_gens()}, {"relators", p.relators.size()}};
  std::ostringstream text;
  if (show_presentation) {
    j["presentation"] = p.to_text();
    text << p.to_text();
  }
  j["abelianization_order"] = ab.order();
  text << "abelianization order: " << ab.order() << '\n';
  if (!tc) {
    j["order"] = nullptr;
    j["status"] = "inconclusive";
    text << "coset enumeration exceeded " << o.tc_cap << " cosets: inconclusive\n";
    emit(o, j, text.str());
    return kInconclusive;
  }
  j["order"] = tc->order;
  text << "order: " << tc->order << '\n';
  if (tc->has_table) {
    const bool abelian = tc->group.is_abelian();
    const int jord = tc->group.element_order(*tc->J);
    j["abelian"] = abelian;
    j["J_order"] = jord;
    j["solvable_in_Z_d"] = abelian && jord == s.d();
    text << (abelian ? "abelian" : "nonabelian") << ", J has order " << jord << '\n';
    if (jord != s.d()) text << "J has order below d: the system has no solution in any group\n";
  }
  j["status"] = "pass";
  emit(o, j, text.str());
  return kPass;
}

// ---------------------------------------------------------------- realize and contextual inputs

struct Space {
  SSetPtr x;
  std::optional<Cochain> default_cochain;
};

Space load_space(const Options& o, const std::string& name, const std::string& bits, i64 d) {
  if (name == "example-2-15") {
    const ZVec b = bits.empty() ? ZVec{1, 0} : parse_bits(bits, 2, 2);
    const SystemSpaces sp = system_spaces(example_2x2_system(b[0], b[1]), std::max(o.cap, 2));
    return {sp.nbar.space, gamma_b(sp)};
  }
  if (name == "k33-torus") {
    const TorusFixture t = k33_torus_fixture(std::max(o.cap, 2));
    if (bits.empty()) return {t.X, std::nullopt};
    return {t.X, torus_cocycle(t, parse_bits(bits, 6, d), d)};
  }
  std::istringstream in(read_file(name));
  try {
    return {read_sset(in, name), std::nullopt};
  } catch (const std::exception& e) {
    throw std::invalid_argument(name + ": " + e.what());
  }
}

int cmd_realize(const Options& o, const std::string& space, const std::string& cochain_file, const std::string& bits,
                i64 d, bool nondegenerate, const std::string& write_sset) {
  const Space sp = load_space(o, space, bits, d);
  Cochain gamma = Cochain::zero(sp.x, 2, d);
  if (!cochain_file.empty()) {
    std::istringstream in(read_file(cochain_file));
    gamma = read_cochain(in, sp.x, 2, d);
  } else if (sp.default_cochain) {
    gamma = *sp.default_cochain;
  }
  if (!is_cocycle(gamma)) throw std::invalid_argument("the cochain is not a cocycle");
  if (!write_sset.empty()) {
    std::ofstream out(write_sset);
    if (!out) throw std::invalid_argument("cannot write " + write_sset);
    out << sset_to_json(*sp.x).dump(1) << '\n';
  }
  const LinearSystem s = extract_linear_system(gamma, nondegenerate);
  emit(o, {{"command", "realize"}, {"system", system_json(s)}}, format_lcs(s));
  return kPass;
}

SSetPtr contextual_host(const Options& o, const std::string& name, const std::string& bits) {
  if (name == "k33") return system_spaces(k33_system(bits.empty() ? ZVec(6, 0) : parse_bits(bits, 6, 2)), 2).nzd_sigma;
  if (name == "example-2-15") return system_spaces(example_2x2_system(0, 0), 2).nzd_sigma;
  return load_space(o, name, "", 2).x;
}

int cmd_contextual(const Options& o, const std::string& host_name, const std::string& dist_file, i64 d) {
  const SSetPtr host = contextual_host(o, host_name, "");
  std::istringstream in(read_file(dist_file));
  const SimplicialDistribution q = read_distribution(in, host, d);
  const Verdict v = is_contextual(q);
  json j = verdict_to_json(q, v);
  std::ostringstream text;
  text << "verdict: " << j["verdict"].get<std::string>() << '\n';
  if (v.contextual)
    text << "Farkas witness with " << v.farkas.terms.size() << " terms, value " << farkas_value(v.farkas, q).get_str()
         << " on the distribution and >= 0 on all " << v.deterministic.size() << " deterministic distributions\n";
  else
    text << "mixture of " << v.decomposition.size() << " deterministic distributions\n";
  text << "certificate re-verified: " << (j["verified"].get<bool>() ? "yes" : "no") << '\n';
  emit(o, j, text.str());
  return j["verified"].get<bool>() ? kPass : kFail;
}

// Writes a built-in distribution on the K33 scenario: the Pauli operator solution measured in a
// state, or the uniform mixture of deterministic distributions.
int cmd_distribution(const Options& o, const std::string& kind, const std::string& bits, const std::string& state) {
  const ZVec b = bits.empty() ? ZVec{1, 0, 0, 0, 0, 0} : parse_bits(bits, 6, 2);
  const SystemSpaces k = system_spaces(k33_system(b), 2);
  SimplicialDistribution q;
  if (kind == "pauli") {
    CMatrix rho = CMatrix::Identity(4, 4) / 4.0;
    if (state == "random") {
      std::mt19937 rng(o.seed);
      rho = random_rational_pure_state(4, rng);
    } else if (state != "mixed") {
      throw std::invalid_argument("--state is 'mixed' or 'random'");
    }
    q = quantum_distribution(k, k33_pauli_solution(b), rho);
  } else if (kind == "uniform") {
    const auto dets = enumerate_deterministic(*k.nzd_sigma, 2);
    std::vector<Weighted> mix;
    for (const auto& f : dets) mix.push_back({f, mpq_class(1, static_cast<long>(dets.size()))});
    q = theta(k.nzd_sigma, 2, mix);
  } else {
    throw std::invalid_argument("distribution kind is 'pauli' or 'uniform'");
  }
  write_distribution(std::cout, q);
  return kPass;
}

// ---------------------------------------------------------------- K(Z_d, G)

int cmd_kgroup(const Options& o, i64 d) {
  if (o.group.empty()) throw std::invalid_argument("kgroup needs --group");
  const FinGroupJ g = build_group(o.group);
  const KGroup k = k_group(g, d);
  json j{{"command", "kgroup"}, {"group", g.label()}, {"d", d}};
  std::ostringstream text;
  const auto gamma = todd_coxeter_simplified(k.target, o.tc_cap);
  if (gamma) {
    j["gamma_order"] = gamma->order;
    text << "Gamma(Z_" << d << ", " << g.label() << ") has order " << gamma->order << '\n';
  }
  const auto kt = todd_coxeter_simplified(k.pres, o.tc_cap);
  if (kt) {
    j["K_order"] = kt->order;
    j["status"] = "pass";
    text << "K has order " << kt->order << '\n';
    emit(o, j, text.str());
    return kPass;
  }
  const AbelianInvariants ab = abelianization(k.pres);
  if (ab.order() != 1) {
    j["K_order"] = nullptr;
    j["K_nontrivial"] = true;
    j["status"] = "pass";
    text << "K is nontrivial (abelianization order " << (ab.order() == 0 ? std::string("infinite") : std::to_string(ab.order()))
         << ")\n";
    emit(o, j, text.str());
    return kPass;
  }
  j["status"] = "inconclusive";
  text << "coset enumeration exceeded the cap and the abelianization of K is trivial: inconclusive\n";
  emit(o, j, text.str());
  return kInconclusive;
}

// ---------------------------------------------------------------- reproduce

int cmd_reproduce(const Options& o, const std::string& scenario) {
  std::vector<int> ids;
  for (const auto& [name, crit] : scenarios())
    if (scenario == "all" || scenario == name) ids.insert(ids.end(), crit.begin(), crit.end());
  if (ids.empty()) {
    std::string names;
    for (const auto& [name, crit] : scenarios()) names += " " + name;
    throw std::invalid_argument("unknown scenario '" + scenario + "'; known:" + names + " all");
  }
  json results = json::array();
  std::ostringstream text;
  bool fail = false, undecided = false;
  for (const auto& c : all_criteria(o.seed)) {
    if (std::find(ids.begin(), ids.end(), c.id) == ids.end()) continue;
    const CheckResult r = run_timed(c);
    fail = fail || r.status == Status::fail;
    undecided = undecided || r.status == Status::inconclusive;
    json e{{"criterion", r.criterion}, {"title", r.title}, {"status", status_name(r.status)}, {"details", r.details},
           {"problems", r.problems}};
    if (o.timings) e["seconds"] = r.seconds;
    results.push_back(e);
    text << "criterion " << r.criterion << " (" << r.title << "): " << status_name(r.status);
    if (o.timings) text << " in " << r.seconds << "s";
    text << '\n';
    for (const auto& p : r.problems) text << "  " << p << '\n';
  }
  emit(o, {{"command", "reproduce"}, {"scenario", scenario}, {"results", results}}, text.str());
  return fail ? kFail : undecided ? kInconclusive : kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear constraint systems, solution groups and simplicial distributions over Z_d"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--group", o.group, "group spec, e.g. central_product(dihedral:8,dihedral:8)");
  app.add_option("--todd-coxeter-cap", o.tc_cap, "coset limit for Todd-Coxeter");
  app.add_option("--cap", o.cap, "dimension cap for built-in simplicial sets")->check(CLI::Range(2, 4));
  app.add_flag("--json", o.json, "machine-readable output");
  app.add_option("--seed", o.seed, "seed for randomized corpora and states");
  app.add_flag("--timings", o.timings, "include wall-clock times in reports");

  std::string file, space, cochain, bits, scenario = "all", dist, kind = "pauli", state = "mixed";
  std::size_t limit = 5;
  i64 d = 2;
  bool show_presentation = false, nondegenerate = false;
  std::string write_sset;

  auto* solve_cmd = app.add_subcommand("solve", "solutions of a system in a finite group");
  solve_cmd->add_option("system", file, ".lcs file")->required();
  solve_cmd->add_option("--limit", limit, "witnesses to print");

  auto* solgroup_cmd = app.add_subcommand("solgroup", "the solution group of a system");
  solgroup_cmd->add_option("system", file, ".lcs file")->required();
  solgroup_cmd->add_flag("--presentation", show_presentation, "print the presentation");

  auto* realize_cmd = app.add_subcommand("realize", "the linear system of a simplicial set with a 2-cocycle");
  realize_cmd->add_option("space", space, "JSON simplicial set, or example-2-15 / k33-torus")->required();
  realize_cmd->add_option("cochain", cochain, "cochain file (default: zero, or gamma_b for example-2-15)");
  realize_cmd->add_option("--b", bits, "right-hand side for the built-in spaces");
  realize_cmd->add_option("--d", d, "modulus")->check(CLI::Range(2, 64));
  realize_cmd->add_flag("--nondegenerate", nondegenerate, "keep only nondegenerate simplices");
  realize_cmd->add_option("--write-sset", write_sset, "also write the simplicial set as JSON");

  auto* reproduce_cmd = app.add_subcommand("reproduce", "run reproduction scenarios");
  reproduce_cmd->add_option("scenario", scenario, "k33, example-2-15, twisted-iso, extraspecial-2, odd-p, frembs-split, "
                                                  "power-maps, properties or all");

  auto* contextual_cmd = app.add_subcommand("contextual", "decide contextuality of a distribution by exact LP");
  contextual_cmd->add_option("space", space, "JSON simplicial set, or k33 / example-2-15 scenarios")->required();
  contextual_cmd->add_option("distribution", dist, "distribution file")->required();
  contextual_cmd->add_option("--d", d, "modulus")->check(CLI::Range(2, 64));

  auto* distribution_cmd = app.add_subcommand("distribution", "write a built-in distribution on the K33 scenario");
  distribution_cmd->add_option("kind", kind, "pauli or uniform");
  distribution_cmd->add_option("--b", bits, "parity vector (odd for pauli)");
  distribution_cmd->add_option("--state", state, "mixed or random");

  auto* kgroup_cmd = app.add_subcommand("kgroup", "order of K(Z_d, G) for the group given by --group");
  kgroup_cmd->add_option("--d", d, "modulus")->check(CLI::Range(2, 64));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*solve_cmd) return cmd_solve(o, file, limit);
    if (*solgroup_cmd) return cmd_solgroup(o, file, show_presentation);
    if (*realize_cmd) return cmd_realize(o, space, cochain, bits, d, nondegenerate, write_sset);
    if (*reproduce_cmd) return cmd_reproduce(o, scenario);
    if (*contextual_cmd) return cmd_contextual(o, space, dist, d);
    if (*distribution_cmd) return cmd_distribution(o, kind, bits, state);
    if (*kgroup_cmd) return cmd_kgroup(o, d);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFail;
  }
  return kInputError;
}
