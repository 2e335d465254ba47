#pragma once

#include <gmpxx.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcs/linear_system.hpp"
#include "lcs/simplicial.hpp"
#include "lcs/sset.hpp"
#include "lcs/zmod.hpp"

namespace lcs {

// ---------------------------------------------------------------- distributions on (X, NZ_d)

// Outcomes of a degree-n simplex of NZ_d are tuples (a_1..a_n), stored as a_1 + a_2 d + ...
inline int outcome_count(i64 d, int n) { return n == 0 ? 1 : n == 1 ? static_cast<int>(d) : static_cast<int>(d * d); }

inline ZVec decode_outcome(int code, i64 d, int n) {
  ZVec a(n);
  for (int i = 0; i < n; ++i, code /= static_cast<int>(d)) a[i] = code % d;
  return a;
}

inline int encode_outcome(const ZVec& a, i64 d) {
  int c = 0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) c = c * static_cast<int>(d) + static_cast<int>(mod_reduce(*it, d));
  return c;
}

// Face and degeneracy maps of NZ_d on outcome codes.
inline int nzd_face(i64 d, int n, int i, int code) {
  const ZVec a = decode_outcome(code, d, n);
  if (n == 1) return 0;
  if (i == 0) return static_cast<int>(a[1]);
  if (i == 1) return static_cast<int>((a[0] + a[1]) % d);
  return static_cast<int>(a[0]);
}

inline int nzd_degen(i64 d, int n, int j, int code) {
  if (n == 0) return 0;
  return j == 0 ? static_cast<int>(d) * code : code;
}

struct SimplicialDistribution {
  SSetPtr host;
  i64 d = 2;
  std::vector<std::vector<std::vector<mpq_class>>> p;  // degree -> simplex -> outcome

  static SimplicialDistribution zero(SSetPtr x, i64 d) {
    if (x->cap() < 2) throw std::invalid_argument("distributions need degree 2");
    SimplicialDistribution s{x, d, {}};
    for (int n = 0; n <= 2; ++n) s.p.emplace_back(x->size(n), std::vector<mpq_class>(outcome_count(d, n), 0));
    return s;
  }
  const std::vector<mpq_class>& at(int n, int s) const { return p[n][s]; }
  friend bool operator==(const SimplicialDistribution& a, const SimplicialDistribution& b) {
    return a.host == b.host && a.d == b.d && a.p == b.p;
  }
};

// Checks normalization, nonnegativity and compatibility with faces and degeneracies (degrees <= 2).
inline std::optional<std::string> distribution_problem(const SimplicialDistribution& q) {
  const TruncatedSSet& x = *q.host;
  const i64 d = q.d;
  for (int n = 0; n <= 2; ++n)
    for (std::size_t s = 0; s < x.size(n); ++s) {
      mpq_class total = 0;
      for (const auto& v : q.p[n][s]) {
        if (v < 0) return "negative probability on " + x.label(n, static_cast<int>(s));
        total += v;
      }
      if (total != 1) return "probabilities on " + x.label(n, static_cast<int>(s)) + " sum to " + total.get_str();
    }
  for (int n = 1; n <= 2; ++n)
    for (std::size_t s = 0; s < x.size(n); ++s)
      for (int i = 0; i <= n; ++i) {
        std::vector<mpq_class> push(outcome_count(d, n - 1), 0);
        for (int a = 0; a < outcome_count(d, n); ++a) push[nzd_face(d, n, i, a)] += q.p[n][s][a];
        if (push != q.p[n - 1][x.face(n, i, static_cast<int>(s))])
          return "face " + std::to_string(i) + " of " + x.label(n, static_cast<int>(s)) + " is incompatible";
      }
  for (int n = 0; n < 2; ++n)
    for (std::size_t s = 0; s < x.size(n); ++s)
      for (int j = 0; j <= n; ++j) {
        std::vector<mpq_class> push(outcome_count(d, n + 1), 0);
        for (int a = 0; a < outcome_count(d, n); ++a) push[nzd_degen(d, n, j, a)] += q.p[n][s][a];
        if (push != q.p[n + 1][x.degen(n, j, static_cast<int>(s))])
          return "degeneracy " + std::to_string(j) + " of " + x.label(n, static_cast<int>(s)) + " is incompatible";
      }
  return std::nullopt;
}

inline void validate(const SimplicialDistribution& q) {
  if (auto e = distribution_problem(q)) throw std::invalid_argument(*e);
}

// ---------------------------------------------------------------- deterministic distributions

// 1-cochains f with f(d_1 s) = f(d_2 s) + f(d_0 s) on every 2-simplex, vanishing on degenerate edges.
inline std::vector<ZVec> enumerate_deterministic(const TruncatedSSet& x, i64 d, std::size_t limit = 1u << 20) {
  if (x.cap() < 2) throw std::invalid_argument("deterministic distributions need degree 2");
  std::vector<ZVec> rows;
  for (std::size_t s = 0; s < x.size(2); ++s) {
    ZVec r(x.size(1), 0);
    r[x.face(2, 2, static_cast<int>(s))] += 1;
    r[x.face(2, 0, static_cast<int>(s))] += 1;
    r[x.face(2, 1, static_cast<int>(s))] -= 1;
    for (auto& v : r) v = mod_reduce(v, d);
    rows.push_back(r);
  }
  for (std::size_t v = 0; v < x.size(0); ++v) {
    ZVec r(x.size(1), 0);
    r[x.degen(0, 0, static_cast<int>(v))] = 1;
    rows.push_back(r);
  }
  const auto sol = solve(ZModMatrix(d, rows), ZVec(rows.size(), 0));
  if (static_cast<double>(sol->kernel.span_size()) > static_cast<double>(limit))
    throw std::invalid_argument("too many deterministic distributions to enumerate");
  std::vector<ZVec> out = enumerate_span(sol->kernel);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Outcome of the deterministic distribution f on a simplex.
inline int deterministic_outcome(const TruncatedSSet& x, const ZVec& f, int n, int s, i64 d) {
  if (n == 0) return 0;
  if (n == 1) return static_cast<int>(f[s]);
  return encode_outcome({f[x.face(2, 2, s)], f[x.face(2, 0, s)]}, d);
}

struct Weighted {
  ZVec f;
  mpq_class weight;
};

// Theta: the mixture sum lambda(f) delta^f.
inline SimplicialDistribution theta(SSetPtr x, i64 d, const std::vector<Weighted>& mix) {
  if (mix.empty()) throw std::invalid_argument("a distribution needs nonempty support");
  mpq_class total = 0;
  for (const auto& m : mix) {
    if (m.weight < 0) throw std::invalid_argument("negative weight");
    if (m.f.size() != x->size(1)) throw std::invalid_argument("deterministic map has the wrong length");
    total += m.weight;
  }
  if (total != 1) throw std::invalid_argument("weights sum to " + total.get_str());
  SimplicialDistribution q = SimplicialDistribution::zero(x, d);
  for (int n = 0; n <= 2; ++n)
    for (std::size_t s = 0; s < x->size(n); ++s)
      for (const auto& m : mix) q.p[n][s][deterministic_outcome(*x, m.f, n, static_cast<int>(s), d)] += m.weight;
  return q;
}

// ---------------------------------------------------------------- exact feasibility LP

struct FeasibilityResult {
  bool feasible = false;
  std::vector<mpq_class> x;  // a solution of A x = b, x >= 0
  std::vector<mpq_class> y;  // otherwise y^T A >= 0 and y^T b < 0
};

// Phase-one simplex over the rationals with Bland's rule.
inline FeasibilityResult feasibility(const std::vector<std::vector<mpq_class>>& A, const std::vector<mpq_class>& b) {
  const std::size_t m = A.size(), n = m ? A[0].size() : 0;
  const std::size_t w = n + m + 1, rhs = n + m;
  std::vector<std::vector<mpq_class>> t(m, std::vector<mpq_class>(w, 0));
  std::vector<int> sign(m, 1);
  for (std::size_t i = 0; i < m; ++i) {
    sign[i] = b[i] < 0 ? -1 : 1;
    for (std::size_t j = 0; j < n; ++j) t[i][j] = sign[i] * A[i][j];
    t[i][n + i] = 1;
    t[i][rhs] = sign[i] * b[i];
  }
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;
  std::vector<mpq_class> cost(w, 0);  // reduced costs, cost[rhs] = -objective
  for (std::size_t j = n; j < n + m; ++j) cost[j] = 1;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < w; ++j) cost[j] -= t[i][j];

  std::vector<std::size_t> nz;
  while (true) {
    std::size_t enter = w;
    for (std::size_t j = 0; j < rhs && enter == w; ++j)
      if (cost[j] < 0) enter = j;
    if (enter == w) break;
    std::size_t leave = m;
    mpq_class best;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] <= 0) continue;
      mpq_class r = t[i][rhs] / t[i][enter];
      if (leave == m || r < best || (r == best && basis[i] < basis[leave])) {
        leave = i;
        best = r;
      }
    }
    if (leave == m) throw std::logic_error("phase-one objective is bounded below; unbounded ray is impossible");
    const mpq_class piv = t[leave][enter];
    nz.clear();
    for (std::size_t j = 0; j < w; ++j)
      if (t[leave][j] != 0) {
        t[leave][j] /= piv;
        nz.push_back(j);
      }
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || t[i][enter] == 0) continue;
      const mpq_class f = t[i][enter];
      for (std::size_t j : nz) t[i][j] -= f * t[leave][j];
    }
    if (cost[enter] != 0) {
      const mpq_class f = cost[enter];
      for (std::size_t j : nz) cost[j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }

  FeasibilityResult out;
  out.feasible = cost[rhs] == 0;
  if (out.feasible) {
    out.x.assign(n, 0);
    for (std::size_t i = 0; i < m; ++i)
      if (basis[i] < n) out.x[basis[i]] = t[i][rhs];
  } else {
    out.y.resize(m);
    for (std::size_t i = 0; i < m; ++i) out.y[i] = -sign[i] * (1 - cost[n + i]);
  }
  return out;
}

// ---------------------------------------------------------------- contextuality

struct MarginalTerm {
  int degree = 2;
  int simplex = 0;
  int outcome = 0;
  mpq_class coeff;
};

// constant + sum of coeff * [f lands on outcome] is >= 0 on every deterministic f but < 0 on p.
struct FarkasWitness {
  mpq_class constant;
  std::vector<MarginalTerm> terms;
};

struct Verdict {
  bool contextual = false;
  std::vector<ZVec> deterministic;
  std::vector<Weighted> decomposition;  // when noncontextual
  FarkasWitness farkas;                 // when contextual
};

inline mpq_class farkas_value(const FarkasWitness& w, const SimplicialDistribution& q) {
  mpq_class v = w.constant;
  for (const auto& t : w.terms) v += t.coeff * q.p[t.degree][t.simplex][t.outcome];
  return v;
}

inline mpq_class farkas_value(const FarkasWitness& w, const TruncatedSSet& x, const ZVec& f, i64 d) {
  mpq_class v = w.constant;
  for (const auto& t : w.terms)
    if (deterministic_outcome(x, f, t.degree, t.simplex, d) == t.outcome) v += t.coeff;
  return v;
}

// Re-checks a verdict by substitution, independently of the LP that produced it.
inline bool verify_verdict(const SimplicialDistribution& q, const Verdict& v) {
  if (distribution_problem(q)) return false;
  if (!v.contextual) {
    for (const auto& m : v.decomposition)
      if (m.weight < 0) return false;
    return !v.decomposition.empty() && theta(q.host, q.d, v.decomposition) == q;
  }
  if (farkas_value(v.farkas, q) >= 0) return false;
  for (const auto& f : v.deterministic)
    if (farkas_value(v.farkas, *q.host, f, q.d) < 0) return false;
  return true;
}

// LP over the mixtures of deterministic distributions, with marginal equalities on nondegenerate
// 2-simplices and on nondegenerate edges that are not a face of one.
inline Verdict is_contextual(const SimplicialDistribution& q) {
  validate(q);
  const TruncatedSSet& x = *q.host;
  const i64 d = q.d;
  Verdict v;
  v.deterministic = enumerate_deterministic(x, d);
  const std::size_t n = v.deterministic.size();

  std::vector<char> covered(x.size(1), 0);
  std::vector<std::pair<int, int>> cells;  // (degree, simplex)
  for (int s : x.nondegenerate(2)) {
    cells.push_back({2, s});
    for (int i = 0; i < 3; ++i) covered[x.face(2, i, s)] = 1;
  }
  for (int e : x.nondegenerate(1))
    if (!covered[e]) cells.push_back({1, e});

  struct Row {
    std::vector<char> key;
    mpq_class rhs;
    MarginalTerm term;
  };
  std::vector<Row> rows{{std::vector<char>(n, 1), 1, {0, 0, 0, 0}}};
  std::set<std::pair<std::vector<char>, mpq_class>> seen;
  for (const auto& [deg, s] : cells)
    for (int a = 0; a < outcome_count(d, deg); ++a) {
      std::vector<char> key(n, 0);
      for (std::size_t f = 0; f < n; ++f) key[f] = deterministic_outcome(x, v.deterministic[f], deg, s, d) == a;
      const mpq_class rhs = q.p[deg][s][a];
      if (seen.insert({key, rhs}).second) rows.push_back({std::move(key), rhs, {deg, s, a, 0}});
    }

  // Rows independent modulo a large prime are independent over Q; the reduced LP is tried first
  // and its answer is kept only if it survives substitution.
  std::vector<std::size_t> chosen;
  {
    constexpr i64 P = 2147483647;
    std::vector<std::vector<i64>> basis;
    std::vector<std::size_t> lead;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      std::vector<i64> v(rows[r].key.begin(), rows[r].key.end());
      for (std::size_t k = 0; k < basis.size(); ++k)
        if (const i64 c = v[lead[k]]; c)
          for (std::size_t j = 0; j < n; ++j) v[j] = mod_reduce(v[j] - c * basis[k][j], P);
      std::size_t l = 0;
      while (l < n && v[l] == 0) ++l;
      if (l == n) continue;
      const i64 inv = mod_inverse(v[l], P);
      for (auto& e : v) e = e * inv % P;
      basis.push_back(std::move(v));
      lead.push_back(l);
      chosen.push_back(r);
    }
  }

  auto run = [&](const std::vector<std::size_t>& use) {
    std::vector<std::vector<mpq_class>> A;
    std::vector<mpq_class> b;
    for (std::size_t r : use) {
      A.emplace_back(rows[r].key.begin(), rows[r].key.end());
      b.push_back(rows[r].rhs);
    }
    const FeasibilityResult r = feasibility(A, b);
    Verdict out;
    out.deterministic = v.deterministic;
    out.contextual = !r.feasible;
    if (r.feasible) {
      for (std::size_t f = 0; f < n; ++f)
        if (r.x[f] != 0) out.decomposition.push_back({v.deterministic[f], r.x[f]});
    } else {
      for (std::size_t i = 0; i < use.size(); ++i) {
        if (r.y[i] == 0) continue;
        if (use[i] == 0) {
          out.farkas.constant = r.y[i];
          continue;
        }
        MarginalTerm t = rows[use[i]].term;
        t.coeff = r.y[i];
        out.farkas.terms.push_back(t);
      }
    }
    return out;
  };
  Verdict reduced = run(chosen);
  if (verify_verdict(q, reduced)) return reduced;
  std::vector<std::size_t> all(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) all[r] = r;
  return run(all);
}

// ---------------------------------------------------------------- quantum side

using CMatrix = Eigen::MatrixXcd;

inline std::complex<double> root_of_unity(i64 d, i64 k) {
  const double a = 2.0 * M_PI * static_cast<double>(mod_reduce(k, d)) / static_cast<double>(d);
  return {std::cos(a), std::sin(a)};
}

inline CMatrix matrix_power(const CMatrix& u, i64 k) {
  CMatrix r = CMatrix::Identity(u.rows(), u.cols());
  for (i64 i = 0; i < k; ++i) r = r * u;
  return r;
}

// Joint spectral projectors of commuting unitaries with U^d = 1, indexed by outcome codes.
inline std::vector<CMatrix> spectral_measurement(const std::vector<CMatrix>& us, i64 d, double tol = 1e-9) {
  if (us.empty()) throw std::invalid_argument("spectral measurement needs at least one unitary");
  const auto dim = us[0].rows();
  const CMatrix id = CMatrix::Identity(dim, dim);
  for (std::size_t i = 0; i < us.size(); ++i) {
    if ((matrix_power(us[i], d) - id).norm() > tol) throw std::invalid_argument("unitary is not d-torsion");
    for (std::size_t j = i + 1; j < us.size(); ++j)
      if ((us[i] * us[j] - us[j] * us[i]).norm() > tol) throw std::invalid_argument("unitaries do not commute");
  }
  std::vector<std::vector<CMatrix>> single(us.size());
  for (std::size_t i = 0; i < us.size(); ++i)
    for (i64 a = 0; a < d; ++a) {
      CMatrix p = CMatrix::Zero(dim, dim), uk = id;
      for (i64 k = 0; k < d; ++k, uk = uk * us[i]) p += root_of_unity(d, -a * k) * uk;
      single[i].push_back(p / static_cast<double>(d));
    }
  const int n = static_cast<int>(us.size());
  i64 total = 1;
  for (int i = 0; i < n; ++i) total *= d;
  std::vector<CMatrix> out;
  for (i64 c = 0; c < total; ++c) {
    CMatrix p = id;
    i64 r = c;
    for (int i = 0; i < n; ++i, r /= d) p = p * single[i][r % d];
    out.push_back(p);
  }
  return out;
}

// Nearest fraction with denominator at most max_den (continued fractions); throws beyond tolerance.
inline mpq_class snap_rational(double v, long max_den = 1L << 16, double tol = 1e-9) {
  long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double x = v;
  long best_h = std::lround(v), best_k = 1;
  for (int it = 0; it < 64; ++it) {
    const double fl = std::floor(x);
    const long a = static_cast<long>(fl);
    const long h2 = a * h1 + h0, k2 = a * k1 + k0;
    if (k2 > max_den) break;
    best_h = h2;
    best_k = k2;
    if (std::abs(static_cast<double>(h2) / static_cast<double>(k2) - v) <= tol * 1e-3) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    const double frac = x - fl;
    if (frac < 1e-15) break;
    x = 1.0 / frac;
  }
  if (std::abs(static_cast<double>(best_h) / static_cast<double>(best_k) - v) > tol)
    throw std::invalid_argument("probability " + std::to_string(v) + " has no rational snap within tolerance");
  mpq_class q(best_h, best_k);
  q.canonicalize();
  return q;
}

inline CMatrix monomial(const std::vector<CMatrix>& T, const ZVec& exps) {
  CMatrix m = CMatrix::Identity(T[0].rows(), T[0].cols());
  for (std::size_t v = 0; v < exps.size(); ++v)
    if (exps[v]) m = m * matrix_power(T[v], exps[v]);
  return m;
}

// The composite N(Z_d, Sigma) -> N(Z_d, G) -> D(NZ_d) for a matrix solution T and a density operator rho.
// The host must be N(Z_d, Sigma) for the complex of s.
inline SimplicialDistribution quantum_distribution(const LinearSystem& s, SSetPtr host, const std::vector<CMatrix>& T,
                                                   const CMatrix& rho) {
  const i64 d = s.d();
  if (T.size() != s.cols()) throw std::invalid_argument("one unitary per variable is required");
  const auto dim = T[0].rows();
  const std::complex<double> omega = root_of_unity(d, 1);
  for (std::size_t i = 0; i < s.rows(); ++i) {
    const CMatrix lhs = monomial(T, s.A.row(i));
    const CMatrix rhs = CMatrix::Identity(dim, dim) * std::pow(omega, static_cast<double>(s.b[i]));
    if ((lhs - rhs).norm() > 1e-9) throw std::invalid_argument("the unitaries do not satisfy row " + s.row_labels[i]);
  }
  if ((rho - rho.adjoint()).norm() > 1e-9 || std::abs(rho.trace() - 1.0) > 1e-9)
    throw std::invalid_argument("rho is not a density operator");
  if (Eigen::SelfAdjointEigenSolver<CMatrix>(rho).eigenvalues().minCoeff() < -1e-9)
    throw std::invalid_argument("rho is not positive semidefinite");

  const TruncatedSSet& x = *host;
  const VertexFunctions vf{static_cast<int>(s.cols()), d};
  SimplicialDistribution q = SimplicialDistribution::zero(host, d);
  q.p[0][0][0] = 1;
  for (int n = 1; n <= 2; ++n)
    for (std::size_t t = 0; t < x.size(n); ++t) {
      std::vector<CMatrix> us;
      for (int code : x.key(n, static_cast<int>(t))) us.push_back(monomial(T, vf.decode(code)));
      const auto proj = spectral_measurement(us, d);
      for (std::size_t a = 0; a < proj.size(); ++a) q.p[n][t][a] = snap_rational((rho * proj[a]).trace().real());
    }
  validate(q);
  return q;
}

inline SimplicialDistribution quantum_distribution(const SystemSpaces& sp, const std::vector<CMatrix>& T, const CMatrix& rho) {
  return quantum_distribution(sp.system, sp.nzd_sigma, T, rho);
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return r;
}

struct Paulis {
  CMatrix I, X, Y, Z;
  Paulis() : I(CMatrix::Identity(2, 2)), X(2, 2), Y(2, 2), Z(2, 2) {
    using c = std::complex<double>;
    X << c(0), c(1), c(1), c(0);
    Y << c(0), c(0, -1), c(0, 1), c(0);
    Z << c(1), c(0), c(0), c(-1);
  }
};

// Two-qubit operators for the K33 variables a_i b_j with signs chosen so that row i of the
// system holds with J = -1; requires an odd parity vector.
inline std::vector<CMatrix> k33_pauli_solution(const ZVec& b) {
  i64 parity = 0;
  for (i64 v : b) parity += v;
  if (parity % 2 == 0) throw std::invalid_argument("the two-qubit solution needs an odd parity vector");
  const Paulis P;
  const std::vector<CMatrix> square{kron(P.X, P.I), kron(P.I, P.X), kron(P.X, P.X),
                                    kron(P.I, P.Z), kron(P.Z, P.I), kron(P.Z, P.Z),
                                    kron(P.X, P.Z), kron(P.Z, P.X), kron(P.Y, P.Y)};
  const LinearSystem s = k33_system(b);
  for (int signs = 0; signs < 512; ++signs) {
    std::vector<CMatrix> T;
    for (int v = 0; v < 9; ++v) T.push_back(((signs >> v) & 1 ? -1.0 : 1.0) * square[v]);
    bool ok = true;
    for (std::size_t i = 0; i < s.rows() && ok; ++i) {
      const CMatrix m = monomial(T, s.A.row(i));
      ok = (m - (s.b[i] ? -1.0 : 1.0) * CMatrix::Identity(4, 4)).norm() < 1e-9;
    }
    if (ok) return T;
  }
  throw std::logic_error("no sign pattern realizes the parity vector");
}

// Normalized pure state from small Gaussian-integer amplitudes, so probabilities stay rational.
inline CMatrix random_rational_pure_state(int dim, std::mt19937& rng) {
  std::uniform_int_distribution<int> amp(-2, 2);
  Eigen::VectorXcd psi(dim);
  do {
    for (int i = 0; i < dim; ++i) psi[i] = std::complex<double>(amp(rng), amp(rng));
  } while (psi.squaredNorm() == 0);
  return psi * psi.adjoint() / psi.squaredNorm();
}

}  // namespace lcs
