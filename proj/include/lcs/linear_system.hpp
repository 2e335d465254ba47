#pragma once

#include <istream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcs/presentation.hpp"
#include "lcs/zmod.hpp"

namespace lcs {

// The equations Ax = b over Z_d, optionally with labels for rows and columns.
struct LinearSystem {
  ZModMatrix A;
  ZVec b;
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;

  LinearSystem() = default;
  LinearSystem(ZModMatrix a, ZVec rhs, std::vector<std::string> rl = {}, std::vector<std::string> cl = {})
      : A(std::move(a)), b(std::move(rhs)), row_labels(std::move(rl)), col_labels(std::move(cl)) {
    if (b.size() != A.rows()) throw std::invalid_argument("b has " + std::to_string(b.size()) + " entries for " +
                                                          std::to_string(A.rows()) + " rows");
    for (auto& x : b) x = mod_reduce(x, A.modulus());
    if (row_labels.empty())
      for (std::size_t i = 0; i < A.rows(); ++i) row_labels.push_back("r" + std::to_string(i + 1));
    if (col_labels.empty())
      for (std::size_t j = 0; j < A.cols(); ++j) col_labels.push_back("v" + std::to_string(j + 1));
    if (row_labels.size() != A.rows() || col_labels.size() != A.cols())
      throw std::invalid_argument("label count does not match matrix shape");
  }

  i64 d() const { return A.modulus(); }
  std::size_t rows() const { return A.rows(); }
  std::size_t cols() const { return A.cols(); }
  std::vector<std::size_t> support(std::size_t i) const {
    std::vector<std::size_t> s;
    for (std::size_t j = 0; j < cols(); ++j)
      if (A.at(i, j) != 0) s.push_back(j);
    return s;
  }
};

// Violations of: each row generates a copy of Z_d, and distinct rows span distinct subgroups.
inline std::vector<std::string> row_condition_violations(const LinearSystem& s) {
  std::vector<std::string> out;
  const i64 d = s.d();
  for (std::size_t i = 0; i < s.rows(); ++i)
    if (!span_generates_Zd(s.A.row(i), d))
      out.push_back("row " + s.row_labels[i] + " has additive order " + std::to_string(additive_order(s.A.row(i), d)) +
                    " < " + std::to_string(d));
  for (std::size_t i = 0; i < s.rows(); ++i)
    for (std::size_t j = i + 1; j < s.rows(); ++j)
      if (spans_equal(s.A.row(i), s.A.row(j), d))
        out.push_back("rows " + s.row_labels[i] + " and " + s.row_labels[j] + " span the same subgroup");
  return out;
}

inline void require_row_conditions(const LinearSystem& s) {
  const auto v = row_condition_violations(s);
  if (v.empty()) return;
  std::string msg = "row conditions violated:";
  for (const auto& x : v) msg += " " + x + ";";
  throw std::invalid_argument(msg);
}

// `.lcs` text: line 1 `d r c`, r matrix rows, then the b vector; `#` starts a comment.
inline LinearSystem parse_lcs(std::istream& in) {
  std::vector<std::pair<int, std::vector<i64>>> lines;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::vector<i64> nums;
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t pos = 0;
        nums.push_back(std::stoll(tok, &pos));
        if (pos != tok.size()) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw std::invalid_argument("line " + std::to_string(lineno) + ": expected an integer, got '" + tok + "'");
      }
    }
    if (!nums.empty()) lines.emplace_back(lineno, std::move(nums));
  }
  if (lines.empty()) throw std::invalid_argument("empty system file");
  const auto& head = lines[0];
  if (head.second.size() != 3) throw std::invalid_argument("line " + std::to_string(head.first) + ": header must be 'd r c'");
  const i64 d = head.second[0], r = head.second[1], c = head.second[2];
  if (d < 2 || r < 0 || c < 1) throw std::invalid_argument("line " + std::to_string(head.first) + ": invalid header values");
  if (static_cast<i64>(lines.size()) != r + 2)
    throw std::invalid_argument("expected " + std::to_string(r) + " matrix rows and one b line after the header, found " +
                                std::to_string(lines.size() - 1) + " data lines");
  std::vector<ZVec> rows;
  for (i64 i = 1; i <= r; ++i) {
    if (static_cast<i64>(lines[i].second.size()) != c)
      throw std::invalid_argument("line " + std::to_string(lines[i].first) + ": expected " + std::to_string(c) + " entries");
    rows.push_back(lines[i].second);
  }
  const auto& bl = lines[r + 1];
  if (static_cast<i64>(bl.second.size()) != r)
    throw std::invalid_argument("line " + std::to_string(bl.first) + ": b must have " + std::to_string(r) + " entries");
  ZModMatrix A = r == 0 ? ZModMatrix(0, c, d) : ZModMatrix(d, rows);
  return LinearSystem(std::move(A), bl.second);
}

inline std::string format_lcs(const LinearSystem& s) {
  std::ostringstream o;
  o << "# columns:";
  for (const auto& c : s.col_labels) o << ' ' << c;
  o << "\n" << s.d() << ' ' << s.rows() << ' ' << s.cols() << "\n";
  for (std::size_t i = 0; i < s.rows(); ++i) {
    for (std::size_t j = 0; j < s.cols(); ++j) o << (j ? " " : "") << s.A.at(i, j);
    o << "   # " << s.row_labels[i] << "\n";
  }
  for (std::size_t i = 0; i < s.rows(); ++i) o << (i ? " " : "") << s.b[i];
  o << "\n";
  return o.str();
}

// K_{3,3} incidence system: rows are the vertices a1 a2 a3 b1 b2 b3, columns the edges (ai,bj).
inline LinearSystem k33_system(const ZVec& b, i64 d = 2) {
  ZModMatrix A(6, 9, d);
  std::vector<std::string> cols;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      A.set(i, 3 * i + j, 1);
      A.set(3 + j, 3 * i + j, 1);
      cols.push_back("a" + std::to_string(i + 1) + "b" + std::to_string(j + 1));
    }
  return LinearSystem(std::move(A), b, {"a1", "a2", "a3", "b1", "b2", "b3"}, cols);
}

// The two-variable system with rows (1,1) and (1,0).
inline LinearSystem example_2x2_system(i64 b1, i64 b2, i64 d = 2) {
  return LinearSystem(ZModMatrix(d, {{1, 1}, {1, 0}}), {b1, b2}, {"A1", "A2"}, {"v1", "v2"});
}

// Generators e_v (one per column) and J. Relators: torsion, commutation within each row support
// and with J, and the row products.
inline Presentation solution_group(const LinearSystem& s) {
  Presentation p;
  const i64 d = s.d();
  for (const auto& c : s.col_labels) p.add_gen("e_" + c);
  const int J = p.add_gen("J");
  p.J = J;
  p.add_relator(gen_word(J, d));
  for (std::size_t v = 0; v < s.cols(); ++v) {
    p.add_relator(gen_word(static_cast<int>(v), d));
    p.add_relator(commutator_word(static_cast<int>(v), J));
  }
  std::vector<std::vector<char>> done(s.cols(), std::vector<char>(s.cols(), 0));
  for (std::size_t i = 0; i < s.rows(); ++i) {
    const auto sup = s.support(i);
    for (std::size_t a = 0; a < sup.size(); ++a)
      for (std::size_t b = a + 1; b < sup.size(); ++b)
        if (!done[sup[a]][sup[b]]) {
          done[sup[a]][sup[b]] = 1;
          p.add_relator(commutator_word(static_cast<int>(sup[a]), static_cast<int>(sup[b])));
        }
  }
  for (std::size_t i = 0; i < s.rows(); ++i) {
    Word w;
    for (std::size_t j : s.support(i)) w.push_back({static_cast<int>(j), s.A.at(i, j)});
    w.push_back({J, -s.b[i]});
    p.add_relator(w);
  }
  return p;
}

}  // namespace lcs
