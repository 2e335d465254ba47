#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace lcs {

using i64 = std::int64_t;
using ZVec = std::vector<i64>;

inline i64 mod_reduce(i64 a, i64 d) {
  i64 r = a % d;
  return r < 0 ? r + d : r;
}

inline void check_modulus(i64 d) {
  if (d < 2) throw std::invalid_argument("modulus must be at least 2, got " + std::to_string(d));
}

// Modular inverse of a unit; throws if a is not invertible mod d.
inline i64 mod_inverse(i64 a, i64 d) {
  i64 g = d, x = 0, x1 = 1, r = mod_reduce(a, d);
  while (r != 0) {
    i64 q = g / r;
    std::tie(g, r) = std::make_pair(r, g - q * r);
    std::tie(x, x1) = std::make_pair(x1, x - q * x1);
  }
  if (g != 1) throw std::domain_error(std::to_string(a) + " is not a unit mod " + std::to_string(d));
  return mod_reduce(x, d);
}

class ZModVal {
 public:
  ZModVal(i64 value, i64 modulus) : mod_(modulus) {
    check_modulus(modulus);
    val_ = mod_reduce(value, modulus);
  }
  i64 value() const { return val_; }
  i64 modulus() const { return mod_; }

  friend ZModVal operator+(const ZModVal& a, const ZModVal& b) { return {a.val_ + b.val_, same(a, b)}; }
  friend ZModVal operator-(const ZModVal& a, const ZModVal& b) { return {a.val_ - b.val_, same(a, b)}; }
  friend ZModVal operator*(const ZModVal& a, const ZModVal& b) { return {a.val_ * b.val_, same(a, b)}; }
  ZModVal operator-() const { return {-val_, mod_}; }
  friend bool operator==(const ZModVal& a, const ZModVal& b) { return a.val_ == b.val_ && same(a, b); }

 private:
  static i64 same(const ZModVal& a, const ZModVal& b) {
    if (a.mod_ != b.mod_)
      throw std::invalid_argument("modulus mismatch: " + std::to_string(a.mod_) + " vs " + std::to_string(b.mod_));
    return a.mod_;
  }
  i64 val_;
  i64 mod_;
};

class ZModMatrix {
 public:
  ZModMatrix() = default;
  ZModMatrix(std::size_t rows, std::size_t cols, i64 d) : r_(rows), c_(cols), d_(d), a_(rows * cols, 0) {
    check_modulus(d);
  }
  ZModMatrix(i64 d, const std::vector<ZVec>& rows) : d_(d) {
    check_modulus(d);
    r_ = rows.size();
    c_ = rows.empty() ? 0 : rows[0].size();
    a_.reserve(r_ * c_);
    for (const auto& row : rows) {
      if (row.size() != c_) throw std::invalid_argument("ragged matrix rows");
      for (i64 v : row) a_.push_back(mod_reduce(v, d));
    }
  }
  static ZModMatrix identity(std::size_t n, i64 d) {
    ZModMatrix m(n, n, d);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
  }

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  i64 modulus() const { return d_; }
  i64 at(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }
  void set(std::size_t i, std::size_t j, i64 v) { a_[i * c_ + j] = mod_reduce(v, d_); }
  ZModVal value(std::size_t i, std::size_t j) const { return {at(i, j), d_}; }

  ZVec row(std::size_t i) const { return ZVec(a_.begin() + i * c_, a_.begin() + (i + 1) * c_); }
  ZVec col(std::size_t j) const {
    ZVec v(r_);
    for (std::size_t i = 0; i < r_; ++i) v[i] = at(i, j);
    return v;
  }
  std::vector<ZVec> row_list() const {
    std::vector<ZVec> out;
    for (std::size_t i = 0; i < r_; ++i) out.push_back(row(i));
    return out;
  }
  void append_row(const ZVec& v) {
    if (r_ == 0 && c_ == 0) c_ = v.size();
    if (v.size() != c_) throw std::invalid_argument("row length mismatch");
    for (i64 x : v) a_.push_back(mod_reduce(x, d_));
    ++r_;
  }

  ZModMatrix transpose() const {
    ZModMatrix t(c_, r_, d_);
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < c_; ++j) t.set(j, i, at(i, j));
    return t;
  }

  ZVec apply(const ZVec& x) const {
    if (x.size() != c_) throw std::invalid_argument("dimension mismatch in matrix-vector product");
    ZVec y(r_, 0);
    for (std::size_t i = 0; i < r_; ++i) {
      i64 s = 0;
      for (std::size_t j = 0; j < c_; ++j) s = (s + at(i, j) * mod_reduce(x[j], d_)) % d_;
      y[i] = s;
    }
    return y;
  }

  friend bool operator==(const ZModMatrix& a, const ZModMatrix& b) {
    return a.r_ == b.r_ && a.c_ == b.c_ && a.d_ == b.d_ && a.a_ == b.a_;
  }

 private:
  std::size_t r_ = 0, c_ = 0;
  i64 d_ = 2;
  std::vector<i64> a_;
};

// Row-reduced basis in Howell form. `transform` satisfies basis = transform * input.
struct HowellBasis {
  ZModMatrix basis;
  ZModMatrix transform;
  std::vector<std::size_t> pivots;  // leading column of each basis row

  i64 modulus() const { return basis.modulus(); }
  // Number of elements of the row span.
  i64 span_size() const {
    i64 n = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) n *= basis.modulus() / basis.at(i, pivots[i]);
    return n;
  }
};

namespace detail {

struct Xgcd {
  i64 g, s, t;
};

inline Xgcd xgcd(i64 a, i64 b) {
  i64 s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (b != 0) {
    i64 q = a / b;
    std::tie(a, b) = std::make_pair(b, a - q * b);
    std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
    std::tie(t0, t1) = std::make_pair(t1, t0 - q * t1);
  }
  return {a, s0, t0};
}

// Unit u with u*a = gcd(a,d) mod d.
inline i64 normalizing_unit(i64 a, i64 d) {
  i64 g = std::gcd(a, d);
  for (i64 u = 1; u < d; ++u)
    if (std::gcd(u, d) == 1 && mod_reduce(u * a, d) == g) return u;
  throw std::logic_error("no normalizing unit");
}

inline void combine(ZVec& x, const ZVec& y, i64 cx, i64 cy, i64 d) {
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = mod_reduce(cx * x[k] + cy * y[k], d);
}

inline bool is_zero(const ZVec& v) {
  for (i64 x : v)
    if (x != 0) return false;
  return true;
}

}  // namespace detail

inline HowellBasis howell_form(const ZModMatrix& m) {
  const i64 d = m.modulus();
  const std::size_t cols = m.cols();
  std::vector<ZVec> rows = m.row_list();
  std::vector<ZVec> trans = ZModMatrix::identity(m.rows(), d).row_list();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;

  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    for (std::size_t i = r + 1; i < rows.size(); ++i) {
      if (rows[i][c] == 0) continue;
      if (rows[r][c] == 0) {
        std::swap(rows[r], rows[i]);
        std::swap(trans[r], trans[i]);
        continue;
      }
      const i64 a = rows[r][c], b = rows[i][c];
      const auto [g, s, t] = detail::xgcd(a, b);
      ZVec top = rows[r], ttop = trans[r];
      detail::combine(top, rows[i], s, t, d);
      detail::combine(ttop, trans[i], s, t, d);
      detail::combine(rows[i], rows[r], a / g, -(b / g), d);
      detail::combine(trans[i], trans[r], a / g, -(b / g), d);
      rows[r] = std::move(top);
      trans[r] = std::move(ttop);
    }
    if (rows[r][c] == 0) continue;

    const i64 u = detail::normalizing_unit(rows[r][c], d);
    for (auto& x : rows[r]) x = mod_reduce(x * u, d);
    for (auto& x : trans[r]) x = mod_reduce(x * u, d);
    const i64 p = rows[r][c];
    for (std::size_t i = 0; i < r; ++i) {
      const i64 q = rows[i][c] / p;
      if (q == 0) continue;
      detail::combine(rows[i], rows[r], 1, -q, d);
      detail::combine(trans[i], trans[r], 1, -q, d);
    }
    ZVec ann = rows[r], tann = trans[r];
    for (auto& x : ann) x = mod_reduce(x * (d / p), d);
    if (!detail::is_zero(ann)) {
      for (auto& x : tann) x = mod_reduce(x * (d / p), d);
      rows.push_back(std::move(ann));
      trans.push_back(std::move(tann));
    }
    pivots.push_back(c);
    ++r;
  }

  HowellBasis out{ZModMatrix(0, cols, d), ZModMatrix(0, m.rows(), d), pivots};
  for (std::size_t i = 0; i < r; ++i) {
    out.basis.append_row(rows[i]);
    out.transform.append_row(trans[i]);
  }
  return out;
}

// All elements of the span of a Howell basis, each listed exactly once.
inline std::vector<ZVec> enumerate_span(const HowellBasis& h) {
  const i64 d = h.modulus();
  const std::size_t n = h.basis.cols();
  std::vector<ZVec> out{ZVec(n, 0)};
  for (std::size_t i = 0; i < h.pivots.size(); ++i) {
    const i64 steps = d / h.basis.at(i, h.pivots[i]);
    const ZVec row = h.basis.row(i);
    std::vector<ZVec> next;
    next.reserve(out.size() * steps);
    for (const auto& v : out)
      for (i64 k = 0; k < steps; ++k) {
        ZVec w = v;
        detail::combine(w, row, 1, k, d);
        next.push_back(std::move(w));
      }
    out = std::move(next);
  }
  return out;
}

// Reduce v against a Howell basis. The result is zero iff v lies in the span.
inline ZVec reduce_by_basis(const HowellBasis& h, ZVec v, ZVec* coeffs = nullptr) {
  const i64 d = h.modulus();
  for (auto& x : v) x = mod_reduce(x, d);
  if (coeffs) coeffs->assign(h.pivots.size(), 0);
  for (std::size_t i = 0; i < h.pivots.size(); ++i) {
    const std::size_t c = h.pivots[i];
    const i64 p = h.basis.at(i, c);
    if (v[c] % p != 0) return v;
    const i64 q = v[c] / p;
    if (q == 0) continue;
    const ZVec row = h.basis.row(i);
    detail::combine(v, row, 1, -q, d);
    if (coeffs) (*coeffs)[i] = q;
  }
  return v;
}

inline bool in_span(const HowellBasis& h, const ZVec& v) { return detail::is_zero(reduce_by_basis(h, v)); }

struct SolveResult {
  ZVec particular;
  HowellBasis kernel;  // basis of {x : Mx = 0} in Howell form

  i64 count() const { return kernel.span_size(); }
  std::vector<ZVec> all() const {
    std::vector<ZVec> out;
    const i64 d = kernel.modulus();
    for (auto k : enumerate_span(kernel)) {
      for (std::size_t j = 0; j < k.size(); ++j) k[j] = mod_reduce(k[j] + particular[j], d);
      out.push_back(std::move(k));
    }
    return out;
  }
};

inline std::optional<SolveResult> solve(const ZModMatrix& m, const ZVec& v) {
  if (v.size() != m.rows())
    throw std::invalid_argument("dimension mismatch: matrix has " + std::to_string(m.rows()) +
                                " rows, vector has " + std::to_string(v.size()));
  const i64 d = m.modulus();
  const std::size_t r = m.rows(), c = m.cols();
  // Rows of [M^T | I] span {(x^T M^T, x)} = {((Mx)^T, x)}.
  ZModMatrix aug(c, r + c, d);
  for (std::size_t j = 0; j < c; ++j) {
    for (std::size_t i = 0; i < r; ++i) aug.set(j, i, m.at(i, j));
    aug.set(j, r + j, 1);
  }
  const HowellBasis h = howell_form(aug);

  HowellBasis kernel{ZModMatrix(0, c, d), ZModMatrix(0, 0, d), {}};
  for (std::size_t i = 0; i < h.pivots.size(); ++i) {
    if (h.pivots[i] < r) continue;
    ZVec row = h.basis.row(i);
    kernel.basis.append_row(ZVec(row.begin() + r, row.end()));
    kernel.pivots.push_back(h.pivots[i] - r);
  }

  ZVec target(r + c, 0);
  for (std::size_t i = 0; i < r; ++i) target[i] = mod_reduce(v[i], d);
  const ZVec rest = reduce_by_basis(h, target);
  for (std::size_t i = 0; i < r; ++i)
    if (rest[i] != 0) return std::nullopt;
  ZVec x(c);
  for (std::size_t j = 0; j < c; ++j) x[j] = mod_reduce(-rest[r + j], d);
  return SolveResult{std::move(x), std::move(kernel)};
}

inline i64 additive_order(const ZVec& row, i64 d) {
  i64 g = d;
  for (i64 x : row) g = std::gcd(g, mod_reduce(x, d));
  return d / g;
}

inline bool span_generates_Zd(const ZVec& row, i64 d) { return additive_order(row, d) == d; }

inline bool spans_equal(const ZVec& a, const ZVec& b, i64 d) {
  if (a.size() != b.size()) throw std::invalid_argument("rows of different length");
  auto multiple_of = [d](const ZVec& x, const ZVec& y) {
    for (i64 k = 0; k < d; ++k) {
      bool ok = true;
      for (std::size_t j = 0; j < x.size() && ok; ++j) ok = mod_reduce(k * y[j] - x[j], d) == 0;
      if (ok) return true;
    }
    return false;
  };
  return multiple_of(a, b) && multiple_of(b, a);
}

inline bool row_spans_equal(const ZModMatrix& a, const ZModMatrix& b) {
  return a.cols() == b.cols() && a.modulus() == b.modulus() && howell_form(a).basis == howell_form(b).basis;
}

}  // namespace lcs
