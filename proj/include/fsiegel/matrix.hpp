#pragma once

// Dense exact linear algebra over GF(q^2) on top of Eigen storage.
// Elimination scans columns left to right and rows top to bottom; results are deterministic.

#include <Eigen/Core>

#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fsiegel/errors.hpp"
#include "fsiegel/field.hpp"

namespace Eigen {

template <int Q>
struct NumTraits<fsiegel::Fq2<Q>> : GenericNumTraits<fsiegel::Fq2<Q>> {
  using Real = fsiegel::Fq2<Q>;
  using NonInteger = fsiegel::Fq2<Q>;
  using Nested = fsiegel::Fq2<Q>;
  using Literal = fsiegel::Fq2<Q>;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 2,
    MulCost = 4
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline Real highest() { return Real(Q - 1, Q - 1); }
  static inline Real lowest() { return Real(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen

namespace fsiegel {

template <int Q>
using Mat = Eigen::Matrix<Fq2<Q>, Eigen::Dynamic, Eigen::Dynamic>;
template <int Q>
using Vec = Eigen::Matrix<Fq2<Q>, Eigen::Dynamic, 1>;

template <int Q>
Mat<Q> identity(Eigen::Index n) {
  return Mat<Q>::Identity(n, n);
}

template <int Q>
Mat<Q> zeros(Eigen::Index rows, Eigen::Index cols) {
  return Mat<Q>::Zero(rows, cols);
}

/// Entrywise Galois conjugate.
template <typename Derived>
auto conjugate(const Eigen::MatrixBase<Derived>& m) {
  using S = typename Derived::Scalar;
  return m.unaryExpr([](const S& x) { return x.conj(); });
}

/// A* = transpose of the entrywise conjugate.
template <typename Derived>
auto star(const Eigen::MatrixBase<Derived>& m) {
  return conjugate(m).transpose();
}

/// True when every entry lies in F.
template <typename Derived>
bool is_rational(const Eigen::MatrixBase<Derived>& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!m(i, j).is_rational()) return false;
    }
  }
  return true;
}

template <typename Derived>
bool is_zero(const Eigen::MatrixBase<Derived>& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!m(i, j).is_zero()) return false;
    }
  }
  return true;
}

template <typename A, typename B>
bool equal(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (a(i, j) != b(i, j)) return false;
    }
  }
  return true;
}

template <typename Derived>
bool is_symmetric(const Eigen::MatrixBase<Derived>& m) {
  return m.rows() == m.cols() && equal(m, m.transpose());
}

/// Checked product; Eigen only asserts on shape mismatch.
template <typename A, typename B>
auto mul(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  if (a.cols() != b.rows()) throw ShapeError("matrix product: inner dimensions differ");
  using S = typename A::Scalar;
  Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> r = a * b;
  return r;
}

template <typename A, typename B>
auto add(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("matrix sum: shapes differ");
  using S = typename A::Scalar;
  Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> r = a + b;
  return r;
}

template <typename A, typename B>
auto sub(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("matrix difference: shapes differ");
  using S = typename A::Scalar;
  Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> r = a - b;
  return r;
}

/// In-place reduced row echelon form; returns pivot column indices.
template <int Q>
std::vector<Eigen::Index> rref_in_place(Mat<Q>& m, Eigen::Index col_limit = -1) {
  const Eigen::Index rows = m.rows();
  const Eigen::Index cols = col_limit < 0 ? m.cols() : col_limit;
  std::vector<Eigen::Index> pivots;
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    Eigen::Index p = r;
    while (p < rows && m(p, c).is_zero()) ++p;
    if (p == rows) continue;
    if (p != r) m.row(p).swap(m.row(r));
    const auto inv = m(r, c).inverse();
    for (Eigen::Index j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      const auto f = m(i, c);
      for (Eigen::Index j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <typename Derived>
auto rref(const Eigen::MatrixBase<Derived>& m) {
  constexpr int Q = Derived::Scalar::q;
  Mat<Q> r = m;
  rref_in_place<Q>(r);
  return r;
}

template <typename Derived>
Eigen::Index rank(const Eigen::MatrixBase<Derived>& m) {
  constexpr int Q = Derived::Scalar::q;
  Mat<Q> r = m;
  return static_cast<Eigen::Index>(rref_in_place<Q>(r).size());
}

template <typename Derived>
auto det(const Eigen::MatrixBase<Derived>& m) {
  using S = typename Derived::Scalar;
  constexpr int Q = S::q;
  if (m.rows() != m.cols()) throw ShapeError("det: matrix not square");
  Mat<Q> a = m;
  const Eigen::Index n = a.rows();
  S d(1);
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index p = c;
    while (p < n && a(p, c).is_zero()) ++p;
    if (p == n) return S(0);
    if (p != c) {
      a.row(p).swap(a.row(c));
      d = -d;
    }
    d *= a(c, c);
    const auto inv = a(c, c).inverse();
    for (Eigen::Index i = c + 1; i < n; ++i) {
      if (a(i, c).is_zero()) continue;
      const auto f = a(i, c) * inv;
      for (Eigen::Index j = c; j < n; ++j) a(i, j) -= f * a(c, j);
    }
  }
  return d;
}

template <typename Derived>
auto inverse(const Eigen::MatrixBase<Derived>& m) -> std::optional<Mat<Derived::Scalar::q>> {
  constexpr int Q = Derived::Scalar::q;
  if (m.rows() != m.cols()) throw ShapeError("inverse: matrix not square");
  const Eigen::Index n = m.rows();
  Mat<Q> aug(n, 2 * n);
  aug.leftCols(n) = m;
  aug.rightCols(n) = identity<Q>(n);
  const auto pivots = rref_in_place<Q>(aug, n);
  if (static_cast<Eigen::Index>(pivots.size()) < n) return std::nullopt;
  return Mat<Q>(aug.rightCols(n));
}

/// Inverse that must exist.
template <typename Derived>
auto inverse_or_throw(const Eigen::MatrixBase<Derived>& m) {
  auto inv = inverse(m);
  if (!inv) throw ParameterError("matrix is singular");
  return *inv;
}

/// Basis of the right null space as columns (cols x nullity).
template <typename Derived>
auto kernel(const Eigen::MatrixBase<Derived>& m) {
  constexpr int Q = Derived::Scalar::q;
  Mat<Q> r = m;
  const auto pivots = rref_in_place<Q>(r);
  const Eigen::Index cols = m.cols();
  std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
  for (auto p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;
  std::vector<Eigen::Index> free_cols;
  for (Eigen::Index c = 0; c < cols; ++c) {
    if (!is_pivot[static_cast<std::size_t>(c)]) free_cols.push_back(c);
  }
  Mat<Q> basis = zeros<Q>(cols, static_cast<Eigen::Index>(free_cols.size()));
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    const auto f = free_cols[k];
    const auto kk = static_cast<Eigen::Index>(k);
    basis(f, kk) = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) {
      basis(pivots[i], kk) = -r(static_cast<Eigen::Index>(i), f);
    }
  }
  return basis;
}

/// Some x with A x = b, free variables set to zero.
template <typename DA, typename DB>
auto solve(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b)
    -> std::optional<Vec<DA::Scalar::q>> {
  constexpr int Q = DA::Scalar::q;
  if (b.cols() != 1 || b.rows() != a.rows()) throw ShapeError("solve: right-hand side has wrong shape");
  Mat<Q> aug(a.rows(), a.cols() + 1);
  aug.leftCols(a.cols()) = a;
  aug.col(a.cols()) = b;
  const auto pivots = rref_in_place<Q>(aug);
  if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
  Vec<Q> x = Vec<Q>::Zero(a.cols());
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    x(pivots[i]) = aug(static_cast<Eigen::Index>(i), a.cols());
  }
  return x;
}

/// Reduced column-echelon form with zero columns dropped.
/// Two matrices span the same column space iff their canonical forms are identical.
template <typename Derived>
auto column_echelon_canonical(const Eigen::MatrixBase<Derived>& m) {
  constexpr int Q = Derived::Scalar::q;
  Mat<Q> t = m.transpose();
  const auto pivots = rref_in_place<Q>(t);
  return Mat<Q>(t.topRows(static_cast<Eigen::Index>(pivots.size())).transpose());
}

/// Compact byte string identifying a matrix exactly; used as a hash key.
template <typename Derived>
std::string key(const Eigen::MatrixBase<Derived>& m) {
  std::string k;
  k.reserve(static_cast<std::size_t>(2 * m.size() + 2));
  k.push_back(static_cast<char>(m.rows()));
  k.push_back(static_cast<char>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const int idx = m(i, j).index();
      k.push_back(static_cast<char>(idx & 0xff));
      k.push_back(static_cast<char>(idx >> 8));
    }
  }
  return k;
}

/// Rows separated by `;`, entries by `,`.
template <typename Derived>
std::string to_text(const Eigen::MatrixBase<Derived>& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (i > 0) out += ';';
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ',';
      out += to_text(m(i, j));
    }
  }
  return out;
}

template <int Q>
Mat<Q> parse_matrix(std::string_view text) {
  std::vector<std::vector<Fq2<Q>>> rows;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = std::min(text.find(';', start), text.size());
    const auto row_text = text.substr(start, end - start);
    std::vector<Fq2<Q>> row;
    std::size_t p = 0;
    while (p <= row_text.size()) {
      const auto e = std::min(row_text.find(',', p), row_text.size());
      row.push_back(parse_scalar<Q>(row_text.substr(p, e - p)));
      p = e + 1;
    }
    rows.push_back(std::move(row));
    start = end + 1;
  }
  const auto cols = rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != cols) throw ParameterError("ragged matrix text");
  }
  Mat<Q> m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

/// Horizontal concatenation [a | b].
template <typename A, typename B>
auto hcat(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  constexpr int Q = A::Scalar::q;
  if (a.rows() != b.rows()) throw ShapeError("hcat: row counts differ");
  Mat<Q> r(a.rows(), a.cols() + b.cols());
  r.leftCols(a.cols()) = a;
  r.rightCols(b.cols()) = b;
  return r;
}

/// 2n x 2n matrix from four n x n blocks.
template <int Q>
Mat<Q> blocks(const Mat<Q>& a, const Mat<Q>& b, const Mat<Q>& c, const Mat<Q>& d) {
  const auto n = a.rows();
  if (a.cols() != n || b.rows() != n || b.cols() != n || c.rows() != n || c.cols() != n ||
      d.rows() != n || d.cols() != n) {
    throw ShapeError("blocks: all blocks must be n x n");
  }
  Mat<Q> m(2 * n, 2 * n);
  m.topLeftCorner(n, n) = a;
  m.topRightCorner(n, n) = b;
  m.bottomLeftCorner(n, n) = c;
  m.bottomRightCorner(n, n) = d;
  return m;
}

template <int Q>
Mat<Q> scalar_matrix(Eigen::Index n, const Fq2<Q>& x) {
  Mat<Q> m = zeros<Q>(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = x;
  return m;
}

}  // namespace fsiegel
