#pragma once

// The three forms on E^{2n}: omega(v,w) = tv J w, hE(v,w) = omega(v, conj w), and the
// hermitian h0 with diagonal (-1,...,-1, 1,...,1).

#include "fsiegel/matrix.hpp"

namespace fsiegel {

/// J = (0, I; -I, 0).
template <int Q>
Mat<Q> J(Eigen::Index n) {
  Mat<Q> m = zeros<Q>(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, n + i) = 1;
    m(n + i, i) = -1;
  }
  return m;
}

/// diag(-I_n, I_n), the Gram matrix of h0.
template <int Q>
Mat<Q> h0_gram(Eigen::Index n) {
  Mat<Q> m = zeros<Q>(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = -1;
    m(n + i, n + i) = 1;
  }
  return m;
}

/// Canonical basis vector e_j, 1-based to match the usual e_1..e_{2n} labelling.
template <int Q>
Vec<Q> basis_vector(Eigen::Index dim, Eigen::Index j) {
  Vec<Q> v = Vec<Q>::Zero(dim);
  v(j - 1) = 1;
  return v;
}

namespace detail {
template <typename A, typename B>
void check_pair(const Eigen::MatrixBase<A>& v, const Eigen::MatrixBase<B>& w) {
  if (v.cols() != 1 || w.cols() != 1 || v.rows() != w.rows() || v.rows() % 2 != 0) {
    throw ShapeError("form arguments must be column vectors of equal even length");
  }
}
}  // namespace detail

template <typename A, typename B>
auto omega(const Eigen::MatrixBase<A>& v, const Eigen::MatrixBase<B>& w) {
  detail::check_pair(v, w);
  using S = typename A::Scalar;
  const auto n = v.rows() / 2;
  S acc(0);
  for (Eigen::Index i = 0; i < n; ++i) acc += v(i) * w(n + i) - v(n + i) * w(i);
  return acc;
}

template <typename A, typename B>
auto hE(const Eigen::MatrixBase<A>& v, const Eigen::MatrixBase<B>& w) {
  detail::check_pair(v, w);
  using S = typename A::Scalar;
  const auto n = v.rows() / 2;
  S acc(0);
  for (Eigen::Index i = 0; i < n; ++i) acc += v(i) * w(n + i).conj() - v(n + i) * w(i).conj();
  return acc;
}

template <typename A, typename B>
auto h0(const Eigen::MatrixBase<A>& v, const Eigen::MatrixBase<B>& w) {
  detail::check_pair(v, w);
  using S = typename A::Scalar;
  const auto n = v.rows() / 2;
  S acc(0);
  for (Eigen::Index i = 0; i < n; ++i) acc += v(n + i) * w(n + i).conj() - v(i) * w(i).conj();
  return acc;
}

enum class Form { hE, h0 };

/// Gram matrix of a form on the columns of b: G(i,j) = form(b_i, b_j).
template <typename Derived>
auto gram(Form form, const Eigen::MatrixBase<Derived>& b) {
  constexpr int Q = Derived::Scalar::q;
  const auto k = b.cols();
  Mat<Q> g(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      g(i, j) = form == Form::hE ? hE(b.col(i), b.col(j)) : h0(b.col(i), b.col(j));
    }
  }
  return g;
}

/// tB J B, the omega Gram matrix of the columns of b.
template <typename Derived>
auto omega_gram(const Eigen::MatrixBase<Derived>& b) {
  constexpr int Q = Derived::Scalar::q;
  if (b.rows() % 2 != 0) throw ShapeError("omega_gram: odd row count");
  Mat<Q> m = b.transpose() * J<Q>(b.rows() / 2) * b;
  return m;
}

}  // namespace fsiegel
