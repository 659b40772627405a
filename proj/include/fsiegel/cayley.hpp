#pragma once

// Generalized Cayley transform: a symplectic similitude M of E^{2n} with
//   tM J M = multiplier * J   and   h0(Mv, Mw) = conformal * hE(v, w),
// so that conjugation by M carries Sp(n,F) onto Sp_0(n,F).

#include <optional>

#include "fsiegel/forms.hpp"

namespace fsiegel {

enum class CayleyBranch {
  kMinusOneNonSquare,  // M = (iI, I; I, iI), i^2 = -1, i outside F
  kMinusOneSquare,     // M = (I, bI; I, conj(b)I), b nonzero with conj(b) = -b
};

/// Diagnostics for the textbook similitude (vI, bI; I, vbI), N(v) = -1, used when -1 is a square.
template <int Q>
struct LiteralCayleyFormula {
  Fq2<Q> v;
  Fq2<Q> b;
  Mat<Q> M;
  bool is_similitude = false;
  Fq2<Q> multiplier;          // b(v^2 - 1)
  bool multiplier_is_square = false;
  bool conformal = false;     // whether tM D conj(M) is a multiple of J
};

template <int Q>
struct CayleyData {
  CayleyBranch branch{};
  Eigen::Index n = 0;
  std::optional<Fq2<Q>> i;    // square root of -1 (non-square branch)
  std::optional<Fq2<Q>> b;    // pure-imaginary parameter (square branch)
  Mat<Q> M;
  Fq2<Q> multiplier;          // tM J M = multiplier J
  Fq2<Q> raw_conformal;       // h0(Mv, Mw) = raw_conformal hE(v, w)
  bool normalized = false;
  std::optional<Fq2<Q>> lambda;  // C = lambda M, lambda^2 multiplier = 1
  std::optional<Mat<Q>> C;
  Fq2<Q> conformal;           // factor for C when normalized, else raw_conformal
  std::optional<LiteralCayleyFormula<Q>> literal;  // square branch only

  /// The matrix used for conjugation; scalars do not change Ad.
  const Mat<Q>& conjugator() const { return normalized ? *C : M; }
};

namespace detail {

/// Returns k with lhs == k * J, if any.
template <int Q>
std::optional<Fq2<Q>> multiple_of_J(const Mat<Q>& lhs) {
  const auto n = lhs.rows() / 2;
  const Fq2<Q> k = lhs(0, n);
  if (!equal(lhs, Mat<Q>(k * J<Q>(n)))) return std::nullopt;
  return k;
}

template <int Q>
Mat<Q> scalar_blocks(Eigen::Index n, Fq2<Q> a, Fq2<Q> b, Fq2<Q> c, Fq2<Q> d) {
  return blocks<Q>(scalar_matrix<Q>(n, a), scalar_matrix<Q>(n, b), scalar_matrix<Q>(n, c),
                   scalar_matrix<Q>(n, d));
}

}  // namespace detail

/// Builds and self-checks the Cayley similitude for dimension 2n.
template <int Q>
CayleyData<Q> cayley(Eigen::Index n) {
  using S = Fq2<Q>;
  if (n < 1) throw ParameterError("cayley: n must be positive");
  CayleyData<Q> d;
  d.n = n;
  const auto Jn = J<Q>(n);
  const auto D = h0_gram<Q>(n);
  const auto minus_one = S(-1);

  if (epsilon_F(Q) == -1) {
    d.branch = CayleyBranch::kMinusOneNonSquare;
    d.i = sqrt_in_E(minus_one);
    if (!d.i) throw InternalError("no square root of -1 in E");
    d.M = detail::scalar_blocks<Q>(n, *d.i, S(1), S(1), *d.i);
  } else {
    d.branch = CayleyBranch::kMinusOneSquare;
    S b;
    for (int k = 1; k < S::order; ++k) {
      const auto t = S::from_index(k);
      if (t.conj() == -t) {
        b = t;
        break;
      }
    }
    d.b = b;
    d.M = detail::scalar_blocks<Q>(n, S(1), b, S(1), b.conj());

    LiteralCayleyFormula<Q> lit;
    lit.v = solve_norm(minus_one);
    lit.b = b;
    lit.M = detail::scalar_blocks<Q>(n, lit.v, b, S(1), lit.v * b);
    lit.multiplier = b * (lit.v * lit.v - S(1));
    lit.is_similitude = detail::multiple_of_J<Q>(Mat<Q>(lit.M.transpose() * Jn * lit.M)).has_value();
    lit.multiplier_is_square = sqrt_in_E(lit.multiplier).has_value();
    lit.conformal =
        detail::multiple_of_J<Q>(Mat<Q>(lit.M.transpose() * D * conjugate(lit.M))).has_value();
    d.literal = lit;
  }

  const auto mu = detail::multiple_of_J<Q>(Mat<Q>(d.M.transpose() * Jn * d.M));
  const auto kappa = detail::multiple_of_J<Q>(Mat<Q>(d.M.transpose() * D * conjugate(d.M)));
  if (!mu || mu->is_zero()) throw InternalError("Cayley matrix is not a symplectic similitude");
  if (!kappa || kappa->is_zero()) throw InternalError("Cayley matrix is not conformal for (hE, h0)");
  d.multiplier = *mu;
  d.raw_conformal = *kappa;
  d.conformal = *kappa;

  if (const auto root = sqrt_in_E(d.multiplier)) {
    d.normalized = true;
    d.lambda = root->inverse();
    d.C = Mat<Q>(*d.lambda * d.M);
    // h0 is sesquilinear: the factor scales by lambda * conj(lambda).
    d.conformal = *d.lambda * d.lambda->conj() * d.raw_conformal;
  }
  return d;
}

}  // namespace fsiegel
