#pragma once

// Anti-involutions T in Sp(n,F) (T^2 = -I), the form b_T with matrix JT, the eigenspace model
// T -> V_i(T), and involutions T^2 = a I.

#include <map>
#include <random>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "fsiegel/orbit.hpp"

namespace fsiegel {

template <int Q>
Fq2<Q> square_root_of_minus_one() {
  const auto i = sqrt_in_E(Fq2<Q>(-1));
  if (!i) throw InternalError("-1 has no square root in E");
  return *i;
}

template <int Q>
struct AntiInvolutionSet {
  std::vector<Mat<Q>> elements;
  bool jt_symmetric_criterion = true;  // T^2 = -I  <=>  JT symmetric, over the whole group
  bool conjugation_closed = true;  // g T g^-1 stays in the set for every generator g
};

/// C(n,F) by filtering a full enumeration of Sp(n,F).
template <int Q>
AntiInvolutionSet<Q> anti_involutions(const GroupEnumeration<Q>& spf, std::span<const Mat<Q>> gens) {
  AntiInvolutionSet<Q> out;
  if (spf.elements.empty()) return out;
  const auto dim = spf.elements.front().rows();
  const auto Jn = J<Q>(dim / 2);
  const Mat<Q> minus_id = Mat<Q>(-identity<Q>(dim));
  std::unordered_set<std::string> keys;
  for (const auto& T : spf.elements) {
    const bool anti = equal(Mat<Q>(T * T), minus_id);
    const bool sym = is_symmetric(Mat<Q>(Jn * T));
    if (anti != sym) out.jt_symmetric_criterion = false;
    if (anti) {
      out.elements.push_back(T);
      keys.insert(key(T));
    }
  }
  for (const auto& g : gens) {
    const Mat<Q> ginv = inverse_or_throw(g);
    for (const auto& T : out.elements) {
      if (!keys.count(key(Mat<Q>(g * T * ginv)))) out.conjugation_closed = false;
    }
  }
  return out;
}

struct BFormReport {
  bool symmetric = false;
  bool det_is_one = false;
  bool discriminant_square = false;  // det(JT) a square in F: b_T is equivalent to the Euclidean form
  bool equivariant = false;          // J(g T g^-1) = t(g^-1) (JT) g^-1 for all generators
};

/// b_T, the symmetric form with matrix JT.
template <int Q>
Mat<Q> b_T(const Mat<Q>& T) {
  const auto dim = T.rows();
  if (!is_member(T, Group::SpF) || !equal(Mat<Q>(T * T), Mat<Q>(-identity<Q>(dim)))) {
    throw ParameterError("b_T: input is not an anti-involution of Sp(n,F)");
  }
  return J<Q>(dim / 2) * T;
}

template <int Q>
BFormReport b_form_report(const Mat<Q>& T, std::span<const Mat<Q>> gens) {
  BFormReport r;
  const Mat<Q> B = b_T(T);
  const auto Jn = J<Q>(T.rows() / 2);
  r.symmetric = is_symmetric(B);
  const auto d = det(B);
  r.det_is_one = d == Fq2<Q>(1);
  r.discriminant_square = false;
  for (int x = 1; x < Q; ++x) {
    if (Fq2<Q>(x * x) == d) r.discriminant_square = true;
  }
  r.equivariant = true;
  for (const auto& g : gens) {
    const Mat<Q> ginv = inverse_or_throw(g);
    const Mat<Q> lhs = Jn * g * T * ginv;
    const Mat<Q> rhs = ginv.transpose() * B * ginv;
    if (!equal(lhs, rhs)) r.equivariant = false;
  }
  return r;
}

/// kernel(T - lambda I) as a column basis.
template <int Q>
Mat<Q> eigenspace(const Mat<Q>& T, const Fq2<Q>& lambda) {
  return kernel(Mat<Q>(T - lambda * identity<Q>(T.rows())));
}

/// V_i(T) with i the first square root of -1; Lagrangian for every anti-involution.
template <int Q>
Lagrangian<Q> eigenspace_model(const Mat<Q>& T) {
  b_T(T);  // validates
  return Lagrangian<Q>::from_basis(eigenspace(T, square_root_of_minus_one<Q>()));
}

struct EigenspaceReport {
  bool nonzero = false;             // (i)
  bool conjugate_swaps = false;     // (ii) conj V_i = V_-i
  bool no_rational_points = false;  // (iii) F^{2n} ∩ V_i = 0
  bool f_linear_bijection = false;  // (iv) v -> v - iTv, F^{2n} -> V_i
  bool lagrangian = false;          // (v)
  std::size_t identity_failures = 0;  // (vi) hE(v - iTv, w - iTw) = 2 omega(v,w) + 2i b_T(v,w)
  bool orthogonal_decomposition = false;  // (vii)
  bool nondegenerate = false;       // (viii)

  bool ok() const {
    return nonzero && conjugate_swaps && no_rational_points && f_linear_bijection && lagrangian &&
           identity_failures == 0 && orthogonal_decomposition && nondegenerate;
  }
};

/// Eigenspace properties of an anti-involution when -1 is not a square in F.
/// The identity (vi) runs over all pairs of F^{2n} when exhaustive, else `samples` random pairs.
template <int Q>
EigenspaceReport eigenspace_report(const Mat<Q>& T, bool exhaustive, std::size_t samples, std::uint64_t seed) {
  using S = Fq2<Q>;
  EigenspaceReport r;
  const auto dim = T.rows();
  const auto n = dim / 2;
  const auto i = square_root_of_minus_one<Q>();
  const Mat<Q> Vi = eigenspace(T, i);
  const Mat<Q> Vmi = eigenspace(T, Fq2<Q>(-i));
  r.nonzero = Vi.cols() > 0 && Vmi.cols() > 0;
  if (!r.nonzero) return r;
  r.conjugate_swaps = equal(column_echelon_canonical(Mat<Q>(conjugate(Vi))), column_echelon_canonical(Vmi));
  // A conjugation-stable subspace is spanned by rational vectors, so the rational points of V_i
  // span V_i ∩ conj(V_i).
  r.no_rational_points = rank(hcat(Vi, Mat<Q>(conjugate(Vi)))) == 2 * Vi.cols();

  // (iv): images of e_1..e_{2n} under v -> v - iTv, written over F as 4n-vectors (re; im).
  const Mat<Q> phi = identity<Q>(dim) - i * T;
  Mat<Q> real_form(2 * dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    for (Eigen::Index r0 = 0; r0 < dim; ++r0) {
      real_form(r0, c) = S(phi(r0, c).re());
      real_form(dim + r0, c) = S(phi(r0, c).im());
    }
  }
  const bool in_vi = is_zero(Mat<Q>((T - i * identity<Q>(dim)) * phi));
  r.f_linear_bijection = in_vi && rank(real_form) == dim && Vi.cols() == n;

  try {
    const auto L = Lagrangian<Q>::from_basis(Vi);
    r.lagrangian = true;
    r.nondegenerate = label(L).h_rank == n;
  } catch (const NotLagrangianError&) {
    r.lagrangian = false;
  }

  bool orth = true;
  for (Eigen::Index a = 0; a < Vi.cols(); ++a) {
    for (Eigen::Index b = 0; b < Vmi.cols(); ++b) {
      orth = orth && hE(Vi.col(a), Vmi.col(b)).is_zero() && hE(Vmi.col(b), Vi.col(a)).is_zero();
    }
  }
  r.orthogonal_decomposition = orth;

  const Mat<Q> B = J<Q>(n) * T;
  const auto check = [&](const Vec<Q>& v, const Vec<Q>& w) {
    const Vec<Q> x = phi * v, y = phi * w;
    const S bT = (v.transpose() * B * w)(0, 0);
    if (hE(x, y) != S(2) * omega(v, w) + S(2) * i * bT) ++r.identity_failures;
  };
  if (exhaustive) {
    std::size_t count = 1;
    for (Eigen::Index k = 0; k < dim; ++k) count *= Q;
    std::vector<Vec<Q>> vs(count);
    for (std::size_t c = 0; c < count; ++c) {
      Vec<Q> v(dim);
      std::size_t x = c;
      for (Eigen::Index k = 0; k < dim; ++k) {
        v(k) = S(static_cast<int>(x % Q));
        x /= Q;
      }
      vs[c] = std::move(v);
    }
    for (const auto& v : vs) {
      for (const auto& w : vs) check(v, w);
    }
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, Q - 1);
    for (std::size_t t = 0; t < samples; ++t) {
      Vec<Q> v(dim), w(dim);
      for (Eigen::Index k = 0; k < dim; ++k) {
        v(k) = S(pick(rng));
        w(k) = S(pick(rng));
      }
      check(v, w);
    }
  }
  return r;
}

struct ModelReport {
  int epsilon = 0;
  std::size_t anti_involution_count = 0;
  // -1 not a square: T -> V_i(T) is an equivariant bijection onto H_n.
  bool image_in_stratum = false;  // H_n when epsilon = -1, H_0 when epsilon = +1
  bool injective = false;
  bool surjective = false;
  bool equivariant = false;
  std::size_t stratum_size = 0;
  std::size_t max_fiber = 0;
  // -1 a square: single conjugation orbit with isotropy Sp(n,F) ∩ K at H = diag(iI, -iI).
  std::optional<bool> single_orbit;
  std::optional<bool> isotropy_is_sp_cap_k;
  std::optional<std::size_t> isotropy_order;
  std::optional<bool> count_matches_quotient;
  std::optional<bool> cayley_conjugates_H_to_J;
  std::optional<bool> isotropy_matches_literal_diag_a_minus_a;  // n = 1 only
  std::optional<bool> isotropy_matches_diag_a_a_inverse;        // n = 1 only
};

template <int Q>
ModelReport verify_prop3(const GroupEnumeration<Q>& spf, std::span<const Mat<Q>> gens,
                         const AntiInvolutionSet<Q>& C, std::span<const Lagrangian<Q>> all, std::size_t cap) {
  using S = Fq2<Q>;
  ModelReport r;
  r.epsilon = epsilon_F(Q);
  r.anti_involution_count = C.elements.size();
  if (C.elements.empty()) return r;
  const auto dim = C.elements.front().rows();
  const auto n = dim / 2;
  const int target = r.epsilon == -1 ? static_cast<int>(n) : 0;

  std::unordered_set<std::string> stratum;
  for (const auto& W : all) {
    if (label(W).h_rank == target) stratum.insert(W.key());
  }
  r.stratum_size = stratum.size();

  std::unordered_map<std::string, std::size_t> fiber;
  bool in_stratum = true;
  for (const auto& T : C.elements) {
    const auto V = eigenspace_model(T);
    ++fiber[V.key()];
    in_stratum = in_stratum && stratum.count(V.key());
  }
  r.image_in_stratum = in_stratum;
  for (const auto& [k, c] : fiber) r.max_fiber = std::max(r.max_fiber, c);
  r.injective = r.max_fiber == 1;
  r.surjective = fiber.size() == stratum.size() && in_stratum;

  r.equivariant = true;
  for (const auto& g : gens) {
    const Mat<Q> ginv = inverse_or_throw(g);
    for (const auto& T : C.elements) {
      if (!(act(g, eigenspace_model(T)) == eigenspace_model(Mat<Q>(g * T * ginv)))) r.equivariant = false;
    }
  }

  if (r.epsilon == 1) {
    const auto i = square_root_of_minus_one<Q>();
    Mat<Q> H = zeros<Q>(dim, dim);
    for (Eigen::Index j = 0; j < n; ++j) {
      H(j, j) = i;
      H(n + j, n + j) = -i;
    }
    const auto orb = orbit_bfs(
        H, gens.size(), [&](std::size_t g, const Mat<Q>& T) { return Mat<Q>(gens[g] * T * inverse_or_throw(gens[g])); },
        [](const Mat<Q>& T) { return key(T); }, cap);
    std::unordered_set<std::string> cset;
    for (const auto& T : C.elements) cset.insert(key(T));
    bool same = orb.size() == cset.size();
    for (const auto& T : orb.points) same = same && cset.count(key(T));
    r.single_orbit = same;

    std::size_t iso = 0;
    bool iso_is_k = true;
    bool literal = true, inverse_pair = true;
    std::size_t cap_k = 0;
    for (const auto& g : spf.elements) {
      const bool block_diag = is_zero(g.topRightCorner(n, n)) && is_zero(g.bottomLeftCorner(n, n));
      cap_k += block_diag;
      const bool fixes = equal(Mat<Q>(g * H), Mat<Q>(H * g));
      iso += fixes;
      if (fixes != block_diag) iso_is_k = false;
      if (fixes && n == 1) {
        literal = literal && g(1, 1) == -g(0, 0);
        inverse_pair = inverse_pair && g(1, 1) == g(0, 0).inverse();
      }
    }
    r.isotropy_order = iso;
    r.isotropy_is_sp_cap_k = iso_is_k && iso == cap_k;
    r.count_matches_quotient = iso > 0 && spf.size() % iso == 0 && spf.size() / iso == C.elements.size();
    if (n == 1) {
      r.isotropy_matches_literal_diag_a_minus_a = literal;
      r.isotropy_matches_diag_a_a_inverse = inverse_pair;
    }

    // C(e_j) = (1/(-2i)) (e_j + i e_{n+j}),  C(e_{n+j}) = e_j - i e_{n+j}.
    Mat<Q> Cm = zeros<Q>(dim, dim);
    const S f = (S(-2) * i).inverse();
    for (Eigen::Index j = 0; j < n; ++j) {
      Cm(j, j) = f;
      Cm(n + j, j) = f * i;
      Cm(j, n + j) = 1;
      Cm(n + j, n + j) = -i;
    }
    r.cayley_conjugates_H_to_J =
        is_member(Cm, Group::SpF) && equal(Mat<Q>(Cm * H * inverse_or_throw(Cm)), J<Q>(n));
  }
  return r;
}

/// S_a = {T in G : T^2 = a I}.
template <int Q>
std::vector<Mat<Q>> s_a_set(const Fq2<Q>& a, const GroupEnumeration<Q>& group) {
  std::vector<Mat<Q>> out;
  if (group.elements.empty()) return out;
  const auto dim = group.elements.front().rows();
  const Mat<Q> target = a * identity<Q>(dim);
  for (const auto& T : group.elements) {
    if (equal(Mat<Q>(T * T), target)) out.push_back(T);
  }
  return out;
}

struct InvolutionClass {
  int k = 0;  // dimension of the +1 eigenspace
  std::size_t size = 0;
  std::size_t orbit_count = 0;  // conjugation orbits inside the class
  bool nondegenerate_eigenspaces = true;
  bool reconstructs_as_T_W = true;
};

/// Partitions S_1 by +1-eigenspace dimension and checks each class.
template <int Q>
std::vector<InvolutionClass> classify_involutions(const GroupEnumeration<Q>& group, std::span<const Mat<Q>> gens,
                                                  std::size_t cap) {
  const auto s1 = s_a_set(Fq2<Q>(1), group);
  std::map<int, std::vector<Mat<Q>>> by_k;
  for (const auto& T : s1) by_k[static_cast<int>(eigenspace(T, Fq2<Q>(1)).cols())].push_back(T);

  std::vector<InvolutionClass> out;
  for (const auto& [k, members] : by_k) {
    InvolutionClass cls;
    cls.k = k;
    cls.size = members.size();
    for (const auto& T : members) {
      const auto dim = T.rows();
      const Mat<Q> W1 = eigenspace(T, Fq2<Q>(1));
      const Mat<Q> Wm1 = eigenspace(T, Fq2<Q>(-1));
      const bool nd1 = W1.cols() == 0 || rank(omega_gram(W1)) == W1.cols();
      const bool nd2 = Wm1.cols() == 0 || rank(omega_gram(Wm1)) == Wm1.cols();
      cls.nondegenerate_eigenspaces = cls.nondegenerate_eigenspaces && nd1 && nd2;
      // T_W: identity on W = W1, minus identity on its omega-orthogonal complement.
      Mat<Q> perp = W1.cols() == 0 ? identity<Q>(dim) : kernel(Mat<Q>(W1.transpose() * J<Q>(dim / 2)));
      Mat<Q> P = hcat(W1, perp);
      Mat<Q> Dg = identity<Q>(dim);
      for (Eigen::Index j = W1.cols(); j < dim; ++j) Dg(j, j) = -1;
      const auto Pinv = inverse(P);
      cls.reconstructs_as_T_W = cls.reconstructs_as_T_W && Pinv && equal(Mat<Q>(P * Dg * *Pinv), T);
    }
    std::unordered_set<std::string> remaining;
    for (const auto& T : members) remaining.insert(key(T));
    for (const auto& T : members) {
      if (!remaining.count(key(T))) continue;
      const auto orb = orbit_bfs(
          T, gens.size(), [&](std::size_t g, const Mat<Q>& X) { return Mat<Q>(gens[g] * X * inverse_or_throw(gens[g])); },
          [](const Mat<Q>& X) { return key(X); }, cap);
      for (const auto& X : orb.points) remaining.erase(key(X));
      ++cls.orbit_count;
    }
    out.push_back(cls);
  }
  return out;
}

}  // namespace fsiegel
