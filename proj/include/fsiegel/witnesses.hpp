#pragma once

// Explicit Lagrangians with a prescribed h0-type and Siegel-image membership. Every asserted
// property is recomputed at construction; nothing is taken on trust.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fsiegel/lagrangian.hpp"

namespace fsiegel {

enum class WitnessStatus {
  kVerified,
  kFailed,
  kOutsideHypothesis,  // constructed although the textbook hypothesis does not hold
  kUnavailable,        // parameter search found nothing
};

inline std::string_view to_string(WitnessStatus s) {
  switch (s) {
    case WitnessStatus::kVerified: return "verified";
    case WitnessStatus::kFailed: return "failed";
    case WitnessStatus::kOutsideHypothesis: return "outside-hypothesis";
    case WitnessStatus::kUnavailable: return "unavailable";
  }
  return "?";
}

template <int Q>
struct Witness {
  std::string id;
  int param = 0;  // r for diag-siegel and W_r, k for Z_k, n otherwise
  std::optional<Lagrangian<Q>> space;
  int expected_o_type = 0;
  bool expected_in_image = false;
  StratumLabel observed{};
  bool observed_in_image = false;
  bool properties_hold = false;
  WitnessStatus status = WitnessStatus::kUnavailable;
  std::map<std::string, std::string> parameters;
  std::optional<Mat<Q>> transporter;  // Z_k only: Sp0 element moving it into the image
  bool transporter_ok = false;
  std::string note;
};

namespace detail {

template <int Q>
Fq2<Q> first_unit_of_norm(const Fq2<Q>& target) {
  for (int k = 1; k < Fq2<Q>::order; ++k) {
    const auto t = Fq2<Q>::from_index(k);
    if (t.norm() == target) return t;
  }
  throw InternalError("norm map not surjective");
}

template <int Q>
void finish(Witness<Q>& w, const Mat<Q>& basis, bool hypothesis_holds = true) {
  try {
    w.space = Lagrangian<Q>::from_basis(basis);
  } catch (const NotLagrangianError& e) {
    w.status = WitnessStatus::kFailed;
    w.note = e.what();
    return;
  }
  w.observed = label(*w.space);
  w.observed_in_image = in_siegel_image(*w.space);
  w.properties_hold = w.observed.o_type == w.expected_o_type && w.observed_in_image == w.expected_in_image;
  if (!hypothesis_holds) {
    w.status = WitnessStatus::kOutsideHypothesis;
  } else {
    w.status = w.properties_hold ? WitnessStatus::kVerified : WitnessStatus::kFailed;
  }
}

}  // namespace detail

/// siegel(diag(0,..,0, d,..,d)) with r zeros and N(d) = 1: type r, in the image.
template <int Q>
Witness<Q> diag_siegel_witness(Eigen::Index n, int r) {
  if (r < 0 || r > n) throw ParameterError("diag_siegel_witness: r out of range");
  Witness<Q> w;
  w.id = "diag-siegel";
  w.param = r;
  w.expected_o_type = r;
  w.expected_in_image = true;
  const auto d = detail::first_unit_of_norm<Q>(Fq2<Q>(1));
  w.parameters["d"] = to_text(d);
  Mat<Q> Z = zeros<Q>(n, n);
  for (Eigen::Index j = r; j < n; ++j) Z(j, j) = d;
  Mat<Q> b(2 * n, n);
  b.topRows(n) = Z;
  b.bottomRows(n) = identity<Q>(n);
  detail::finish(w, b);
  return w;
}

/// span(e_1..e_r, d e_{r+1} + e_{n+r+1}, .., d e_n + e_{2n}), N(d) = 1: type r, not in the image.
template <int Q>
Witness<Q> w_r_witness(Eigen::Index n, int r) {
  if (r < 1 || r > n) throw ParameterError("w_r_witness: r out of range");
  Witness<Q> w;
  w.id = "W_r";
  w.param = r;
  w.expected_o_type = r;
  w.expected_in_image = false;
  const auto d = detail::first_unit_of_norm<Q>(Fq2<Q>(1));
  w.parameters["d"] = to_text(d);
  Mat<Q> b = zeros<Q>(2 * n, n);
  for (Eigen::Index j = 0; j < r; ++j) b(j, j) = 1;
  for (Eigen::Index j = r; j < n; ++j) {
    b(j, j) = d;
    b(n + j, j) = 1;
  }
  detail::finish(w, b);
  return w;
}

/// Odd n >= 3: a type-0 Lagrangian outside the image built from (c, d) with
/// 1 + N(c) + N(d) = 0 and c conj(d) in F, padded with e_j + e_{n+j}.
template <int Q>
Witness<Q> odd_o0_witness(Eigen::Index n) {
  using S = Fq2<Q>;
  if (n < 3 || n % 2 == 0) throw ParameterError("odd_o0_witness: n must be odd and >= 3");
  Witness<Q> w;
  w.id = "odd-O0";
  w.param = static_cast<int>(n);
  w.expected_o_type = 0;
  w.expected_in_image = false;
  const bool hypothesis = epsilon_F(Q) == -1;
  if (!hypothesis) w.note = "-1 is a square in F; construction attempted outside its hypothesis";

  std::optional<std::pair<S, S>> cd;
  for (int i = 1; i < S::order && !cd; ++i) {
    for (int j = 1; j < S::order && !cd; ++j) {
      const auto c = S::from_index(i), d = S::from_index(j);
      if ((S(1) + c.norm() + d.norm()).is_zero() && (c * d.conj()).is_rational()) cd.emplace(c, d);
    }
  }
  if (!cd) {
    w.status = WitnessStatus::kUnavailable;
    w.note = "no (c, d) with 1 + N(c) + N(d) = 0 and c conj(d) in F";
    return w;
  }
  const auto [c, d] = *cd;
  w.parameters["c"] = to_text(c);
  w.parameters["d"] = to_text(d);
  Mat<Q> A(3, 3), B(3, 3);
  A << S(1), S(0), -c, S(0), S(1), -d, c.conj(), d.conj(), S(1);
  B << S(1), S(0), S(0), S(0), S(1), S(0), c, d, S(0);
  Mat<Q> b = zeros<Q>(2 * n, n);
  b.block(0, 0, 3, 3) = A;
  b.block(n, 0, 3, 3) = B;
  for (Eigen::Index j = 3; j < n; ++j) {
    b(j, j) = 1;
    b(n + j, j) = 1;
  }
  detail::finish(w, b, hypothesis);
  return w;
}

/// Even n: k = n/2 copies of {(Ax, Bx)} with A = (-bc, -b; c, 1), B = (1, 0; b, 0), N(b) = -1.
template <int Q>
Witness<Q> even_o0_witness(Eigen::Index n) {
  using S = Fq2<Q>;
  if (n < 2 || n % 2 != 0) throw ParameterError("even_o0_witness: n must be even");
  Witness<Q> w;
  w.id = "even-O0";
  w.param = static_cast<int>(n);
  w.expected_o_type = 0;
  w.expected_in_image = false;
  const auto b = detail::first_unit_of_norm<Q>(S(-1));
  const S c(1);
  w.parameters["b"] = to_text(b);
  w.parameters["c"] = to_text(c);
  Mat<Q> A(2, 2), B(2, 2);
  A << -(b * c), -b, c, S(1);
  B << S(1), S(0), b, S(0);
  Mat<Q> basis = zeros<Q>(2 * n, n);
  for (Eigen::Index t = 0; t < n / 2; ++t) {
    basis.block(2 * t, 2 * t, 2, 2) = A;
    basis.block(n + 2 * t, 2 * t, 2, 2) = B;
  }
  detail::finish(w, basis);
  return w;
}

/// Z_k = span(e_1..e_k, e_{n+k+1}..e_{2n}): type n, not in the image; the scalar Sp0 element
/// (alpha I, beta I; conj(beta) I, conj(alpha) I) with N(alpha) - N(beta) = 1 moves it into the image.
template <int Q>
Witness<Q> z_k_witness(Eigen::Index n, int k) {
  using S = Fq2<Q>;
  if (k < 1 || k > n) throw ParameterError("z_k_witness: k out of range");
  Witness<Q> w;
  w.id = "Z_k";
  w.param = k;
  w.expected_o_type = static_cast<int>(n);
  w.expected_in_image = false;
  Mat<Q> basis = zeros<Q>(2 * n, n);
  for (Eigen::Index j = 0; j < k; ++j) basis(j, j) = 1;
  for (Eigen::Index j = k; j < n; ++j) basis(n + j, j) = 1;
  detail::finish(w, basis);
  if (!w.space) return w;

  std::optional<std::pair<S, S>> ab;
  for (int i = 1; i < S::order && !ab; ++i) {
    for (int j = 1; j < S::order && !ab; ++j) {
      const auto a = S::from_index(i), bb = S::from_index(j);
      if (a.norm() - bb.norm() == S(1)) ab.emplace(a, bb);
    }
  }
  if (!ab) {
    w.note = "no alpha, beta with N(alpha) - N(beta) = 1";
    return w;
  }
  const auto [alpha, beta] = *ab;
  w.parameters["alpha"] = to_text(alpha);
  w.parameters["beta"] = to_text(beta);
  Mat<Q> g = blocks<Q>(scalar_matrix<Q>(n, alpha), scalar_matrix<Q>(n, beta), scalar_matrix<Q>(n, beta.conj()),
                       scalar_matrix<Q>(n, alpha.conj()));
  const auto moved = act(g, *w.space);
  w.transporter_ok = is_member(g, Group::Sp0) && in_siegel_image(moved) && label(moved).o_type == w.expected_o_type;
  w.transporter = std::move(g);
  if (!w.transporter_ok && w.status == WitnessStatus::kVerified) w.status = WitnessStatus::kFailed;
  return w;
}

/// Every witness applicable to dimension n.
template <int Q>
std::vector<Witness<Q>> witnesses(Eigen::Index n) {
  std::vector<Witness<Q>> out;
  for (int r = 0; r <= n; ++r) out.push_back(diag_siegel_witness<Q>(n, r));
  for (int r = 1; r <= n; ++r) out.push_back(w_r_witness<Q>(n, r));
  if (n >= 3 && n % 2 == 1) out.push_back(odd_o0_witness<Q>(n));
  if (n % 2 == 0) out.push_back(even_o0_witness<Q>(n));
  for (int k = 1; k <= n; ++k) out.push_back(z_k_witness<Q>(n, k));
  return out;
}

}  // namespace fsiegel
