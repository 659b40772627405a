#pragma once

// Sp(n,E), Sp(n,F) and Sp_0(n,F) = U(E^{2n}, h0) ∩ Sp(n,E): membership, generators,
// orders and capped enumeration.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fsiegel/cayley.hpp"

namespace fsiegel {

enum class Group { SpE, SpF, Sp0 };

inline std::string_view to_string(Group g) {
  switch (g) {
    case Group::SpE: return "sp";
    case Group::SpF: return "spf";
    case Group::Sp0: return "sp0";
  }
  return "?";
}

inline Group parse_group(std::string_view s) {
  if (s == "sp") return Group::SpE;
  if (s == "spf") return Group::SpF;
  if (s == "sp0") return Group::Sp0;
  throw ParameterError("unknown group '" + std::string(s) + "' (expected sp|spf|sp0)");
}

namespace detail {

template <int Q>
void check_square_even(const Mat<Q>& g) {
  if (g.rows() != g.cols() || g.rows() % 2 != 0 || g.rows() == 0) {
    throw ShapeError("group element must be 2n x 2n");
  }
}

/// tA C = tC A, tD B = tB D, tA D - tC B = I.
template <int Q>
bool sp_block_conditions(const Mat<Q>& g) {
  const auto n = g.rows() / 2;
  const Mat<Q> A = g.topLeftCorner(n, n), B = g.topRightCorner(n, n);
  const Mat<Q> C = g.bottomLeftCorner(n, n), D = g.bottomRightCorner(n, n);
  return equal(Mat<Q>(A.transpose() * C), Mat<Q>(C.transpose() * A)) &&
         equal(Mat<Q>(D.transpose() * B), Mat<Q>(B.transpose() * D)) &&
         equal(Mat<Q>(A.transpose() * D - C.transpose() * B), identity<Q>(n));
}

template <int Q>
bool sp_matrix_identity(const Mat<Q>& g) {
  const auto Jn = J<Q>(g.rows() / 2);
  return equal(Mat<Q>(g.transpose() * Jn * g), Jn);
}

/// Siegel's conditions (S) for (R, S, T, V): T = conj S, V = conj R, R tS = S tR,
/// R t(conj R) - S t(conj S) = I.
template <int Q>
bool sp0_siegel_conditions(const Mat<Q>& g) {
  const auto n = g.rows() / 2;
  const Mat<Q> R = g.topLeftCorner(n, n), S = g.topRightCorner(n, n);
  const Mat<Q> T = g.bottomLeftCorner(n, n), V = g.bottomRightCorner(n, n);
  return equal(T, Mat<Q>(conjugate(S))) && equal(V, Mat<Q>(conjugate(R))) &&
         equal(Mat<Q>(R * S.transpose()), Mat<Q>(S * R.transpose())) &&
         equal(Mat<Q>(R * star(R) - S * star(S)), identity<Q>(n));
}

template <int Q>
bool h0_preserved(const Mat<Q>& g) {
  const auto D = h0_gram<Q>(g.rows() / 2);
  return equal(Mat<Q>(g.transpose() * D * conjugate(g)), D);
}

}  // namespace detail

/// Membership, always computed two independent ways; disagreement throws InternalError.
template <int Q>
bool is_member(const Mat<Q>& g, Group tag) {
  detail::check_square_even(g);
  const bool by_blocks = detail::sp_block_conditions(g);
  const bool by_identity = detail::sp_matrix_identity(g);
  if (by_blocks != by_identity) {
    throw InternalError("Sp membership: block conditions and tgJg = J disagree");
  }
  switch (tag) {
    case Group::SpE: return by_identity;
    case Group::SpF: return by_identity && is_rational(g);
    case Group::Sp0: {
      const bool by_s = detail::sp0_siegel_conditions(g);
      const bool by_forms = by_identity && detail::h0_preserved(g);
      if (by_s != by_forms) {
        throw InternalError("Sp0 membership: conditions (S) and form preservation disagree");
      }
      return by_forms;
    }
  }
  return false;
}

template <int Q>
struct GroupElement {
  Mat<Q> mat;
  Group tag{};
};

template <int Q>
GroupElement<Q> make_element(Mat<Q> g, Group tag) {
  if (!is_member(g, tag)) {
    throw ParameterError("matrix is not a member of " + std::string(to_string(tag)));
  }
  return GroupElement<Q>{std::move(g), tag};
}

namespace detail {

/// Standard basis of n x n symmetric matrices over F: E_ii, then E_ij + E_ji for i < j.
template <int Q>
std::vector<Mat<Q>> symmetric_basis(Eigen::Index n) {
  std::vector<Mat<Q>> out;
  for (Eigen::Index i = 0; i < n; ++i) {
    Mat<Q> m = zeros<Q>(n, n);
    m(i, i) = 1;
    out.push_back(m);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      Mat<Q> m = zeros<Q>(n, n);
      m(i, j) = 1;
      m(j, i) = 1;
      out.push_back(m);
    }
  }
  return out;
}

}  // namespace detail

/// Conjugate g by m: m g m^{-1}.
template <int Q>
Mat<Q> conjugate_by(const Mat<Q>& m, const Mat<Q>& g) {
  return m * g * inverse_or_throw(m);
}

/// Generators: opposite unipotent families (I,B;0,I), (I,0;B,I) with B over a basis of
/// Sym(F^n) (SpF) or an F-basis of Sym(E^n) (SpE); Sp0 gets the Cayley conjugates of SpF's.
template <int Q>
std::vector<GroupElement<Q>> generators(Group tag, Eigen::Index n) {
  if (n < 1) throw ParameterError("generators: n must be positive");
  std::vector<Mat<Q>> sym = detail::symmetric_basis<Q>(n);
  if (tag == Group::SpE) {
    const auto count = sym.size();
    for (std::size_t k = 0; k < count; ++k) sym.push_back(Mat<Q>(Fq2<Q>::s() * sym[k]));
  }
  const auto I = identity<Q>(n);
  const auto Z = zeros<Q>(n, n);
  std::vector<Mat<Q>> mats;
  for (const auto& B : sym) mats.push_back(blocks<Q>(I, B, Z, I));
  for (const auto& B : sym) mats.push_back(blocks<Q>(I, Z, B, I));

  if (tag == Group::Sp0) {
    const auto c = cayley<Q>(n);
    for (auto& g : mats) g = conjugate_by<Q>(c.M, g);
  }
  std::vector<GroupElement<Q>> out;
  out.reserve(mats.size());
  for (auto& g : mats) out.push_back(make_element<Q>(std::move(g), tag));
  return out;
}

template <int Q>
std::vector<Mat<Q>> generator_matrices(Group tag, Eigen::Index n) {
  std::vector<Mat<Q>> out;
  for (auto& g : generators<Q>(tag, n)) out.push_back(std::move(g.mat));
  return out;
}

/// |Sp(2n, q)| = q^{n^2} prod_{i=1..n} (q^{2i} - 1); SpE uses q^2; Sp0 equals SpF.
inline std::uint64_t group_order(Group tag, int q, int n) {
  make_fields(q);
  if (n < 1) throw ParameterError("group_order: n must be positive");
  unsigned __int128 base = static_cast<unsigned>(q);
  if (tag == Group::SpE) base *= base;
  unsigned __int128 order = 1;
  const auto limit = static_cast<unsigned __int128>(UINT64_MAX);
  const auto check = [&] {
    if (order > limit) throw ResourceError("group order exceeds 64 bits");
  };
  for (int k = 0; k < n * n; ++k) {
    order *= base;
    check();
  }
  unsigned __int128 p = 1;
  for (int i = 1; i <= n; ++i) {
    p *= base * base;
    order *= (p - 1);
    check();
  }
  return static_cast<std::uint64_t>(order);
}

/// Elements of a finite matrix group in BFS order, with an exact-content index.
template <int Q>
struct GroupEnumeration {
  std::vector<Mat<Q>> elements;
  std::unordered_map<std::string, std::size_t> index;

  std::size_t size() const { return elements.size(); }
  bool contains(const Mat<Q>& g) const { return index.count(key(g)) != 0; }
};

/// BFS closure of gens under left multiplication, starting from the identity.
template <int Q>
GroupEnumeration<Q> enumerate_group(std::span<const Mat<Q>> gens, std::size_t cap) {
  if (cap == 0) throw ParameterError("enumerate_group: cap must be positive");
  if (gens.empty()) throw ParameterError("enumerate_group: empty generator list");
  GroupEnumeration<Q> out;
  const Mat<Q> id = identity<Q>(gens.front().rows());
  out.index.emplace(key(id), 0);
  out.elements.push_back(id);
  for (std::size_t head = 0; head < out.elements.size(); ++head) {
    for (const auto& g : gens) {
      Mat<Q> y = g * out.elements[head];
      auto k = key(y);
      if (out.index.count(k)) continue;
      if (out.elements.size() >= cap) {
        throw ResourceError("group enumeration exceeded cap of " + std::to_string(cap));
      }
      out.index.emplace(std::move(k), out.elements.size());
      out.elements.push_back(std::move(y));
    }
  }
  return out;
}

template <int Q>
GroupEnumeration<Q> enumerate_group(Group tag, Eigen::Index n, std::size_t cap) {
  const auto gens = generator_matrices<Q>(tag, n);
  return enumerate_group<Q>(std::span<const Mat<Q>>(gens), cap);
}

/// (tT^{-1}, 0; 0, T) for a permutation matrix T; lies in Sp(n,F) ∩ Sp_0(n,F).
template <int Q>
GroupElement<Q> permutation_embed(const Mat<Q>& T) {
  if (T.rows() != T.cols()) throw ParameterError("permutation_embed: not square");
  const auto n = T.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    int row_ones = 0, col_ones = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      for (const auto& x : {T(i, j), T(j, i)}) {
        if (!x.is_zero() && x != Fq2<Q>(1)) throw ParameterError("permutation_embed: not a permutation");
      }
      row_ones += T(i, j) == Fq2<Q>(1);
      col_ones += T(j, i) == Fq2<Q>(1);
    }
    if (row_ones != 1 || col_ones != 1) throw ParameterError("permutation_embed: not a permutation");
  }
  const Mat<Q> g = blocks<Q>(Mat<Q>(inverse_or_throw(T).transpose()), zeros<Q>(n, n), zeros<Q>(n, n), T);
  if (!is_member(g, Group::SpF) || !is_member(g, Group::Sp0)) {
    throw InternalError("permutation embedding left Sp(n,F) ∩ Sp_0(n,F)");
  }
  return GroupElement<Q>{g, Group::SpF};
}

}  // namespace fsiegel
