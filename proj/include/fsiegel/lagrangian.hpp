#pragma once

// Lagrangian subspaces of (E^{2n}, omega), stored by their canonical column-echelon basis.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fsiegel/orbit_core.hpp"
#include "fsiegel/symplectic.hpp"

namespace fsiegel {

template <int Q>
class Lagrangian {
 public:
  /// Canonicalizes; requires rank n and tM J M = 0 for M of shape 2n x k.
  static Lagrangian from_basis(const Mat<Q>& m) {
    if (m.rows() == 0 || m.rows() % 2 != 0) throw ShapeError("Lagrangian basis needs 2n rows");
    const auto n = m.rows() / 2;
    Mat<Q> c = column_echelon_canonical(m);
    if (c.cols() != n) {
      throw NotLagrangianError("span has dimension " + std::to_string(c.cols()) + ", expected " +
                               std::to_string(n));
    }
    if (!is_zero(omega_gram(c))) throw NotLagrangianError("subspace is not omega-isotropic");
    return Lagrangian(std::move(c));
  }

  const Mat<Q>& basis() const { return basis_; }
  Eigen::Index n() const { return basis_.cols(); }
  const std::string& key() const { return key_; }

  friend bool operator==(const Lagrangian& a, const Lagrangian& b) { return a.key_ == b.key_; }

 private:
  explicit Lagrangian(Mat<Q> canonical) : basis_(std::move(canonical)), key_(fsiegel::key(basis_)) {}

  Mat<Q> basis_;
  std::string key_;
};

struct StratumLabel {
  int h_rank = 0;  // rank of hE on W
  int o_type = 0;  // type (= rank) of h0 on W
  friend bool operator==(const StratumLabel&, const StratumLabel&) = default;
};

/// span(e_1..e_n).
template <int Q>
Lagrangian<Q> L_plus(Eigen::Index n) {
  Mat<Q> m = zeros<Q>(2 * n, n);
  m.topRows(n) = identity<Q>(n);
  return Lagrangian<Q>::from_basis(m);
}

/// span(e_{n+1}..e_{2n}).
template <int Q>
Lagrangian<Q> L_minus(Eigen::Index n) {
  Mat<Q> m = zeros<Q>(2 * n, n);
  m.bottomRows(n) = identity<Q>(n);
  return Lagrangian<Q>::from_basis(m);
}

/// Columns of (Z; I) for symmetric Z.
template <int Q>
Lagrangian<Q> siegel(const Mat<Q>& Z) {
  if (!is_symmetric(Z)) throw ParameterError("siegel: Z must be symmetric");
  const auto n = Z.rows();
  Mat<Q> m(2 * n, n);
  m.topRows(n) = Z;
  m.bottomRows(n) = identity<Q>(n);
  return Lagrangian<Q>::from_basis(m);
}

/// W is a Siegel image iff its projection to the second factor is onto.
template <int Q>
bool in_siegel_image(const Lagrangian<Q>& W) {
  return rank(W.basis().bottomRows(W.n())) == W.n();
}

/// The Z with siegel(Z) = W, when W is in the image.
template <int Q>
std::optional<Mat<Q>> siegel_preimage(const Lagrangian<Q>& W) {
  const auto n = W.n();
  const auto inv = inverse(W.basis().bottomRows(n));
  if (!inv) return std::nullopt;
  return Mat<Q>(W.basis().topRows(n) * *inv);
}

template <int Q>
Mat<Q> gram(Form form, const Lagrangian<Q>& W) {
  return gram(form, W.basis());
}

template <int Q>
StratumLabel label(const Lagrangian<Q>& W) {
  return StratumLabel{static_cast<int>(rank(gram(Form::hE, W))),
                      static_cast<int>(rank(gram(Form::h0, W)))};
}

template <int Q>
Lagrangian<Q> conj_lagrangian(const Lagrangian<Q>& W) {
  return Lagrangian<Q>::from_basis(Mat<Q>(conjugate(W.basis())));
}

struct ConjugateDims {
  int sum_dim = 0;           // dim(W + conj W)
  int intersection_dim = 0;  // dim(W ∩ conj W)
};

template <int Q>
ConjugateDims conjugate_dims(const Lagrangian<Q>& W) {
  const auto r = static_cast<int>(rank(hcat(W.basis(), conjugate(W.basis()))));
  return ConjugateDims{r, static_cast<int>(2 * W.n()) - r};
}

/// Canonical basis of W ∩ conj(W) (possibly zero columns).
template <int Q>
Mat<Q> intersection_with_conjugate(const Lagrangian<Q>& W) {
  const auto n = W.n();
  const Mat<Q> k = kernel(hcat(W.basis(), Mat<Q>(-conjugate(W.basis()))));
  return column_echelon_canonical(Mat<Q>(W.basis() * k.topRows(n)));
}

/// Canonical basis of the hE-radical {w in W : hE(x, w) = 0 for all x in W}.
template <int Q>
Mat<Q> hE_radical(const Lagrangian<Q>& W) {
  // hE(b_i, B c) = sum_j G(i,j) conj(c_j), so the radical is B conj(ker G).
  const Mat<Q> k = kernel(gram(Form::hE, W));
  return column_echelon_canonical(Mat<Q>(W.basis() * conjugate(k)));
}

/// prod_{k=1..n} (q^{2k} + 1).
inline std::uint64_t lagrangian_count(int q, int n) {
  std::uint64_t total = 1;
  std::uint64_t p = 1;
  for (int k = 1; k <= n; ++k) {
    p *= static_cast<std::uint64_t>(q) * static_cast<std::uint64_t>(q);
    total *= p + 1;
  }
  return total;
}

/// Canonical basis of g(W).
template <int Q>
Lagrangian<Q> act(const Mat<Q>& g, const Lagrangian<Q>& W) {
  if (g.cols() != W.basis().rows() || g.rows() != g.cols()) throw ShapeError("act: size mismatch");
  return Lagrangian<Q>::from_basis(Mat<Q>(g * W.basis()));
}

/// All Lagrangians, as the orbit of L_+ under generators of Sp(n,E).
template <int Q>
std::vector<Lagrangian<Q>> enumerate_lagrangians(Eigen::Index n, std::size_t cap) {
  const auto expected = lagrangian_count(Q, static_cast<int>(n));
  if (expected > cap) {
    throw ResourceError("Lagrangian count " + std::to_string(expected) + " exceeds cap " +
                        std::to_string(cap));
  }
  const auto gens = generator_matrices<Q>(Group::SpE, n);
  auto rec = orbit_bfs(
      L_plus<Q>(n), gens.size(), [&](std::size_t g, const Lagrangian<Q>& W) { return act(gens[g], W); },
      [](const Lagrangian<Q>& W) { return W.key(); }, cap);
  if (rec.size() != expected) {
    throw VerificationFailure("Lagrangian enumeration found " + std::to_string(rec.size()) +
                              " points, formula gives " + std::to_string(expected));
  }
  return std::move(rec.points);
}

/// Independent route: every n-dimensional subspace of E^{2n} in reduced row-echelon form,
/// filtered for isotropy. Exponential in n; intended for tiny cells.
template <int Q>
std::vector<Lagrangian<Q>> enumerate_lagrangians_bruteforce(Eigen::Index n) {
  using S = Fq2<Q>;
  const auto dim = 2 * n;
  std::vector<Lagrangian<Q>> out;
  std::vector<Eigen::Index> pivots(static_cast<std::size_t>(n));
  std::function<void(Eigen::Index, Eigen::Index)> choose = [&](Eigen::Index row, Eigen::Index from) {
    if (row == n) {
      std::vector<bool> is_pivot(static_cast<std::size_t>(dim), false);
      for (auto p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;
      std::vector<std::pair<Eigen::Index, Eigen::Index>> free_slots;
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index c = pivots[static_cast<std::size_t>(i)] + 1; c < dim; ++c) {
          if (!is_pivot[static_cast<std::size_t>(c)]) free_slots.emplace_back(i, c);
        }
      }
      std::vector<int> digits(free_slots.size(), 0);
      while (true) {
        Mat<Q> r = zeros<Q>(n, dim);
        for (Eigen::Index i = 0; i < n; ++i) r(i, pivots[static_cast<std::size_t>(i)]) = 1;
        for (std::size_t k = 0; k < free_slots.size(); ++k) {
          r(free_slots[k].first, free_slots[k].second) = S::from_index(digits[k]);
        }
        const Mat<Q> b = r.transpose();
        if (is_zero(omega_gram(b))) out.push_back(Lagrangian<Q>::from_basis(b));
        std::size_t k = 0;
        while (k < digits.size() && ++digits[k] == S::order) digits[k++] = 0;
        if (k == digits.size()) break;
      }
      return;
    }
    for (Eigen::Index p = from; p < dim; ++p) {
      pivots[static_cast<std::size_t>(row)] = p;
      choose(row + 1, p + 1);
    }
  };
  choose(0, 0);
  return out;
}

}  // namespace fsiegel
