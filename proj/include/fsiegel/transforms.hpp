#pragma once

// Cayley conjugation checks, partial Cayley transforms t_k, the subspaces V_k, the structure of
// their Sp_0 stabilizers, and the map carrying hE-strata onto h0-strata.

#include <map>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include "fsiegel/orbit.hpp"

namespace fsiegel {

struct ConjugationReport {
  std::size_t generator_count = 0;
  std::vector<int> forward_failures;   // SpF generators g with M g M^-1 outside Sp0
  std::vector<int> backward_failures;  // Sp0 generators h with M^-1 h M outside SpF
  std::optional<std::size_t> closure_size;     // closure of conjugated generators
  std::optional<bool> elementwise_equal;       // C Sp(n,F) C^-1 == Sp0 closure as sets
  std::optional<bool> closure_members_in_sp0;  // every closure element passes is_member(Sp0)
  bool scalar_invariance = true;               // Ad(C) == Ad(M) when normalized
  bool identity_fixed = true;

  bool ok() const {
    return forward_failures.empty() && backward_failures.empty() && elementwise_equal.value_or(true) &&
           closure_members_in_sp0.value_or(true) && scalar_invariance && identity_fixed;
  }
};

/// Conjugates every Sp(n,F) generator into Sp_0 and back. With spf given (a full enumeration
/// of Sp(n,F)) also compares C Sp(n,F) C^-1 with the closure of the conjugated generators.
template <int Q>
ConjugationReport verify_conjugation(const CayleyData<Q>& cd, const GroupEnumeration<Q>* spf,
                                     std::size_t cap) {
  ConjugationReport rep;
  const auto n = cd.n;
  const Mat<Q>& M = cd.M;
  const Mat<Q> Minv = inverse_or_throw(M);
  const auto spf_gens = generator_matrices<Q>(Group::SpF, n);
  rep.generator_count = spf_gens.size();
  std::vector<Mat<Q>> conjugated;
  for (std::size_t i = 0; i < spf_gens.size(); ++i) {
    Mat<Q> h = M * spf_gens[i] * Minv;
    if (!is_member(h, Group::Sp0)) rep.forward_failures.push_back(static_cast<int>(i));
    if (cd.normalized) {
      const Mat<Q> hc = *cd.C * spf_gens[i] * inverse_or_throw(*cd.C);
      if (!equal(hc, h)) rep.scalar_invariance = false;
    }
    const Mat<Q> back = Minv * h * M;
    if (!is_member(back, Group::SpF) || !equal(back, spf_gens[i])) {
      rep.backward_failures.push_back(static_cast<int>(i));
    }
    conjugated.push_back(std::move(h));
  }
  rep.identity_fixed = equal(Mat<Q>(M * identity<Q>(2 * n) * Minv), identity<Q>(2 * n));

  if (spf != nullptr) {
    const auto closure = enumerate_group<Q>(std::span<const Mat<Q>>(conjugated), cap);
    rep.closure_size = closure.size();
    bool members = true;
    for (const auto& g : closure.elements) members = members && is_member(g, Group::Sp0);
    rep.closure_members_in_sp0 = members;
    bool same = closure.size() == spf->size();
    for (std::size_t i = 0; same && i < spf->elements.size(); ++i) {
      same = closure.contains(Mat<Q>(M * spf->elements[i] * Minv));
    }
    rep.elementwise_equal = same;
  }
  return rep;
}

/// Checks h0(Mv, Mw) = raw_conformal * hE(v, w) over all pairs of E^{2n} (exhaustive) or
/// over `samples` random pairs. Returns the number of failing pairs.
template <int Q>
std::size_t conformality_failures(const CayleyData<Q>& cd, bool exhaustive, std::size_t samples,
                                  std::uint64_t seed) {
  using S = Fq2<Q>;
  const auto dim = 2 * cd.n;
  std::size_t failures = 0;
  if (exhaustive) {
    std::size_t count = 1;
    for (Eigen::Index i = 0; i < dim; ++i) count *= S::order;
    std::vector<Vec<Q>> vs(count), mvs(count);
    for (std::size_t c = 0; c < count; ++c) {
      Vec<Q> v(dim);
      std::size_t x = c;
      for (Eigen::Index i = 0; i < dim; ++i) {
        v(i) = S::from_index(static_cast<int>(x % S::order));
        x /= S::order;
      }
      mvs[c] = cd.M * v;
      vs[c] = std::move(v);
    }
    for (std::size_t a = 0; a < count; ++a) {
      for (std::size_t b = 0; b < count; ++b) {
        if (h0(mvs[a], mvs[b]) != cd.raw_conformal * hE(vs[a], vs[b])) ++failures;
      }
    }
    return failures;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, S::order - 1);
  for (std::size_t t = 0; t < samples; ++t) {
    Vec<Q> v(dim), w(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      v(i) = S::from_index(pick(rng));
      w(i) = S::from_index(pick(rng));
    }
    const Vec<Q> mv = cd.M * v, mw = cd.M * w;
    if (h0(mv, mw) != cd.raw_conformal * hE(v, w)) ++failures;
  }
  return failures;
}

/// C^{-1} = -tau_F conj(C), meaningful in the branch where -1 is not a square.
template <int Q>
std::optional<bool> inverse_identity(const CayleyData<Q>& cd) {
  if (cd.branch != CayleyBranch::kMinusOneNonSquare || !cd.normalized) return std::nullopt;
  const Mat<Q> rhs = Fq2<Q>(-tau_F(Q)) * conjugate(*cd.C);
  return equal(inverse_or_throw(*cd.C), rhs);
}

/// sqrt(2)/2 with sqrt(2) the first square root of 2 in scan order.
template <int Q>
Fq2<Q> half_sqrt2() {
  const auto r = sqrt_in_E(Fq2<Q>(2));
  if (!r) throw InternalError("2 has no square root in E");
  return *r * Fq2<Q>(2).inverse();
}

/// t_k = (D1, D2; -D2, D1), D1 = diag((sqrt2/2) I_k, I_{n-k}), D2 = diag(-(sqrt2/2) I_k, 0).
template <int Q>
GroupElement<Q> partial_cayley(int k, Eigen::Index n) {
  if (k < 0 || k > n) throw ParameterError("partial_cayley: k out of range");
  const auto c = half_sqrt2<Q>();
  Mat<Q> D1 = identity<Q>(n), D2 = zeros<Q>(n, n);
  for (int j = 0; j < k; ++j) {
    D1(j, j) = c;
    D2(j, j) = -c;
  }
  return make_element<Q>(blocks<Q>(D1, D2, Mat<Q>(-D2), D1), Group::SpE);
}

/// The closed-form inverse: L1 = L4 = D1, L2 = diag((sqrt2/2) I_k, 0), L3 = -L2.
template <int Q>
Mat<Q> partial_cayley_inverse_formula(int k, Eigen::Index n) {
  if (k < 0 || k > n) throw ParameterError("partial_cayley_inverse_formula: k out of range");
  const auto c = half_sqrt2<Q>();
  Mat<Q> L1 = identity<Q>(n), L2 = zeros<Q>(n, n);
  for (int j = 0; j < k; ++j) {
    L1(j, j) = c;
    L2(j, j) = c;
  }
  return blocks<Q>(L1, L2, Mat<Q>(-L2), L1);
}

/// V_k = span(e_1 + e_{n+1}, .., e_k + e_{n+k}, e_{k+1}, .., e_n).
template <int Q>
Lagrangian<Q> v_k(int k, Eigen::Index n) {
  if (k < 0 || k > n) throw ParameterError("v_k: k out of range");
  Mat<Q> b = zeros<Q>(2 * n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    b(j, j) = 1;
    if (j < k) b(n + j, j) = 1;
  }
  return Lagrangian<Q>::from_basis(b);
}

/// O(k, F) = {S over F : tS S = I}, by brute force over all k x k matrices over F.
template <int Q>
std::vector<Mat<Q>> orthogonal_group(int k) {
  std::vector<Mat<Q>> out;
  if (k == 0) {
    out.emplace_back(0, 0);
    return out;
  }
  const int cells = k * k;
  std::vector<int> digits(static_cast<std::size_t>(cells), 0);
  const Mat<Q> I = identity<Q>(k);
  while (true) {
    Mat<Q> m(k, k);
    for (int c = 0; c < cells; ++c) m(c / k, c % k) = Fq2<Q>(digits[static_cast<std::size_t>(c)]);
    if (equal(Mat<Q>(m.transpose() * m), I)) out.push_back(m);
    int c = 0;
    while (c < cells && ++digits[static_cast<std::size_t>(c)] == Q) digits[static_cast<std::size_t>(c++)] = 0;
    if (c == cells) break;
  }
  return out;
}

/// U(m, E) = {T over E : T* T = I}, by brute force over all m x m matrices over E.
template <int Q>
std::vector<Mat<Q>> unitary_group(int m) {
  std::vector<Mat<Q>> out;
  if (m == 0) {
    out.emplace_back(0, 0);
    return out;
  }
  const int cells = m * m;
  std::vector<int> digits(static_cast<std::size_t>(cells), 0);
  const Mat<Q> I = identity<Q>(m);
  while (true) {
    Mat<Q> t(m, m);
    for (int c = 0; c < cells; ++c) t(c / m, c % m) = Fq2<Q>::from_index(digits[static_cast<std::size_t>(c)]);
    if (equal(Mat<Q>(star(t) * t), I)) out.push_back(t);
    int c = 0;
    while (c < cells && ++digits[static_cast<std::size_t>(c)] == Fq2<Q>::order) {
      digits[static_cast<std::size_t>(c++)] = 0;
    }
    if (c == cells) break;
  }
  return out;
}

/// |GL(k, F)| by brute force over all k x k matrices over F.
template <int Q>
std::size_t general_linear_order(int k) {
  if (k == 0) return 1;
  const int cells = k * k;
  std::vector<int> digits(static_cast<std::size_t>(cells), 0);
  std::size_t count = 0;
  while (true) {
    Mat<Q> m(k, k);
    for (int c = 0; c < cells; ++c) m(c / k, c % k) = Fq2<Q>(digits[static_cast<std::size_t>(c)]);
    count += rank(m) == k;
    int c = 0;
    while (c < cells && ++digits[static_cast<std::size_t>(c)] == Q) digits[static_cast<std::size_t>(c++)] = 0;
    if (c == cells) break;
  }
  return count;
}

struct StabilizerReport {
  int k = 0;
  int n = 0;
  std::size_t filtered_order = 0;
  std::size_t orthogonal_order = 0;  // |O(k, F)|
  std::size_t unitary_order = 0;     // |U(n-k, E)|
  std::size_t unipotent_order = 0;   // q^{k(k+1)/2}
  std::size_t predicted_order = 0;
  // Alternative fitted to the filter: |GL(k, F)| |U(n-k, E)| q^{k(k+1)/2 + 2k(n-k)}.
  std::size_t general_linear_order = 0;
  std::size_t alternative_order = 0;
  std::size_t group_order = 0;       // |Sp_0(n, F)|
  std::size_t orbit_size = 0;        // |Sp_0 V_k| from the orbit engine
  int o_type = 0;                    // type of h0 on V_k
  std::size_t stratum_size = 0;      // |O_{n-k}| from the census
  bool orbit_stabilizer_consistent = false;
  bool levi_factor_in_stabilizer = false;       // diag(S, T, S, conj T) elements
  bool unipotent_factor_in_stabilizer = false;  // Ad(t_k)(I, B; 0, I) elements
  bool t_k_symplectic = false;
  bool t_k_moves_L_plus_to_V_k = false;
  bool t_k_inverse_formula = false;

  bool order_matches() const { return filtered_order == predicted_order; }
};

/// Semidirect-product structure of Stab_{Sp_0}(V_k), computed against a full enumeration of Sp_0.
/// `stratum_size` is |O_{n-k}| from an independent census.
template <int Q>
StabilizerReport stabilizer_structure(int k, Eigen::Index n, const GroupEnumeration<Q>& sp0,
                                      std::span<const Mat<Q>> sp0_gens, std::size_t stratum_size,
                                      std::size_t cap) {
  using S = Fq2<Q>;
  StabilizerReport rep;
  rep.k = k;
  rep.n = static_cast<int>(n);
  const auto V = v_k<Q>(k, n);
  rep.o_type = label(V).o_type;

  const auto t = partial_cayley<Q>(k, n);
  rep.t_k_symplectic = is_member(t.mat, Group::SpE);
  rep.t_k_moves_L_plus_to_V_k = act(t.mat, L_plus<Q>(n)) == V;
  rep.t_k_inverse_formula = equal(inverse_or_throw(t.mat), partial_cayley_inverse_formula<Q>(k, n));

  const auto stab = stabilizer_elements(V, sp0);
  rep.filtered_order = stab.size();
  rep.group_order = sp0.size();

  const auto orth = orthogonal_group<Q>(k);
  const auto unit = unitary_group<Q>(static_cast<int>(n) - k);
  rep.orthogonal_order = orth.size();
  rep.unitary_order = unit.size();
  std::size_t unip = 1;
  for (int i = 0; i < k * (k + 1) / 2; ++i) unip *= Q;
  rep.unipotent_order = unip;
  rep.predicted_order = rep.orthogonal_order * rep.unitary_order * rep.unipotent_order;
  rep.general_linear_order = fsiegel::general_linear_order<Q>(k);
  std::size_t extended = 1;
  for (int i = 0; i < k * (k + 1) / 2 + 2 * k * (rep.n - k); ++i) extended *= Q;
  rep.alternative_order = rep.general_linear_order * rep.unitary_order * extended;

  const auto orb = orbit<Q>(V, sp0_gens, cap);
  rep.orbit_size = orb.size();
  rep.stratum_size = stratum_size;
  rep.orbit_stabilizer_consistent = rep.orbit_size * rep.filtered_order == rep.group_order;

  std::unordered_set<std::string> stab_keys;
  for (const auto& g : stab) stab_keys.insert(key(g));

  // Levi factor: diag(S, T, S, conj T).
  bool levi = true;
  const auto m = n - k;
  for (const auto& So : orth) {
    for (const auto& T : unit) {
      Mat<Q> g = zeros<Q>(2 * n, 2 * n);
      if (k > 0) {
        g.block(0, 0, k, k) = So;
        g.block(n, n, k, k) = So;
      }
      if (m > 0) {
        g.block(k, k, m, m) = T;
        g.block(n + k, n + k, m, m) = conjugate(T);
      }
      levi = levi && stab_keys.count(key(g)) && is_member(g, Group::Sp0);
    }
  }
  rep.levi_factor_in_stabilizer = levi;

  // Unipotent factor: Ad(t_k)(I, B; 0, I) with B = diag(B1, 0), B1 symmetric and conj(B1) = -B1.
  bool unipotent = true;
  const auto sym = detail::symmetric_basis<Q>(k);
  const Mat<Q> tinv = inverse_or_throw(t.mat);
  std::vector<int> digits(sym.size(), 0);
  while (true) {
    Mat<Q> B = zeros<Q>(n, n);
    for (std::size_t i = 0; i < sym.size(); ++i) {
      if (k > 0) B.block(0, 0, k, k) += Mat<Q>(S(0, digits[i]) * sym[i]);
    }
    const Mat<Q> u = t.mat * blocks<Q>(identity<Q>(n), B, zeros<Q>(n, n), identity<Q>(n)) * tinv;
    unipotent = unipotent && stab_keys.count(key(u)) && is_member(u, Group::Sp0);
    std::size_t i = 0;
    while (i < digits.size() && ++digits[i] == Q) digits[i++] = 0;
    if (i == digits.size()) break;
  }
  rep.unipotent_factor_in_stabilizer = unipotent;
  return rep;
}

/// Sp0 ∩ K P^+ (lower-left block zero) compared with {diag(A, conj A) : A in U(n, E)}.
template <int Q>
bool sp0_parabolic_intersection(const GroupEnumeration<Q>& sp0, Eigen::Index n) {
  std::unordered_set<std::string> filtered;
  for (const auto& g : sp0.elements) {
    if (is_zero(g.bottomLeftCorner(n, n))) filtered.insert(key(g));
  }
  const auto unit = unitary_group<Q>(static_cast<int>(n));
  if (unit.size() != filtered.size()) return false;
  for (const auto& A : unit) {
    const Mat<Q> g = blocks<Q>(A, zeros<Q>(n, n), zeros<Q>(n, n), Mat<Q>(conjugate(A)));
    if (!filtered.count(key(g))) return false;
  }
  return true;
}

struct StrataMapEntry {
  int j = 0;
  std::size_t h_count = 0;
  std::size_t o_count = 0;
  bool image_equals_o = false;  // act(M, H_j) == O_j as sets
  bool image_equals_h = false;  // the literal reading: act(M, H_j) == act(M, O_j)
};

/// For each j compares {M W : W in H_j} with O_j.
template <int Q>
std::vector<StrataMapEntry> map_strata(const CayleyData<Q>& cd, std::span<const Lagrangian<Q>> all,
                                       std::span<const StratumLabel> labels) {
  if (labels.size() != all.size()) throw ShapeError("map_strata: one label per point required");
  const auto n = cd.n;
  std::vector<std::unordered_set<std::string>> h(static_cast<std::size_t>(n + 1)), o(h.size()),
      mh(h.size()), mo(h.size());
  for (std::size_t p = 0; p < all.size(); ++p) {
    const auto& W = all[p];
    const auto& l = labels[p];
    const auto moved = act(cd.M, W).key();
    h[static_cast<std::size_t>(l.h_rank)].insert(W.key());
    o[static_cast<std::size_t>(l.o_type)].insert(W.key());
    mh[static_cast<std::size_t>(l.h_rank)].insert(moved);
    mo[static_cast<std::size_t>(l.o_type)].insert(moved);
  }
  std::vector<StrataMapEntry> out;
  for (std::size_t j = 0; j < h.size(); ++j) {
    StrataMapEntry e;
    e.j = static_cast<int>(j);
    e.h_count = h[j].size();
    e.o_count = o[j].size();
    e.image_equals_o = mh[j] == o[j];
    e.image_equals_h = mh[j] == mo[j];
    out.push_back(e);
  }
  return out;
}

}  // namespace fsiegel
