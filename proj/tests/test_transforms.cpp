#include <doctest.h>

#include "fsiegel/transforms.hpp"

using namespace fsiegel;

namespace {

template <int Q>
std::size_t o_stratum_size(Eigen::Index n, int type) {
  std::size_t count = 0;
  for (const auto& w : enumerate_lagrangians<Q>(n, 100000)) count += label(w).o_type == type;
  return count;
}

template <int Q>
std::vector<StratumLabel> labels_of(const std::vector<Lagrangian<Q>>& all) {
  std::vector<StratumLabel> out;
  for (const auto& w : all) out.push_back(label(w));
  return out;
}

}  // namespace

TEST_CASE("Cayley matrix for q = 3, n = 1") {
  using S = Fq2<3>;
  const auto cd = cayley<3>(1);
  Mat<3> expected(2, 2);
  expected << S::s(), S(1), S(1), S::s();
  CHECK(equal(cd.M, expected));
  CHECK(cd.normalized);
  CHECK(inverse_identity(cd) == std::optional<bool>(true));
  CHECK(conformality_failures(cd, true, 0, 0) == 0);
  CHECK(conformality_failures(cayley<5>(1), false, 500, 1) == 0);
  CHECK_FALSE(inverse_identity(cayley<5>(1)).has_value());
}

TEST_CASE("conjugation carries Sp(n,F) onto Sp0") {
  const auto spf = enumerate_group<3>(Group::SpF, 1, 1000);
  const auto rep = verify_conjugation(cayley<3>(1), &spf, 1000);
  CHECK(rep.ok());
  CHECK(rep.closure_size == std::optional<std::size_t>(24));
  CHECK(rep.elementwise_equal == std::optional<bool>(true));
  const auto rep5 = verify_conjugation<5>(cayley<5>(2), nullptr, 1000);
  CHECK(rep5.forward_failures.empty());
  CHECK(rep5.backward_failures.empty());
}

TEST_CASE("partial Cayley elements and V_k") {
  using S = Fq2<3>;
  const auto t = partial_cayley<3>(1, 1).mat;
  Mat<3> expected(2, 2);
  expected << S(0, 2), S(0, -2), S(0, 2), S(0, 2);
  CHECK(equal(t, expected));
  for (int n = 1; n <= 3; ++n) {
    for (int k = 0; k <= n; ++k) {
      const auto tk = partial_cayley<3>(k, n).mat;
      CHECK(equal(inverse_or_throw(tk), partial_cayley_inverse_formula<3>(k, n)));
      CHECK(act(tk, L_plus<3>(n)) == v_k<3>(k, n));
      CHECK(label(v_k<3>(k, n)) == StratumLabel{0, n - k});
    }
  }
  CHECK_THROWS_AS(v_k<3>(3, 2), ParameterError);
  CHECK_THROWS_AS(partial_cayley<3>(-1, 2), ParameterError);
}

TEST_CASE("small classical group orders") {
  CHECK(orthogonal_group<3>(1).size() == 2);
  CHECK(orthogonal_group<3>(2).size() == 8);
  CHECK(unitary_group<3>(1).size() == 4);
  CHECK(unitary_group<3>(2).size() == 96);
  CHECK(general_linear_order<3>(1) == 2);
  CHECK(general_linear_order<3>(2) == 48);
  CHECK(general_linear_order<5>(1) == 4);
}

TEST_CASE("stabilizer structure for n = 1") {
  const auto sp0 = enumerate_group<3>(Group::Sp0, 1, 1000);
  const auto gens = generator_matrices<3>(Group::Sp0, 1);
  const auto r0 = stabilizer_structure<3>(0, 1, sp0, gens, o_stratum_size<3>(1, 1), 1000);
  const auto r1 = stabilizer_structure<3>(1, 1, sp0, gens, o_stratum_size<3>(1, 0), 1000);
  CHECK(r0.filtered_order == 4);
  CHECK(r1.filtered_order == 6);
  for (const auto& r : {r0, r1}) {
    CHECK(r.order_matches());
    CHECK(r.orbit_stabilizer_consistent);
    CHECK(r.orbit_size == r.stratum_size);
    CHECK(r.levi_factor_in_stabilizer);
    CHECK(r.unipotent_factor_in_stabilizer);
    CHECK(r.t_k_symplectic);
    CHECK(r.t_k_moves_L_plus_to_V_k);
    CHECK(r.t_k_inverse_formula);
    CHECK(r.alternative_order == r.filtered_order);
  }
  CHECK(sp0_parabolic_intersection(sp0, 1));
}

TEST_CASE("stabilizer orders for q = 3, n = 2 against both order formulas") {
  const auto sp0 = enumerate_group<3>(Group::Sp0, 2, 100000);
  const auto gens = generator_matrices<3>(Group::Sp0, 2);
  const std::size_t frozen[] = {96, 216, 1296};
  const std::size_t stated[] = {96, 24, 216};
  for (int k = 0; k <= 2; ++k) {
    const auto r = stabilizer_structure<3>(k, 2, sp0, gens, o_stratum_size<3>(2, 2 - k), 100000);
    CHECK(r.filtered_order == frozen[k]);
    CHECK(r.predicted_order == stated[k]);
    CHECK(r.alternative_order == frozen[k]);
    CHECK(r.orbit_stabilizer_consistent);
    CHECK(r.levi_factor_in_stabilizer);
    CHECK(r.unipotent_factor_in_stabilizer);
  }
}

TEST_CASE("Cayley transform maps H_j onto O_j") {
  const auto all = enumerate_lagrangians<3>(2, 1000);
  const auto labels = labels_of(all);
  const auto entries = map_strata<3>(cayley<3>(2), all, labels);
  REQUIRE(entries.size() == 3);
  for (const auto& e : entries) {
    CHECK(e.image_equals_o);
    CHECK_FALSE(e.image_equals_h);
    CHECK(e.h_count == e.o_count);
  }
  const std::vector<StratumLabel> short_labels(labels.begin(), labels.begin() + 2);
  CHECK_THROWS_AS(map_strata<3>(cayley<3>(2), all, short_labels), ShapeError);
}
