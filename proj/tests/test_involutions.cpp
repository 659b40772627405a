#include <doctest.h>

#include <set>

#include "fsiegel/involutions.hpp"

using namespace fsiegel;

namespace {

// Independent oracle: 2x2 matrices over F with trace 0 and a^2 + bc = -1 square to -I and have
// determinant 1; count them directly.
int count_trace_zero_roots(int q) {
  int count = 0;
  for (int a = 0; a < q; ++a) {
    for (int b = 0; b < q; ++b) {
      for (int c = 0; c < q; ++c) count += ((a * a + b * c) % q + 1) % q == 0;
    }
  }
  return count;
}

template <int Q>
struct Setup {
  GroupEnumeration<Q> group;
  std::vector<Mat<Q>> gens;
  AntiInvolutionSet<Q> c;
  explicit Setup(Eigen::Index n)
      : group(enumerate_group<Q>(Group::SpF, n, 100000)), gens(generator_matrices<Q>(Group::SpF, n)),
        c(anti_involutions<Q>(group, gens)) {}
};

}  // namespace

TEST_CASE("anti-involution counts against the trace-zero oracle") {
  const Setup<3> s3(1);
  const Setup<5> s5(1);
  const Setup<7> s7(1);
  CHECK(s3.c.elements.size() == 6);
  CHECK(s5.c.elements.size() == 30);
  CHECK(s3.c.elements.size() == static_cast<std::size_t>(count_trace_zero_roots(3)));
  CHECK(s5.c.elements.size() == static_cast<std::size_t>(count_trace_zero_roots(5)));
  CHECK(s7.c.elements.size() == static_cast<std::size_t>(count_trace_zero_roots(7)));
  for (const auto* set : {&s3.c}) {
    CHECK(set->jt_symmetric_criterion);
    CHECK(set->conjugation_closed);
  }
  CHECK(s5.c.jt_symmetric_criterion);
  CHECK(s7.c.jt_symmetric_criterion);
}

TEST_CASE("the symmetric form b_T") {
  const Setup<3> s(1);
  const auto b = b_T<3>(J<3>(1));
  CHECK(equal(b, Mat<3>(-identity<3>(2))));
  for (const auto& T : s.c.elements) {
    const auto r = b_form_report<3>(T, s.gens);
    CHECK(r.symmetric);
    CHECK(r.det_is_one);
    CHECK(r.discriminant_square);
    CHECK(r.equivariant);
  }
  const Setup<5> s5(1);
  for (const auto& T : s5.c.elements) CHECK(b_form_report<5>(T, s5.gens).discriminant_square);
  CHECK_THROWS_AS(b_T<3>(identity<3>(2)), ParameterError);
  CHECK_THROWS_AS(eigenspace_model<3>(identity<3>(2)), ParameterError);
}

TEST_CASE("eigenspace models") {
  using S = Fq2<3>;
  const auto v = eigenspace_model<3>(J<3>(1));
  CHECK(label(v).h_rank == 1);
  // J (1, x) = (x, -1) = i (1, x) forces x = i.
  CHECK(v.basis()(0, 0) == S(1));
  CHECK(v.basis()(1, 0) == square_root_of_minus_one<3>());

  using S5 = Fq2<5>;
  const auto i = square_root_of_minus_one<5>();
  for (int x = 0; x < 5; ++x) {
    Mat<5> T(2, 2);
    T << -i, S5(0), S5(x), i;
    const auto e = eigenspace(T, i);
    REQUIRE(e.cols() == 1);
    CHECK(key(column_echelon_canonical(e)) == key(basis_vector<5>(2, 2)));
  }
}

TEST_CASE("eigenspace equivariance over the full anti-involution set") {
  const Setup<3> s(1);
  for (const auto& T : s.c.elements) {
    for (const auto& g : s.gens) {
      const Mat<3> conj = g * T * inverse_or_throw(g);
      CHECK(act(g, eigenspace_model<3>(T)) == eigenspace_model<3>(conj));
    }
  }
}

TEST_CASE("eigenspace properties when -1 is not a square") {
  const Setup<3> s3(1);
  for (const auto& T : s3.c.elements) {
    const auto r = eigenspace_report<3>(T, true, 0, 1);
    CHECK(r.ok());
    CHECK(r.identity_failures == 0);
  }
  const Setup<7> s7(1);
  for (const auto& T : s7.c.elements) CHECK(eigenspace_report<7>(T, false, 200, 2).ok());
}

TEST_CASE("anti-involutions against H_n") {
  const Setup<3> s3(1);
  const auto all3 = enumerate_lagrangians<3>(1, 1000);
  const auto r3 = verify_prop3<3>(s3.group, s3.gens, s3.c, all3, 1000);
  CHECK(r3.epsilon == -1);
  CHECK(r3.image_in_stratum);
  CHECK(r3.injective);
  CHECK(r3.surjective);
  CHECK(r3.equivariant);
  CHECK(r3.stratum_size == 6);

  const Setup<5> s5(1);
  const auto all5 = enumerate_lagrangians<5>(1, 1000);
  const auto r5 = verify_prop3<5>(s5.group, s5.gens, s5.c, all5, 1000);
  CHECK(r5.epsilon == 1);
  CHECK(r5.image_in_stratum);
  CHECK(r5.surjective);
  CHECK_FALSE(r5.injective);
  CHECK(r5.max_fiber == 5);
  CHECK(r5.single_orbit == std::optional<bool>(true));
  CHECK(r5.isotropy_is_sp_cap_k == std::optional<bool>(true));
  CHECK(r5.isotropy_order == std::optional<std::size_t>(4));
  CHECK(r5.count_matches_quotient == std::optional<bool>(true));
  CHECK(r5.cayley_conjugates_H_to_J == std::optional<bool>(true));
  CHECK(r5.isotropy_matches_diag_a_a_inverse == std::optional<bool>(true));
  CHECK(r5.isotropy_matches_literal_diag_a_minus_a == std::optional<bool>(false));
}

TEST_CASE("square roots of scalars and involution classes") {
  const auto g7 = enumerate_group<7>(Group::SpF, 1, 1000);
  CHECK(s_a_set(Fq2<7>(2), g7).empty());
  CHECK(s_a_set(Fq2<7>(4), g7).empty());
  CHECK(s_a_set(Fq2<7>(1), g7).size() == 2);

  const auto g3 = enumerate_group<3>(Group::SpF, 1, 1000);
  const auto gens3 = generator_matrices<3>(Group::SpF, 1);
  const auto classes = classify_involutions<3>(g3, gens3, 1000);
  REQUIRE(classes.size() == 2);
  CHECK(classes[0].k == 0);
  CHECK(classes[1].k == 2);
  for (const auto& c : classes) {
    CHECK(c.size == 1);
    CHECK(c.orbit_count == 1);
    CHECK(c.nondegenerate_eigenspaces);
    CHECK(c.reconstructs_as_T_W);
  }
}

TEST_CASE("involution classes of Sp(4,3) have even k") {
  const auto g = enumerate_group<3>(Group::SpF, 2, 100000);
  const auto gens = generator_matrices<3>(Group::SpF, 2);
  std::set<int> ks;
  for (const auto& c : classify_involutions<3>(g, gens, 100000)) {
    ks.insert(c.k);
    CHECK(c.orbit_count == 1);
    CHECK(c.nondegenerate_eigenspaces);
    CHECK(c.reconstructs_as_T_W);
  }
  CHECK(ks == std::set<int>{0, 2, 4});
}
