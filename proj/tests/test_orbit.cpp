#include <doctest.h>

#include "fsiegel/orbit.hpp"

using namespace fsiegel;

namespace {

template <int Q>
int h_label(const Lagrangian<Q>& w) {
  return label(w).h_rank;
}

template <int Q>
int o_label(const Lagrangian<Q>& w) {
  return label(w).o_type;
}

}  // namespace

TEST_CASE("J swaps L_plus and L_minus") {
  const auto Jn = J<5>(2);
  CHECK(act(Jn, L_plus<5>(2)) == L_minus<5>(2));
  CHECK(act(Jn, L_minus<5>(2)) == L_plus<5>(2));
}

TEST_CASE("orbit partitions for q = 3, n = 1") {
  const auto all = enumerate_lagrangians<3>(1, 1000);
  const auto spf = generator_matrices<3>(Group::SpF, 1);
  const auto sp0 = generator_matrices<3>(Group::Sp0, 1);
  const auto by_h = partition<3>(all, spf, h_label<3>, 1000);
  CHECK(by_h.ok());
  CHECK(matches_label_partition(by_h));
  CHECK(by_h.signature() == std::vector<std::pair<int, std::size_t>>{{0, 4}, {1, 6}});
  const auto by_o = partition<3>(all, sp0, o_label<3>, 1000);
  CHECK(matches_label_partition(by_o));
  CHECK(by_o.signature() == std::vector<std::pair<int, std::size_t>>{{0, 4}, {1, 6}});
}

TEST_CASE("orbit partitions match the strata for q = 3, n = 2") {
  const auto all = enumerate_lagrangians<3>(2, 1000);
  const auto by_h = partition<3>(all, generator_matrices<3>(Group::SpF, 2), h_label<3>, 1000);
  CHECK(matches_label_partition(by_h));
  CHECK(by_h.signature() == std::vector<std::pair<int, std::size_t>>{{0, 40}, {1, 240}, {2, 540}});
  const auto by_o = partition<3>(all, generator_matrices<3>(Group::Sp0, 2), o_label<3>, 1000);
  CHECK(matches_label_partition(by_o));
  CHECK(by_o.signature() == std::vector<std::pair<int, std::size_t>>{{0, 40}, {1, 240}, {2, 540}});
}

TEST_CASE("partition flags orbits leaving the input and mixed labels") {
  const auto all = enumerate_lagrangians<3>(1, 1000);
  const std::vector<Lagrangian<3>> partial(all.begin(), all.begin() + 3);
  const auto gens = generator_matrices<3>(Group::SpF, 1);
  const auto rep = partition<3>(partial, gens, h_label<3>, 1000);
  CHECK_FALSE(rep.ok());
  const auto mixed = partition<3>(all, generator_matrices<3>(Group::SpE, 1), h_label<3>, 1000);
  CHECK_FALSE(mixed.ok());
  CHECK_FALSE(matches_label_partition(mixed));
}

TEST_CASE("transporter words reproduce orbit points") {
  const auto gens = generator_matrices<5>(Group::SpF, 1);
  const auto rec = orbit<5>(L_plus<5>(1), gens, 1000);
  for (std::size_t i = 0; i < rec.size(); ++i) {
    Mat<5> g = identity<5>(2);
    for (int w : rec.word(i)) g = Mat<5>(gens[static_cast<std::size_t>(w)] * g);
    CHECK(act(g, rec.representative()) == rec.points[i]);
  }
  CHECK_THROWS_AS(orbit<5>(L_plus<5>(1), gens, 3), ResourceError);
}

TEST_CASE("stabilizer orders by filtering and by orbit-stabilizer") {
  const auto sp0 = enumerate_group<3>(Group::Sp0, 1, 1000);
  const auto gens = generator_matrices<3>(Group::Sp0, 1);
  const auto all = enumerate_lagrangians<3>(1, 1000);
  for (const auto& w : all) {
    const auto orb = orbit<3>(w, gens, 1000);
    const auto stab = stabilizer_elements(w, sp0);
    CHECK(stab.size() == stabilizer_order(24, orb.size()));
    CHECK(stab.size() == (orb.size() == 6 ? 4u : 6u));
  }
  CHECK_THROWS_AS(stabilizer_order(24, 5), VerificationFailure);
}
