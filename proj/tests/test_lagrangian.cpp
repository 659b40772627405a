#include <doctest.h>

#include <map>
#include <set>

#include "fsiegel/lagrangian.hpp"

using namespace fsiegel;

namespace {

template <int Q>
std::set<std::string> keys_of(const std::vector<Lagrangian<Q>>& ws) {
  std::set<std::string> out;
  for (const auto& w : ws) out.insert(w.key());
  return out;
}

template <int Q>
std::map<std::pair<int, int>, int> joint_counts(const std::vector<Lagrangian<Q>>& ws) {
  std::map<std::pair<int, int>, int> out;
  for (const auto& w : ws) {
    const auto l = label(w);
    ++out[{l.h_rank, l.o_type}];
  }
  return out;
}

}  // namespace

TEST_CASE("Lagrangian counts") {
  CHECK(lagrangian_count(3, 1) == 10);
  CHECK(lagrangian_count(5, 1) == 26);
  CHECK(lagrangian_count(3, 2) == 820);
  CHECK(lagrangian_count(5, 2) == 16276);
}

TEST_CASE("orbit enumeration agrees with brute-force subspace search") {
  CHECK(keys_of(enumerate_lagrangians<3>(1, 1000)) == keys_of(enumerate_lagrangians_bruteforce<3>(1)));
  CHECK(keys_of(enumerate_lagrangians<5>(1, 1000)) == keys_of(enumerate_lagrangians_bruteforce<5>(1)));
  const auto bfs = enumerate_lagrangians<3>(2, 1000);
  CHECK(bfs.size() == 820);
  CHECK(keys_of(bfs) == keys_of(enumerate_lagrangians_bruteforce<3>(2)));
  CHECK_THROWS_AS(enumerate_lagrangians<3>(2, 100), ResourceError);
}

TEST_CASE("construction errors") {
  Mat<3> b = zeros<3>(2, 1);
  CHECK_THROWS_AS(Lagrangian<3>::from_basis(b), NotLagrangianError);
  Mat<3> plane = zeros<3>(4, 2);
  plane(0, 0) = 1;
  plane(2, 1) = 1;  // span(e1, e3) with omega(e1, e3) = 1
  CHECK_THROWS_AS(Lagrangian<3>::from_basis(plane), NotLagrangianError);
  CHECK_THROWS_AS(Lagrangian<3>::from_basis(zeros<3>(3, 1)), ShapeError);
  Mat<3> z = zeros<3>(2, 2);
  z(0, 1) = 1;
  CHECK_THROWS_AS(siegel<3>(z), ParameterError);
}

TEST_CASE("L_plus, L_minus and the Siegel map") {
  const auto lp = L_plus<3>(2), lm = L_minus<3>(2);
  CHECK_FALSE(in_siegel_image(lp));
  CHECK(in_siegel_image(lm));
  CHECK(label(lp) == StratumLabel{0, 2});
  CHECK(label(lm) == StratumLabel{0, 2});
  CHECK(lm == siegel<3>(zeros<3>(2, 2)));
  Mat<5> z(2, 2);
  z << Fq2<5>(1, 2), Fq2<5>(3), Fq2<5>(3), Fq2<5>(0, 4);
  const auto w = siegel<5>(z);
  REQUIRE(siegel_preimage(w));
  CHECK(equal(*siegel_preimage(w), z));
  CHECK_FALSE(siegel_preimage(lp).has_value());
}

TEST_CASE("image count and joint stratum table for q = 3") {
  const auto all1 = enumerate_lagrangians<3>(1, 1000);
  int image1 = 0;
  for (const auto& w : all1) image1 += in_siegel_image(w);
  CHECK(image1 == 9);
  std::map<int, int> h, o;
  for (const auto& w : all1) {
    ++h[label(w).h_rank];
    ++o[label(w).o_type];
  }
  CHECK(h == std::map<int, int>{{0, 4}, {1, 6}});
  CHECK(o == std::map<int, int>{{0, 4}, {1, 6}});

  const auto all2 = enumerate_lagrangians<3>(2, 1000);
  int image2 = 0;
  for (const auto& w : all2) image2 += in_siegel_image(w);
  CHECK(image2 == 729);
  const std::map<std::pair<int, int>, int> frozen{
      {{0, 0}, 6},  {{0, 1}, 16}, {{0, 2}, 18},  {{1, 0}, 16}, {{1, 1}, 80},
      {{1, 2}, 144}, {{2, 0}, 18}, {{2, 1}, 144}, {{2, 2}, 378}};
  CHECK(joint_counts(all2) == frozen);
}

TEST_CASE("a full-rank hE Lagrangian outside the Siegel image") {
  using S = Fq2<3>;
  Mat<3> b = zeros<3>(4, 2);
  b(0, 0) = 1;
  b(1, 0) = S::s();
  b(2, 1) = -S::s();
  b(3, 1) = 1;
  const auto w = Lagrangian<3>::from_basis(b);
  CHECK(label(w).h_rank == 2);
  CHECK_FALSE(in_siegel_image(w));

  int outside = 0, h2 = 0;
  for (const auto& x : enumerate_lagrangians<3>(2, 1000)) {
    if (label(x).h_rank != 2) continue;
    ++h2;
    outside += !in_siegel_image(x);
  }
  CHECK(h2 == 540);
  CHECK(outside == 54);
}

TEST_CASE("radical of hE is the intersection with the conjugate") {
  for (const auto& w : enumerate_lagrangians<3>(2, 1000)) {
    const auto d = conjugate_dims(w);
    const auto l = label(w);
    CHECK(d.intersection_dim == 2 - l.h_rank);
    CHECK(d.sum_dim == 2 + l.h_rank);
    CHECK(key(hE_radical(w)) == key(intersection_with_conjugate(w)));
    CHECK(conj_lagrangian(conj_lagrangian(w)) == w);
  }
}

TEST_CASE("act respects the group law and rejects bad shapes") {
  const auto gens = generator_matrices<3>(Group::SpE, 1);
  const auto lp = L_plus<3>(1);
  CHECK(act(Mat<3>(gens[0] * gens[1]), lp) == act(gens[0], act(gens[1], lp)));
  CHECK(act(J<3>(1), lp) == L_minus<3>(1));
  CHECK_THROWS_AS(act(identity<3>(4), lp), ShapeError);
}
