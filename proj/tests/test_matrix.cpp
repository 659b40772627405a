#include <doctest.h>

#include <random>
#include <set>
#include <vector>

#include "fsiegel/matrix.hpp"

using namespace fsiegel;

namespace {

template <int Q>
Mat<Q> random_matrix(std::mt19937& rng, Eigen::Index r, Eigen::Index c) {
  std::uniform_int_distribution<int> pick(0, Fq2<Q>::order - 1);
  Mat<Q> m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = Fq2<Q>::from_index(pick(rng));
  }
  return m;
}

// Independent oracle: Leibniz expansion over all permutations.
template <int Q>
Fq2<Q> leibniz(const Mat<Q>& m) {
  std::vector<int> p(static_cast<std::size_t>(m.rows()));
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = static_cast<int>(i);
  Fq2<Q> total(0);
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      for (std::size_t j = i + 1; j < p.size(); ++j) inversions += p[i] > p[j];
    }
    Fq2<Q> term(inversions % 2 ? -1 : 1);
    for (std::size_t i = 0; i < p.size(); ++i) term *= m(static_cast<Eigen::Index>(i), p[i]);
    total += term;
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

// Independent oracle: rank from the number of solutions of A x = 0, |ker| = |E|^(cols - rank).
template <int Q>
int rank_by_counting(const Mat<Q>& m) {
  const int order = Fq2<Q>::order;
  const auto cols = m.cols();
  long total = 1;
  for (Eigen::Index j = 0; j < cols; ++j) total *= order;
  long zeros_found = 0;
  Vec<Q> x(cols);
  for (long code = 0; code < total; ++code) {
    long c = code;
    for (Eigen::Index j = 0; j < cols; ++j) {
      x(j) = Fq2<Q>::from_index(static_cast<int>(c % order));
      c /= order;
    }
    zeros_found += is_zero(Vec<Q>(m * x));
  }
  int nullity = 0;
  for (long z = zeros_found; z > 1; z /= order) ++nullity;
  return static_cast<int>(cols) - nullity;
}

}  // namespace

TEST_CASE("star and transpose") {
  using S = Fq2<3>;
  CHECK(equal(star(identity<3>(3)), identity<3>(3)));
  Mat<3> m(1, 1);
  m(0, 0) = S::s();
  CHECK(star(m)(0, 0) == -S::s());
  std::mt19937 rng(1);
  const auto a = random_matrix<3>(rng, 2, 3);
  CHECK(equal(Mat<3>(a.transpose().transpose()), a));
  CHECK(equal(Mat<3>(star(a)), Mat<3>(conjugate(a).transpose())));
  CHECK_THROWS_AS(mul(a, a), ShapeError);
  CHECK_THROWS_AS(add(a, Mat<3>(a.transpose())), ShapeError);
}

TEST_CASE("determinant examples and errors") {
  using S = Fq2<3>;
  CHECK(det(identity<3>(4)) == S(1));
  Mat<3> m(2, 2);
  m << S::s(), S(1), S(1), S::s();
  CHECK(det(m) == S(1));
  CHECK_THROWS_AS(det(zeros<3>(2, 3)), ShapeError);
  CHECK_THROWS_AS(inverse(zeros<3>(2, 3)), ShapeError);
}

TEST_CASE("determinant agrees with the Leibniz oracle") {
  std::mt19937 rng(7);
  for (int t = 0; t < 200; ++t) {
    const auto n = 1 + t % 4;
    const auto a = random_matrix<5>(rng, n, n);
    CHECK(det(a) == leibniz<5>(a));
  }
}

TEST_CASE("rank agrees with solution counting") {
  std::mt19937 rng(11);
  for (int t = 0; t < 60; ++t) {
    const auto r = 1 + t % 3, c = 1 + (t / 3) % 3;
    auto a = random_matrix<3>(rng, r, c);
    if (t % 4 == 0) a.row(0).setZero();
    CHECK(rank(a) == rank_by_counting<3>(a));
    CHECK(rank(a) + kernel(a).cols() == c);
    CHECK(is_zero(Mat<3>(a * kernel(a))));
  }
  CHECK(rank(zeros<3>(2, 1)) == 0);
}

TEST_CASE("inverse, det and rank agree on random square matrices") {
  std::mt19937 rng(3);
  for (int t = 0; t < 2000; ++t) {
    const auto n = 1 + t % 3;
    auto a = random_matrix<3>(rng, n, n);
    if (t % 5 == 0 && n > 1) a.row(n - 1) = a.row(0);
    const auto inv = inverse(a);
    CHECK(inv.has_value() == !det(a).is_zero());
    CHECK(inv.has_value() == (rank(a) == n));
    if (inv) CHECK(equal(Mat<3>(a * *inv), identity<3>(n)));
    CHECK(rank(a) == rank(a.transpose()));
    CHECK(rank(a) == rank(star(a)));
  }
}

TEST_CASE("solve") {
  std::mt19937 rng(5);
  for (int t = 0; t < 200; ++t) {
    const auto a = random_matrix<7>(rng, 3, 2);
    const auto x0 = random_matrix<7>(rng, 2, 1);
    const Vec<7> b = a * x0;
    const auto x = solve(a, b);
    REQUIRE(x);
    CHECK(equal(Vec<7>(a * *x), b));
  }
  Mat<3> a = zeros<3>(2, 1);
  a(0, 0) = 1;
  Vec<3> b(2);
  b << Fq2<3>(0), Fq2<3>(1);
  CHECK_FALSE(solve(a, b).has_value());
  CHECK_THROWS_AS(solve(a, Vec<3>(Vec<3>::Zero(3))), ShapeError);
}

TEST_CASE("column echelon canonical form") {
  using S = Fq2<3>;
  Mat<3> v(2, 1);
  v << S(2), S(0);
  const auto c1 = column_echelon_canonical(v);
  CHECK(c1(0, 0) == S(1));
  CHECK(c1(1, 0) == S(0));
  v << S::s(), S(1);
  const auto c2 = column_echelon_canonical(v);
  CHECK(c2(0, 0) == S(1));
  CHECK(c2(1, 0) == S(0, 2));
  CHECK(equal(column_echelon_canonical(c2), c2));
  CHECK(column_echelon_canonical(zeros<3>(3, 2)).cols() == 0);
}

TEST_CASE("canonical form identifies column spans of lines in E^2") {
  // Every nonzero vector of E^2 over GF(9); spans are equal iff the vectors are proportional.
  using S = Fq2<3>;
  std::vector<Vec<3>> vs;
  for (int a = 0; a < S::order; ++a) {
    for (int b = 0; b < S::order; ++b) {
      if (a == 0 && b == 0) continue;
      Vec<3> v(2);
      v << S::from_index(a), S::from_index(b);
      vs.push_back(v);
    }
  }
  std::set<std::string> keys;
  for (std::size_t i = 0; i < vs.size(); i += 3) {
    for (std::size_t j = 0; j < vs.size(); j += 5) {
      const bool proportional = (vs[i](0) * vs[j](1) - vs[i](1) * vs[j](0)).is_zero();
      CHECK((key(column_echelon_canonical(vs[i])) == key(column_echelon_canonical(vs[j]))) == proportional);
    }
  }
  for (const auto& v : vs) keys.insert(key(column_echelon_canonical(v)));
  CHECK(keys.size() == static_cast<std::size_t>(S::order + 1));
}

TEST_CASE("text format round trip and errors") {
  std::mt19937 rng(9);
  const auto a = random_matrix<5>(rng, 3, 2);
  CHECK(equal(parse_matrix<5>(to_text(a)), a));
  CHECK(to_text(identity<3>(2)) == "1,0;0,1");
  CHECK_THROWS_AS(parse_matrix<3>("1,0;1"), ParameterError);
  CHECK_THROWS_AS(parse_matrix<3>("1,q"), ParameterError);
}

TEST_CASE("block helpers") {
  const auto I = identity<3>(2), Z = zeros<3>(2, 2);
  const auto b = blocks<3>(I, Z, Z, I);
  CHECK(equal(b, identity<3>(4)));
  CHECK_THROWS_AS(blocks<3>(I, Z, zeros<3>(1, 2), I), ShapeError);
  CHECK(hcat(I, Z).cols() == 4);
  CHECK_THROWS_AS(hcat(I, zeros<3>(3, 1)), ShapeError);
  CHECK(equal(scalar_matrix<3>(2, Fq2<3>(1)), I));
}
