// Randomized invariants. Every case draws from a seeded generator and reports the seed on failure.

#include <doctest.h>

#include <random>

#include "fsiegel/transforms.hpp"

using namespace fsiegel;

namespace {

template <int Q>
struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  int below(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }
  Fq2<Q> scalar() { return Fq2<Q>::from_index(below(Fq2<Q>::order)); }
  Fq2<Q> nonzero() { return Fq2<Q>::from_index(1 + below(Fq2<Q>::order - 1)); }

  Mat<Q> matrix(Eigen::Index r, Eigen::Index c) {
    Mat<Q> m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
      for (Eigen::Index j = 0; j < c; ++j) m(i, j) = scalar();
    }
    return m;
  }

  Vec<Q> vector(Eigen::Index dim) { return matrix(dim, 1); }

  /// Product of `length` random generators.
  Mat<Q> word(const std::vector<Mat<Q>>& gens, int length) {
    Mat<Q> g = identity<Q>(gens.front().rows());
    for (int t = 0; t < length; ++t) g = Mat<Q>(gens[static_cast<std::size_t>(below(static_cast<int>(gens.size())))] * g);
    return g;
  }

  Lagrangian<Q> lagrangian(Eigen::Index n) {
    return act(word(generator_matrices<Q>(Group::SpE, n), 40), L_plus<Q>(n));
  }
};

constexpr int kTrials = 300;

template <int Q>
void field_axioms(std::uint64_t seed) {
  INFO("seed " << seed << ", q " << Q);
  Gen<Q> g(seed);
  for (int t = 0; t < kTrials; ++t) {
    const auto a = g.scalar(), b = g.scalar(), c = g.scalar();
    CHECK((a + b) * c == a * c + b * c);
    CHECK((a * b) * c == a * (b * c));
    CHECK((a * b).conj() == a.conj() * b.conj());
    CHECK((a * b).norm() == a.norm() * b.norm());
    CHECK(a.norm().is_rational());
    CHECK(a.pow(Q) == a.conj());
    const auto u = g.nonzero();
    CHECK(u * u.inverse() == Fq2<Q>(1));
  }
}

template <int Q>
void matrix_invariants(std::uint64_t seed) {
  INFO("seed " << seed << ", q " << Q);
  Gen<Q> g(seed);
  for (int t = 0; t < kTrials; ++t) {
    const auto n = 1 + g.below(4);
    const auto a = g.matrix(n, n), b = g.matrix(n, n);
    CHECK(det(Mat<Q>(a * b)) == det(a) * det(b));
    CHECK(det(Mat<Q>(a.transpose())) == det(a));
    CHECK(det(star(a)) == det(a).conj());
    CHECK(rank(Mat<Q>(a * b)) <= std::min(rank(a), rank(b)));
    const auto m = g.matrix(n, 1 + g.below(4));
    CHECK(rank(m) + kernel(m).cols() == m.cols());
    CHECK(key(column_echelon_canonical(m)) == key(column_echelon_canonical(Mat<Q>(m * identity<Q>(m.cols())))));
    if (const auto inv = inverse(a)) {
      // Column spans are invariant under right multiplication by invertible matrices.
      const auto c = g.matrix(n, n);
      CHECK(key(column_echelon_canonical(c)) == key(column_echelon_canonical(Mat<Q>(c * *inv))));
    }
  }
}

template <int Q>
void group_words_stay_in_their_groups(std::uint64_t seed, Eigen::Index n) {
  INFO("seed " << seed << ", q " << Q);
  Gen<Q> g(seed);
  for (auto tag : {Group::SpE, Group::SpF, Group::Sp0}) {
    const auto gens = generator_matrices<Q>(tag, n);
    for (int t = 0; t < 30; ++t) {
      const auto x = g.word(gens, 1 + g.below(30));
      CHECK(is_member(x, tag));
      const auto v = g.vector(2 * n), w = g.vector(2 * n);
      CHECK(omega(Vec<Q>(x * v), Vec<Q>(x * w)) == omega(v, w));
      if (tag == Group::SpF) CHECK(hE(Vec<Q>(x * v), Vec<Q>(x * w)) == hE(v, w));
      if (tag == Group::Sp0) CHECK(h0(Vec<Q>(x * v), Vec<Q>(x * w)) == h0(v, w));
    }
  }
}

template <int Q>
void action_and_labels(std::uint64_t seed, Eigen::Index n) {
  INFO("seed " << seed << ", q " << Q);
  Gen<Q> g(seed);
  const auto spe = generator_matrices<Q>(Group::SpE, n);
  const auto spf = generator_matrices<Q>(Group::SpF, n);
  const auto sp0 = generator_matrices<Q>(Group::Sp0, n);
  for (int t = 0; t < 30; ++t) {
    const auto w = g.lagrangian(n);
    const auto a = g.word(spe, 10), b = g.word(spe, 10);
    CHECK(act(Mat<Q>(a * b), w) == act(a, act(b, w)));
    const auto l = label(w);
    CHECK(label(act(g.word(spf, 20), w)).h_rank == l.h_rank);
    CHECK(label(act(g.word(sp0, 20), w)).o_type == l.o_type);
    const auto d = conjugate_dims(w);
    CHECK(d.sum_dim + d.intersection_dim == 2 * n);
    CHECK(d.intersection_dim == n - l.h_rank);
    CHECK(intersection_with_conjugate(w).cols() == d.intersection_dim);
    CHECK(in_siegel_image(w) == siegel_preimage(w).has_value());
    if (const auto z = siegel_preimage(w)) CHECK(siegel<Q>(*z) == w);
  }
}

template <int Q>
void cayley_conjugation(std::uint64_t seed, Eigen::Index n) {
  INFO("seed " << seed << ", q " << Q);
  Gen<Q> g(seed);
  const auto cd = cayley<Q>(n);
  const Mat<Q>& M = cd.conjugator();
  const Mat<Q> Minv = inverse_or_throw(M);
  const auto spf = generator_matrices<Q>(Group::SpF, n);
  for (int t = 0; t < 30; ++t) {
    const auto x = g.word(spf, 1 + g.below(20));
    CHECK(is_member(Mat<Q>(M * x * Minv), Group::Sp0));
    const auto v = g.vector(2 * n), w = g.vector(2 * n);
    CHECK(h0(Vec<Q>(cd.M * v), Vec<Q>(cd.M * w)) == cd.raw_conformal * hE(v, w));
  }
  for (int t = 0; t < 10; ++t) {
    const auto w = g.lagrangian(n);
    CHECK(label(act(cd.M, w)).o_type == label(w).h_rank);
  }
}

}  // namespace

TEST_CASE("field axioms") {
  field_axioms<3>(101);
  field_axioms<5>(102);
  field_axioms<7>(103);
  field_axioms<11>(104);
  field_axioms<13>(105);
}

TEST_CASE("matrix invariants") {
  matrix_invariants<3>(201);
  matrix_invariants<7>(202);
  matrix_invariants<13>(203);
}

TEST_CASE("random group words are members and preserve their forms") {
  group_words_stay_in_their_groups<3>(301, 1);
  group_words_stay_in_their_groups<5>(302, 2);
  group_words_stay_in_their_groups<7>(303, 2);
  group_words_stay_in_their_groups<11>(304, 3);
}

TEST_CASE("action law, stratum invariance and intersection dimensions") {
  action_and_labels<3>(401, 2);
  action_and_labels<5>(402, 2);
  action_and_labels<7>(403, 3);
  action_and_labels<13>(404, 2);
}

TEST_CASE("Cayley conjugation and conformality") {
  cayley_conjugation<3>(501, 2);
  cayley_conjugation<5>(502, 2);
  cayley_conjugation<7>(503, 3);
  cayley_conjugation<13>(504, 1);
}
