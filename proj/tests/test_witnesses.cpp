#include <doctest.h>

#include "fsiegel/witnesses.hpp"

using namespace fsiegel;

namespace {

template <int Q>
void check_all_verified(Eigen::Index n) {
  for (const auto& w : witnesses<Q>(n)) {
    INFO(w.id << " param " << w.param << " q " << Q << " n " << n);
    CHECK(w.status == WitnessStatus::kVerified);
    REQUIRE(w.space);
    CHECK(label(*w.space).o_type == w.expected_o_type);
    CHECK(in_siegel_image(*w.space) == w.expected_in_image);
    if (w.id == "Z_k") CHECK(w.transporter_ok);
  }
}

}  // namespace

TEST_CASE("every applicable witness verifies") {
  check_all_verified<3>(1);
  check_all_verified<3>(2);
  check_all_verified<3>(3);
  check_all_verified<5>(2);
  check_all_verified<7>(3);
  check_all_verified<13>(4);
}

TEST_CASE("witness inventory per dimension") {
  CHECK(witnesses<3>(1).size() == 2 + 1 + 1);
  CHECK(witnesses<3>(2).size() == 3 + 2 + 1 + 2);
  CHECK(witnesses<3>(3).size() == 4 + 3 + 1 + 3);
}

TEST_CASE("odd type-0 witness for q = 3, n = 3") {
  using S = Fq2<3>;
  const auto w = odd_o0_witness<3>(3);
  CHECK(w.status == WitnessStatus::kVerified);
  CHECK(w.parameters.at("c") == to_text(S(1)));
  CHECK(w.parameters.at("d") == to_text(S(1)));
  CHECK(w.observed.o_type == 0);
  CHECK_FALSE(w.observed_in_image);
  CHECK_THROWS_AS(odd_o0_witness<3>(2), ParameterError);
  CHECK_THROWS_AS(odd_o0_witness<3>(1), ParameterError);
}

TEST_CASE("odd type-0 construction outside its hypothesis") {
  const auto w = odd_o0_witness<5>(3);
  CHECK(w.status == WitnessStatus::kOutsideHypothesis);
  CHECK_FALSE(w.note.empty());
}

TEST_CASE("witness parameter errors") {
  CHECK_THROWS_AS(diag_siegel_witness<3>(2, 3), ParameterError);
  CHECK_THROWS_AS(w_r_witness<3>(2, 0), ParameterError);
  CHECK_THROWS_AS(z_k_witness<3>(2, 0), ParameterError);
  CHECK_THROWS_AS(even_o0_witness<3>(3), ParameterError);
}

TEST_CASE("status names") {
  CHECK(to_string(WitnessStatus::kVerified) == "verified");
  CHECK(to_string(WitnessStatus::kOutsideHypothesis) == "outside-hypothesis");
  CHECK(to_string(WitnessStatus::kUnavailable) == "unavailable");
  CHECK(to_string(WitnessStatus::kFailed) == "failed");
}
