#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "robustpay/checks.hpp"
#include "robustpay/model.hpp"

using namespace robustpay;

TEST_CASE("action set rejects malformed actions") {
  CHECK_THROWS_AS(make_known({}), ModelError);
  CHECK_THROWS_AS(make_known({{-0.1, 0.5}}), ModelError);
  CHECK_THROWS_AS(make_known({{0.1, 1.5}}), ModelError);
  CHECK_THROWS_AS(make_known({{0.1, -0.5}}), ModelError);
  CHECK_THROWS_AS(make_known({{std::numeric_limits<double>::quiet_NaN(), 0.5}}), ModelError);
  CHECK_THROWS_AS(ActionSet({{0.1, 0.5}}, 2), ModelError);
}

TEST_CASE("productivity order: prob first, then cost, then index") {
  // 0: (0.2, 0.5)  1: (0.1, 0.5)  2: (0.3, 0.9)  3: duplicate of 1
  const ActionSet A({{0.2, 0.5}, {0.1, 0.5}, {0.3, 0.9}, {0.1, 0.5}}, 1);
  CHECK(A.max_index() == 2);
  CHECK(A.min_index() == 0);
  CHECK(A.weakly_above(1, 0));
  CHECK(A.weakly_above(1, 3));
  CHECK_FALSE(A.weakly_above(3, 1));
  for (std::size_t k = 0; k < A.size(); ++k) CHECK(A.order()[A.rank()[k]] == k);
}

TEST_CASE("known-action requirements check the known prefix only") {
  CHECK_NOTHROW(make_known({{0.25, 1.0}}).require_assumption1());
  CHECK_THROWS_AS(make_known({{0.0, 1.0}}).require_assumption1(), ModelError);
  CHECK_THROWS_AS(make_known({{0.6, 0.5}}).require_assumption1(), ModelError);
  CHECK_NOTHROW(ActionSet({{0.25, 1.0}, {0.0, 0.3}}, 1).require_assumption1());
  CHECK_THROWS_AS(ActionSet({{0.25, 1.0}}, 0).require_assumption1(), ModelError);
}

TEST_CASE("known and appended views keep the known prefix") {
  const ActionSet A({{0.25, 1.0}, {0.0, 0.3}}, 1);
  CHECK(A.known().size() == 1);
  const ActionSet B = A.known().with_appended({{0.0, 0.2}, {0.1, 0.4}});
  CHECK(B.size() == 3);
  CHECK(B.known_count() == 1);
  CHECK(B[2] == ActionSpec{0.1, 0.4});
}

TEST_CASE("contract wages and limited liability") {
  const Contract w{0.6, 0.3, 0.2, 0.1};
  CHECK(w.wage(1, 1) == 0.6);
  CHECK(w.wage(1, 0) == 0.3);
  CHECK(w.wage(0, 1) == 0.2);
  CHECK(w.wage(0, 0) == 0.1);
  CHECK(w.bonus() == doctest::Approx(0.3));
  CHECK_THROWS_AS((Contract{0.5, -0.1, 0, 0}).validate(), ModelError);
  CHECK_THROWS_AS((Contract{INFINITY, 0, 0, 0}).validate(), ModelError);
}

TEST_CASE("classification of the contract families") {
  CHECK(classify({0.5, 0.5, 0.0, 0.0}).tag == ContractTag::IPE);
  CHECK(classify({0.0, 0.5, 0.0, 0.0}).tag == ContractTag::RPE);
  CHECK(classify({0.5, 0.0, 0.0, 0.0}).tag == ContractTag::JPE);
  CHECK(classify({0.5, 0.0, 0.0, 0.3}).tag == ContractTag::OTHER);
  // Linear sharing is an affine JPE.
  const ContractClass lin = classify({0.6, 0.3, 0.3, 0.0});
  CHECK(lin.tag == ContractTag::JPE);
  REQUIRE(lin.affine);
  CHECK(lin.coeffs->alpha0 == 0.0);
  CHECK(lin.coeffs->alpha_i == doctest::Approx(0.3));
  CHECK(lin.coeffs->alpha_j == doctest::Approx(0.3));
  CHECK_FALSE(classify({0.5, 0.0, 0.0, 0.0}).affine);
  // Tolerant variant absorbs tiny gaps.
  CHECK(classify({0.5 + 1e-12, 0.5, 0.0, 0.0}).tag == ContractTag::JPE);
  CHECK(classify({0.5 + 1e-12, 0.5, 0.0, 0.0}, 1e-9).tag == ContractTag::IPE);
}

TEST_CASE("classification agrees with the wage differences on random contracts") {
  checks::Rng rng(11);
  for (int k = 0; k < 2000; ++k) {
    Contract w{rng.uniform(0, 1), rng.uniform(0, 1), rng.uniform(0, 1), rng.uniform(0, 1)};
    if (rng.integer(0, 3) == 0) w.w11 = w.w10;
    if (rng.integer(0, 3) == 0) w.w01 = w.w00;
    const double top = w.w11 - w.w10, bottom = w.w01 - w.w00;
    const ContractTag t = classify(w).tag;
    if (top == 0 && bottom == 0) CHECK(t == ContractTag::IPE);
    else if (top <= 0 && bottom <= 0) CHECK(t == ContractTag::RPE);
    else if (top >= 0 && bottom >= 0) CHECK(t == ContractTag::JPE);
    else CHECK(t == ContractTag::OTHER);
  }
}

TEST_CASE("failure-wage reduction leaves at least one zero in each failure pair") {
  checks::Rng rng(12);
  for (int k = 0; k < 500; ++k) {
    const Contract w{rng.uniform(0, 1), rng.uniform(0, 1), rng.uniform(0, 1), rng.uniform(0, 1)};
    const Contract r = reduce_failure_wages(w);
    CHECK_NOTHROW(r.validate());
    CHECK((r.w11 == 0.0 || r.w01 == 0.0));
    CHECK((r.w10 == 0.0 || r.w00 == 0.0));
    // Differences between success and failure wages are preserved.
    CHECK(r.w11 - r.w01 == doctest::Approx(w.w11 - w.w01));
    CHECK(r.w10 - r.w00 == doctest::Approx(w.w10 - w.w00));
  }
}

TEST_CASE("calibrated JPE pays w* in expectation at a0") {
  const ActionSpec a0{0.25, 1.0};
  const Contract w = calibrate_jpe(0.5, a0, 0.1);
  CHECK(w.w10 == doctest::Approx(0.4));
  CHECK(w.w11 == doctest::Approx(0.5));
  const ActionSpec a{0.2, 0.8};
  for (double eps : {0.3, 0.1, 1e-4}) {
    const Contract v = calibrate_jpe(0.6, a, eps);
    CHECK(a.prob * v.w11 + (1 - a.prob) * v.w10 == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(v.w10 == doctest::Approx(0.6 - eps));
    CHECK(classify(v).tag == ContractTag::JPE);
  }
  CHECK_THROWS_AS(calibrate_jpe(0.5, a0, 0.0), ModelError);
  CHECK_THROWS_AS(calibrate_jpe(0.5, a0, 0.6), ModelError);
  CHECK_THROWS_AS(calibrate_jpe(1.5, a0, 0.1), ModelError);
  CHECK_THROWS_AS(calibrate_jpe(0.5, {0.0, 0.0}, 0.1), ModelError);
}
