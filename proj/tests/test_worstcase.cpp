#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "robustpay/checks.hpp"
#include "robustpay/game.hpp"
#include "robustpay/worstcase.hpp"

using namespace robustpay;

namespace {

const ActionSet kRunning = make_known({{0.25, 1.0}});

}  // namespace

TEST_CASE("closed form on the running example") {
  // Frozen from the RK4 oracle: w = (2/3, 0) ends at p = 1/2, w = (0.5, 0) at 0.
  const OdeSolution s = pbar_closed_form(2.0 / 3.0, 0.0, {0.25, 1.0});
  CHECK(s.p_end == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(checks::ode_oracle_p_end(2.0 / 3.0, 0.0, {0.25, 1.0}, 100000) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(pbar_closed_form(0.5, 0.0, {0.25, 1.0}).p_end == 0.0);
  CHECK(pbar_closed_form(0.5, 0.0, {0.25, 1.0}).t_zero == doctest::Approx(0.25));
}

TEST_CASE("IPE branch") {
  CHECK(pbar_closed_form(0.5, 0.5, {0.25, 1.0}).p_end == doctest::Approx(0.5));
  CHECK(pbar_closed_form(0.2, 0.2, {0.25, 1.0}).p_end == 0.0);
  CHECK(pbar_closed_form(0.0, 0.0, {0.25, 1.0}).p_end == 0.0);
  CHECK(pbar_closed_form(0.3, 0.3, {0.0, 0.7}).p_end == 0.7);
  CHECK_THROWS_AS(pbar_closed_form(0.1, 0.3, {0.25, 1.0}), ModelError);
}

TEST_CASE("closed form agrees with RK4 on random draws") {
  checks::Rng rng(31);
  for (int k = 0; k < 300; ++k) {
    const double w11 = rng.uniform(0.02, 1.0);
    const double w10 = rng.uniform(0.0, w11);
    const double p0 = rng.uniform(0.05, 1.0);
    const ActionSpec a0{rng.uniform(0.001, 0.999) * p0, p0};
    const double closed = pbar_closed_form(w11, w10, a0).p_end;
    CHECK(std::fabs(closed - checks::ode_oracle_p_end(w11, w10, a0, 20000)) <= 1e-7);
    CHECK(closed >= 0.0);
    CHECK(closed <= p0);
  }
}

TEST_CASE("w00 variant agrees with RK4 away from the singular point") {
  checks::Rng rng(32);
  int regular = 0;
  for (int k = 0; k < 300; ++k) {
    const Contract w{rng.uniform(0.1, 1.0), 0.0, 0.0, rng.uniform(0.01, 0.3)};
    const double p0 = rng.uniform(0.3, 1.0);
    const ActionSet A0 = make_known({{rng.uniform(0.01, 0.5) * p0, p0}});
    const WorstCaseResult r = jpe_value_w00(w, A0);
    if (r.singular) {
      CHECK(r.pbar == 0.0);
      continue;
    }
    ++regular;
    CHECK(std::fabs(r.pbar - checks::ode_oracle_w00(w.w11, w.w00, A0[0], 20000)) <= 1e-6);
  }
  CHECK(regular > 50);
}

TEST_CASE("w00 variant flags the singular point") {
  // p_s = w00/(w11 + w00) = 0.5 >= p0.
  const WorstCaseResult r = jpe_value_w00({0.3, 0.0, 0.0, 0.3}, make_known({{0.1, 0.5}}));
  CHECK(r.singular);
  CHECK(r.pbar == 0.0);
  CHECK_THROWS_AS(jpe_value_w00({0.5, 0.1, 0.0, 0.3}, kRunning), ModelError);
}

TEST_CASE("JPE worst-case values") {
  const WorstCaseResult opt = jpe_value({2.0 / 3.0, 0.0, 0.0, 0.0}, kRunning);
  CHECK(opt.pbar == doctest::Approx(0.5));
  CHECK(opt.per_agent == doctest::Approx(1.0 / 3.0));
  CHECK(opt.total == doctest::Approx(2.0 / 3.0));
  CHECK(opt.binding == Binding::SHIRK_EQ);
  CHECK(jpe_value({0.5, 0.0, 0.0, 0.0}, kRunning).pbar == 0.0);
  CHECK_THROWS_AS(jpe_value({0.5, 0.5, 0.0, 0.0}, kRunning), ModelError);
  CHECK_THROWS_AS(jpe_value({0.0, 0.5, 0.0, 0.0}, kRunning), ModelError);
  // Paying at least 1 after any own success leaves only the full-success branch.
  const WorstCaseResult full = zero_failure_value(1.2, 1.0, kRunning);
  CHECK(full.binding == Binding::FULL_SUCCESS);
  CHECK(full.per_agent == doctest::Approx(-0.2));
}

TEST_CASE("best known action sets the worst case") {
  const ActionSet A0 = make_known({{0.25, 1.0}, {0.05, 0.6}});
  const WorstCaseResult r = jpe_value({0.6, 0.1, 0.0, 0.0}, A0);
  const double p_a = pbar_closed_form(0.6, 0.1, A0[0]).p_end;
  const double p_b = pbar_closed_form(0.6, 0.1, A0[1]).p_end;
  CHECK(r.pbar == std::max(p_a, p_b));
  CHECK(r.a0_index == (p_b > p_a ? 1u : 0u));
}

TEST_CASE("optimal IPE matches the square-root formula") {
  const IpeOptimum r = ipe_optimal(kRunning);
  CHECK(r.w_star == doctest::Approx(0.5));
  CHECK(r.per_agent == doctest::Approx(0.25));
  checks::Rng rng(33);
  for (int k = 0; k < 200; ++k) {
    std::vector<ActionSpec> acts;
    double best = 0.0;
    for (int i = rng.integer(1, 3); i > 0; --i) {
      const double p = rng.uniform(0.05, 1.0), c = rng.uniform(0.01, 0.99) * p;
      acts.push_back({c, p});
      best = std::max(best, std::pow(std::sqrt(p) - std::sqrt(c), 2));
    }
    CHECK(ipe_optimal(make_known(acts)).per_agent == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("RPE never beats the optimal IPE") {
  checks::Rng rng(34);
  for (int k = 0; k < 200; ++k) {
    const double w10 = rng.uniform(0.01, 1.0);
    const Contract w{rng.uniform(0.0, w10), w10, 0.0, 0.0};
    const double p = rng.uniform(0.05, 1.0);
    const ActionSet A0 = make_known({{rng.uniform(0.01, 0.99) * p, p}});
    const WorstCaseResult r = rpe_value(w, A0);
    CHECK(r.per_agent <= ipe_optimal(A0).per_agent + 1e-9);
    // The fixed point really is one.
    const double d = r.pbar * w.w11 + (1 - r.pbar) * w.w10;
    const double t = std::max(0.0, A0[0].prob - A0[0].cost / d);
    CHECK(std::fabs(t - r.pbar) <= 1e-9);
  }
}

TEST_CASE("two-step undercut chain") {
  const EulerChain ch = euler_adversary(Contract{0.5, 0.0, 0.0, 0.0}, ActionSpec{0.25, 1.0}, 2, {1e-9});
  REQUIRE(ch.actions.size() == 3);
  CHECK(ch.actions[0].prob == 1.0);
  CHECK(ch.actions[1].prob == doctest::Approx(0.75).epsilon(1e-8));
  CHECK(ch.actions[2].prob == doctest::Approx(5.0 / 12.0).epsilon(1e-8));
  CHECK(ch.actions[1].cost == doctest::Approx(0.125));
  CHECK(ch.actions[2].cost == 0.0);
  CHECK(ch.verified);
  CHECK(ch.exact_path);
}

TEST_CASE("Euler chains converge to the closed form within the error bound") {
  checks::Rng rng(35);
  for (int k = 0; k < 40; ++k) {
    const double w11 = rng.uniform(0.2, 1.0);
    const Contract w{w11, rng.uniform(0.05, 0.8) * w11, 0.0, 0.0};
    const double p = rng.uniform(0.3, 1.0);
    const ActionSpec a0{rng.uniform(0.05, 0.6) * p, p};
    const double target = pbar_closed_form(w.w11, w.w10, a0).p_end;
    for (int n : {50, 400}) {
      const EulerChain ch = euler_adversary(w, a0, n);
      CHECK(ch.verified);
      const auto bound = euler_error_bound(w, a0, n);
      REQUIRE(bound.has_value());
      CHECK(std::fabs(ch.limit_prob - target) <= *bound + 1e-12);
      for (std::size_t i = 1; i < ch.chain.size(); ++i) {
        CHECK(ch.actions[ch.chain[i]].prob <= ch.actions[ch.chain[i - 1]].prob);
        CHECK(ch.actions[ch.chain[i]].cost <= ch.actions[ch.chain[i - 1]].cost);
      }
    }
  }
  CHECK_FALSE(euler_error_bound({0.5, 0.0, 0.0, 0.0}, {0.25, 1.0}, 10).has_value());
}

TEST_CASE("IPE undercut adversary") {
  const IpeAdversary adv = ipe_adversary(0.5, kRunning, 1e-3);
  CHECK(adv.a_star.cost == 0.0);
  CHECK(adv.a_star.prob == doctest::Approx(0.5 + 1e-3));
  CHECK(adv.unique_shirk_eq);
}

TEST_CASE("witness kinds") {
  auto kind = [](const Contract& w) {
    const WorstCaseResult r = w.w11 >= w.w10 ? zero_failure_value(w.w11, w.w10, kRunning) : rpe_value(w, kRunning);
    return build_witness(w, kRunning, r, 1e-2)->kind;
  };
  CHECK(kind({1.0, 1.0, 0.0, 0.0}) == "dominant_full_success");
  CHECK(kind({0.0, 0.0, 0.0, 0.0}) == "null_action");
  CHECK(kind({0.5, 0.5, 0.0, 0.0}) == "ipe_undercut");
  CHECK(kind({0.6, 0.1, 0.0, 0.0}) == "euler_chain");
  CHECK(kind({0.1, 0.6, 0.0, 0.0}) == "rpe_fixed_point");
  CHECK_FALSE(build_witness({0.5, 0.0, 0.0, 0.2}, kRunning, {}, 1e-2).has_value());
}

TEST_CASE("witness games approach the worst-case value as eps shrinks") {
  const Contract ipe{0.5, 0.5, 0.0, 0.0};
  const WorstCaseResult r = zero_failure_value(0.5, 0.5, kRunning);
  double prev = 1e9;
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    const auto wit = build_witness(ipe, kRunning, r, eps);
    REQUIRE(wit);
    CHECK(wit->verified);
    const double gap = wit->game_per_agent - r.per_agent;
    CHECK(gap >= -1e-12);
    CHECK(gap < prev);
    prev = gap;
  }
  const Contract jpe{0.6, 0.1, 0.0, 0.0};
  const WorstCaseResult rj = jpe_value(jpe, kRunning);
  const auto wj = build_witness(jpe, kRunning, rj, 1e-3);
  REQUIRE(wj);
  CHECK(wj->verified);
  CHECK(std::fabs(wj->limit_prob - rj.pbar) <= 1e-2);
}

TEST_CASE("no action set does worse than the IPE worst case") {
  // Every game value is at least the infimum; brute force over random sets.
  checks::Rng rng(36);
  for (int k = 0; k < 200; ++k) {
    const double wage = rng.uniform(0.3, 0.9);
    const Contract w{wage, wage, 0.0, 0.0};
    std::vector<ActionSpec> extra;
    for (int i = rng.integer(1, 4); i > 0; --i) extra.push_back({rng.uniform(0, 0.3), rng.uniform(0, 1)});
    const ActionSet A = kRunning.with_appended(extra);
    const InducedGame g(w, A);
    const auto rep = select_and_value(g, enumerate_equilibria(g, true), Selection::PRINCIPAL_BEST);
    CHECK(rep.principal_total >= zero_failure_value(wage, wage, kRunning).total - 1e-9);
  }
}
