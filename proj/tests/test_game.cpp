#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "robustpay/checks.hpp"
#include "robustpay/game.hpp"

using namespace robustpay;

namespace {

// Expected utility by summing over the four outcome pairs.
double brute_payoff(const Contract& w, const ActionSpec& own, const ActionSpec& other) {
  double u = -own.cost;
  for (int yi = 0; yi <= 1; ++yi)
    for (int yj = 0; yj <= 1; ++yj) {
      const double pr = (yi ? own.prob : 1 - own.prob) * (yj ? other.prob : 1 - other.prob);
      u += pr * w.wage(yi, yj);
    }
  return u;
}

ActionSet random_set(checks::Rng& rng, int n) {
  std::vector<ActionSpec> acts;
  for (int i = 0; i < n; ++i) acts.push_back({rng.uniform(0, 0.6), rng.uniform(0, 1)});
  return ActionSet(acts, 1);
}

bool pure_ne(const InducedGame& g, std::size_t i, std::size_t j) {
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g.payoff(k, j) > g.payoff(i, j) + kEquilibriumTol) return false;
    if (g.payoff(k, i) > g.payoff(j, i) + kEquilibriumTol) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("payoffs match outcome-by-outcome expectation") {
  checks::Rng rng(21);
  for (int k = 0; k < 200; ++k) {
    const Contract w{rng.uniform(0, 1), rng.uniform(0, 1), rng.uniform(0, 1), rng.uniform(0, 1)};
    const ActionSet A = random_set(rng, 4);
    const InducedGame g(w, A);
    const auto m = g.payoff_matrix();
    for (std::size_t i = 0; i < A.size(); ++i)
      for (std::size_t j = 0; j < A.size(); ++j) {
        CHECK(g.payoff(i, j) == doctest::Approx(brute_payoff(w, A[i], A[j])).epsilon(1e-12));
        CHECK(m[i][j] == g.payoff(i, j));
      }
  }
}

TEST_CASE("modularity follows the contract family") {
  const ActionSet A = make_known({{0.25, 1.0}, {0.1, 0.5}, {0.05, 0.2}});
  CHECK(check_modularity(InducedGame({0.5, 0.0, 0.0, 0.0}, A)) == Modularity::SUPERMODULAR);
  CHECK(check_modularity(InducedGame({0.0, 0.5, 0.0, 0.0}, A)) == Modularity::SUBMODULAR);
  CHECK(check_modularity(InducedGame({0.5, 0.5, 0.0, 0.0}, A)) == Modularity::BOTH);
}

TEST_CASE("best responses pick the extreme maximizer") {
  // IPE with w = 0.5: both (0.25,1.0) and (0.0,0.5) give 0.25 against anything.
  const ActionSet A = make_known({{0.25, 1.0}, {0.0, 0.5}, {0.0, 0.1}});
  const InducedGame g({0.5, 0.5, 0.0, 0.0}, A);
  CHECK(best_response(g, 0, Extreme::MAX) == 0);
  CHECK(best_response(g, 0, Extreme::MIN) == 1);
}

TEST_CASE("matching pennies has only the uniform mixed equilibrium") {
  const Bimatrix mp{{{1, -1}, {-1, 1}}, {{-1, 1}, {1, -1}}};
  const auto eqs = enumerate_equilibria(mp, true);
  REQUIRE(eqs.size() == 1);
  CHECK(eqs[0].x[0] == doctest::Approx(0.5));
  CHECK(eqs[0].y[0] == doctest::Approx(0.5));
  CHECK_FALSE(eqs[0].pure_pair().has_value());
  CHECK(enumerate_equilibria(mp, false).empty());
}

TEST_CASE("coordination game: two pure and one mixed equilibrium") {
  const Bimatrix co{{{2, 0}, {0, 1}}, {{2, 0}, {0, 1}}};
  const auto eqs = enumerate_equilibria(co, true);
  REQUIRE(eqs.size() == 3);
  int mixed = 0;
  for (const auto& e : eqs) {
    CHECK(is_equilibrium(co, e));
    if (!e.pure_pair()) {
      ++mixed;
      CHECK(e.x[0] == doctest::Approx(1.0 / 3.0));
      const auto [u, v] = expected_payoffs(co, e);
      CHECK(u == doctest::Approx(2.0 / 3.0));
      CHECK(v == doctest::Approx(2.0 / 3.0));
    }
  }
  CHECK(mixed == 1);
}

TEST_CASE("mixed enumeration refuses large games") {
  std::vector<ActionSpec> acts(kMixedCap + 1, ActionSpec{0.1, 0.5});
  const InducedGame g({0.5, 0.0, 0.0, 0.0}, make_known(acts));
  CHECK_THROWS_AS(enumerate_equilibria(g, true), ModelError);
  CHECK_NOTHROW(enumerate_equilibria(g, false));
}

TEST_CASE("pure equilibria match brute force and every reported profile is an equilibrium") {
  checks::Rng rng(22);
  for (int k = 0; k < 300; ++k) {
    const Contract w{rng.uniform(0, 1), rng.uniform(0, 1), rng.uniform(0, 0.3), rng.uniform(0, 0.3)};
    const InducedGame g(w, random_set(rng, rng.integer(2, 5)));
    const Bimatrix bm = to_bimatrix(g);
    const auto eqs = enumerate_equilibria(g, true);
    std::size_t pure = 0;
    for (const auto& e : eqs) {
      CHECK(is_equilibrium(bm, e));
      if (e.pure_pair()) ++pure;
    }
    std::size_t brute = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < g.size(); ++j) brute += pure_ne(g, i, j);
    CHECK(pure == brute);
  }
}

TEST_CASE("supermodular games: extremal BR limits bracket every pure equilibrium") {
  checks::Rng rng(23);
  for (int k = 0; k < 300; ++k) {
    const double w10 = rng.uniform(0, 0.8);
    const Contract w{w10 + rng.uniform(0.01, 0.5), w10, 0.0, 0.0};
    const InducedGame g(w, random_set(rng, rng.integer(2, 7)));
    const BrPath hi = extremal_br_path(g, Extreme::MAX);
    const BrPath lo = extremal_br_path(g, Extreme::MIN);
    REQUIRE(hi.converged);
    REQUIRE(lo.converged);
    CHECK(pure_ne(g, hi.limit, hi.limit));
    CHECK(pure_ne(g, lo.limit, lo.limit));
    const auto& A = g.actions();
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < g.size(); ++j)
        if (pure_ne(g, i, j)) {
          CHECK(A[hi.limit].prob >= A[i].prob);
          CHECK(A[lo.limit].prob <= A[j].prob);
        }
  }
}

TEST_CASE("submodular games: the paired BR map ends at an equilibrium") {
  checks::Rng rng(24);
  for (int k = 0; k < 300; ++k) {
    const double w10 = rng.uniform(0.05, 1.0);
    const Contract w{rng.uniform(0, w10 - 0.01), w10, 0.0, 0.0};
    const InducedGame g(w, random_set(rng, rng.integer(2, 7)));
    const PairedLimit pl = paired_br_limit(g);
    REQUIRE(pl.converged);
    CHECK(pure_ne(g, pl.high, pl.low));
  }
}

TEST_CASE("principal value on symmetric pure profiles") {
  const Contract w{0.6, 0.1, 0.0, 0.0};
  const ActionSet A = make_known({{0.25, 1.0}, {0.1, 0.4}});
  const InducedGame g(w, A);
  for (std::size_t i = 0; i < A.size(); ++i) {
    const double p = A[i].prob;
    const double direct = 2 * (p - (p * p * w.w11 + p * (1 - p) * w.w10));
    CHECK(principal_total(g, Profile::pure(2, 2, i, i)) == doctest::Approx(direct));
    CHECK(symmetric_principal_total(w, p) == doctest::Approx(direct));
  }
}

TEST_CASE("selection rules on a game with several equilibria") {
  // JPE with two symmetric pure equilibria.
  const Contract w{0.6, 0.0, 0.0, 0.0};
  const ActionSet A = make_known({{0.25, 1.0}, {0.0, 0.0}});
  const InducedGame g(w, A);
  const auto eqs = enumerate_equilibria(g, true);
  const auto best = select_and_value(g, eqs, Selection::PRINCIPAL_BEST);
  const auto pess = select_and_value(g, eqs, Selection::PESSIMISTIC_PARETO);
  // (a0, a0) pays each agent 0.35 and is the only Pareto-efficient equilibrium.
  CHECK(best.principal_total == doctest::Approx(0.8));
  CHECK(pess.principal_total == doctest::Approx(0.8));
  CHECK(pess.selected.pure_pair() == std::optional<std::pair<std::size_t, std::size_t>>({0, 0}));
}
