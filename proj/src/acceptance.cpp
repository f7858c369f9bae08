#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "robustpay/checks.hpp"
#include "robustpay/extensions.hpp"
#include "robustpay/game.hpp"
#include "robustpay/optimize.hpp"
#include "robustpay/worstcase.hpp"

namespace robustpay::checks {

namespace {

const ActionSet& running_a0() {
  static const ActionSet a0 = make_known({{0.25, 1.0}});
  return a0;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string num(double v) { return fmt("%.10g", v); }

CriterionResult c1_ipe_optimum() {
  constexpr double kTol = 1e-9;
  const IpeOptimum r = ipe_optimal(running_a0());
  const bool ok = std::fabs(r.w_star - 0.5) <= kTol && std::fabs(r.per_agent - 0.25) <= kTol &&
                  std::fabs(r.total - 0.5) <= kTol;
  return {1, "IPE optimum on the running example", ok,
          "w*=" + num(r.w_star) + " per_agent=" + num(r.per_agent) + " total=" + num(r.total)};
}

CriterionResult c2_jpe_optimum() {
  constexpr double kTol = 1e-3;
  const OptimizationResult r = optimize_jpe(running_a0());
  const bool ok = std::fabs(r.w11 - 2.0 / 3.0) <= kTol && std::fabs(r.w10) <= kTol &&
                  std::fabs(r.per_agent - 1.0 / 3.0) <= kTol;
  return {2, "JPE optimum on the running example", ok,
          "w11=" + num(r.w11) + " w10=" + num(r.w10) + " per_agent=" + num(r.per_agent)};
}

CriterionResult c3_collapse() {
  const WorstCaseResult r = jpe_value({0.5, 0.0, 0.0, 0.0}, running_a0());
  return {3, "worst-case collapse at w=(0.5,0,0,0)", r.pbar == 0.0, "pbar=" + num(r.pbar)};
}

CriterionResult c4_chain() {
  constexpr double kTol = 1e-6;
  constexpr double kTinyRho = 1e-9;
  const EulerChain ch = euler_adversary(Contract{0.5, 0.0, 0.0, 0.0}, ActionSpec{0.25, 1.0}, 2, {kTinyRho});
  const double p1 = ch.actions[1].prob, p2 = ch.actions[2].prob;
  const bool ok = ch.actions[0].prob == 1.0 && std::fabs(p1 - 0.75) <= kTol && std::fabs(p2 - 5.0 / 12.0) <= kTol &&
                  ch.verified && ch.exact_path;
  return {4, "two-step undercut chain", ok,
          "chain 1 -> " + num(p1) + " -> " + num(p2) + (ch.exact_path ? " (maximal BR path)" : " (path mismatch)")};
}

CriterionResult c5_limits() {
  constexpr double kEps = 1e-4;
  constexpr double kTolP = 1e-3, kTolDp = 1e-2, kTolProfit = 1e-2;
  const ActionSpec a0{0.25, 1.0};
  const double w_star = 0.5;
  auto pbar = [&](double e) {
    const Contract w = calibrate_jpe(w_star, a0, e);
    return pbar_closed_form(w.w11, w.w10, a0).p_end;
  };
  const double h = kEps / 10.0;
  const double p = pbar(kEps);
  const double dp = (pbar(kEps + h) - pbar(kEps - h)) / (2.0 * h);
  const double profit0 = ipe_optimal(running_a0()).per_agent;
  const double profit = jpe_value(calibrate_jpe(w_star, a0, kEps), running_a0()).per_agent;
  const double slope = (profit - profit0) / kEps;
  const bool ok = std::fabs(p - 0.5) <= kTolP && std::fabs(dp + 0.25) <= kTolDp && std::fabs(slope - 0.125) <= kTolProfit;
  return {5, "calibration limits at eps=1e-4", ok,
          "pbar=" + num(p) + " dpbar=" + num(dp) + " profit slope=" + num(slope)};
}

CriterionResult c6_rpe_dominated() {
  constexpr double kTol = 1e-9;
  Rng rng(0x6666ULL);
  int worst_case = -1;
  double worst_gap = -1e300;
  for (int k = 0; k < 500; ++k) {
    Contract w;
    w.w10 = rng.uniform(0.01, 1.0);
    w.w11 = rng.uniform(0.0, w.w10);
    std::vector<ActionSpec> acts;
    const int known = rng.integer(1, 3);
    for (int i = 0; i < known; ++i) {
      const double p = rng.uniform(0.05, 1.0);
      acts.push_back({rng.uniform(0.01, 0.99) * p, p});
    }
    const ActionSet A0 = make_known(acts);
    const double gap = rpe_value(w, A0).per_agent - ipe_optimal(A0).per_agent;
    if (gap > worst_gap) {
      worst_gap = gap;
      worst_case = k;
    }
  }
  return {6, "RPE never beats the optimal IPE (500 draws)", worst_gap <= kTol,
          "max(rpe - ipe)=" + num(worst_gap) + " at draw " + std::to_string(worst_case)};
}

CriterionResult c7_lower_bound(std::uint64_t seed) {
  constexpr double kTol = 1e-6;
  constexpr double kFloor = 5e-3;
  constexpr int kSteps = 2000;
  const auto insts = suite7_instances(seed);
  int bound_fail = 0, tight_fail = 0, unverified = 0;
  double worst_slack = 1e300, worst_tight = 0.0;
  for (const auto& inst : insts) {
    const double pbar = zero_failure_value(inst.w.w11, inst.w.w10, inst.actions).pbar;
    const InducedGame game(inst.w, inst.actions);
    const BrPath top = extremal_br_path(game, Extreme::MAX);
    const double p_max = inst.actions[top.limit].prob;
    worst_slack = std::min(worst_slack, p_max - pbar);
    if (!top.converged || p_max < pbar - kTol) ++bound_fail;

    const EulerChain ch = euler_adversary(inst.w, inst.actions, kSteps);
    if (!ch.verified) ++unverified;
    const double allowed = std::max(ch.error_bound.value_or(0.0), kFloor);
    const double gap = std::fabs(ch.limit_prob - pbar);
    worst_tight = std::max(worst_tight, gap / allowed);
    if (gap > allowed) ++tight_fail;
  }
  std::ostringstream d;
  d << "lower-bound violations=" << bound_fail << " min(p_max-pbar)=" << num(worst_slack)
    << "; tightness violations=" << tight_fail << " max gap/allowed=" << num(worst_tight)
    << "; unverified chains=" << unverified;
  return {7, "lower bound and Euler tightness (500 instances)", bound_fail == 0 && tight_fail == 0, d.str()};
}

CriterionResult c8_lemma5() {
  Rng rng(0x8888ULL);
  int fails = 0;
  double min_gain = 1e300;
  for (int k = 0; k < 50; ++k) {
    const double p0 = rng.uniform(0.05, 1.0);
    const double c0 = rng.uniform(0.001, 0.999) * p0;
    try {
      const Lemma5Witness l = lemma5_witness(make_known({{c0, p0}}));
      min_gain = std::min(min_gain, l.per_agent - l.ipe_per_agent);
      if (!(l.per_agent - l.ipe_per_agent >= kLemma5MinGain)) ++fails;
    } catch (const ConvergenceError&) {
      ++fails;
    }
  }
  return {8, "calibrated JPE beats IPE (50 draws)", fails == 0,
          "failures=" + std::to_string(fails) + " min gain=" + num(min_gain)};
}

CriterionResult c9_multi_agent() {
  constexpr double kTol = 1e-12;
  bool ok = true;
  std::ostringstream d;
  for (const ActionSet& A0 : {running_a0(), make_known({{0.2, 0.8}})}) {
    const Lemma5Witness l = lemma5_witness(A0);
    const double ipe = ipe_optimal(A0).per_agent;
    const MultiAgentContract base{2, l.contract.w10, l.contract.w11 - l.contract.w10};
    const double ref = multi_agent_value(base, A0).per_agent;
    for (int n : {2, 3, 5}) {
      MultiAgentContract mac = base;
      mac.n = n;
      const MultiAgentValue v = multi_agent_value(mac, A0);
      if (!(v.total > n * ipe)) ok = false;
      if (std::fabs(v.per_agent - ref) > kTol) ok = false;
      d << "n=" << n << " total=" << num(v.total) << " vs " << num(n * ipe) << "; ";
    }
  }
  return {9, "n-agent calibrated JPE beats n x IPE", ok, d.str()};
}

CriterionResult c10_regimes() {
  const std::vector<double> ps{0.6, 0.8, 1.0};
  std::vector<double> ratios;
  for (int k = 1; k <= 9; ++k) ratios.push_back(0.1 * k);
  const auto rows = sweep_regimes_ratio(ps, ratios);
  bool ok = true;
  std::ostringstream d;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    std::string seq;
    bool seen_mixed = false;
    for (std::size_t k = 0; k < ratios.size(); ++k) {
      const Regime r = rows[i * ratios.size() + k].regime;
      seq += r == Regime::POOLED ? 'P' : (r == Regime::MIXED ? 'M' : 'X');
      if (r == Regime::MIXED) seen_mixed = true;
      else if (seen_mixed || r != Regime::POOLED) ok = false;
    }
    if (seq.front() != 'P' || seq.back() != 'M') ok = false;
    d << "p0=" << ps[i] << ":" << seq << " ";
  }
  return {10, "pooled/mixed regimes with monotone boundary", ok, d.str()};
}

CriterionResult c11_bayes() {
  constexpr double kTol = 1e-9;
  const BayesianEnv env{0.9, 1.0, 0.25, 0.5};
  const double jpe = bayesian_eval(env, Scheme::jpe(0.2));
  const double mixed = bayesian_eval(env, {SchemeKind::IPE_MIXED});
  bool ok = std::fabs(jpe - 0.71375) <= kTol && std::fabs(mixed - 0.7125) <= kTol && jpe > mixed;
  std::ostringstream d;
  d << "JPE(0.2)=" << num(jpe) << " IPE_MIXED=" << num(mixed) << "; thresholds:";
  // Regime flips: zero wages at small mu with p* near p0, the mixed IPE
  // (beaten by a JPE) at large mu.
  for (double ps : {0.5, 0.9}) {
    const auto th = bayesian_thresholds(1.0, 0.25, ps);
    bool has_ipe_flip = false, has_jpe_flip = false;
    for (const auto& t : th) {
      if (!(t.mu > 0.0 && t.mu < 1.0)) ok = false;
      if (t.kind == "best_ipe" && t.above == "IPE_MIXED") has_ipe_flip = true;
      if (t.kind == "jpe_beats_ipe" && t.above == "JPE_BEATS_IPE") has_jpe_flip = true;
      d << " p*=" << ps << " " << t.below << "->" << t.above << "@" << num(t.mu);
    }
    if (!has_ipe_flip) ok = false;
    if (ps == 0.9 && !has_jpe_flip) ok = false;
  }
  return {11, "Bayesian scheme values and mu thresholds", ok, d.str()};
}

CriterionResult c12_discriminatory() {
  constexpr double kGrid = 1e-2;
  const ActionSet low = make_known({{0.25, 1.0}});
  const ActionSet high = make_known({{0.75, 1.0}});
  const DiscriminatoryResult dl = discriminatory_ipe(low, kGrid);
  const DiscriminatoryResult dh = discriminatory_ipe(high, kGrid);
  const double jl = optimize_jpe(low).per_agent;
  const double jh = optimize_jpe(high).per_agent;
  const bool split_best_high = dh.w1 != dh.w2;
  // Largest value among wage pairs with w1 != w2 at c0 = 0.75.
  double best_split = -1e300;
  for (int i = 0; i <= 100; ++i)
    for (int j = 0; j < i; ++j) {
      const auto r = discriminatory_inner(high, i * kGrid, j * kGrid, kGrid);
      if (r) best_split = std::max(best_split, r->per_agent());
    }
  const bool ok = dl.per_agent() <= jl && best_split > jh && split_best_high;
  std::ostringstream d;
  d << "c0=0.25: best " << num(dl.per_agent()) << " at (" << dl.w1 << "," << dl.w2 << ") vs JPE " << num(jl)
    << "; c0=0.75: best " << num(dh.per_agent()) << " at (" << dh.w1 << "," << dh.w2 << "), best split "
    << num(best_split) << " vs JPE " << num(jh);
  return {12, "discriminatory IPE vs optimal JPE", ok, d.str()};
}

CriterionResult c13_asym() {
  const AsymValue v = asym_unknown_value({0.5, 0.0, 0.0, 0.0}, {0.25, 1.0});
  const bool ok = v.p1 == 0.5 && v.p2 == 0.0 && v.total == 0.5;
  return {13, "asymmetric unknown actions", ok, "(" + num(v.p1) + ", " + num(v.p2) + ", " + num(v.total) + ")"};
}

CriterionResult c14_pessimistic(std::uint64_t seed) {
  constexpr double kTol = 1e-12;
  const auto insts = suite7_instances(seed);
  int checked = 0, mismatches = 0, high_wage = 0;
  double worst = 0.0;
  for (const auto& inst : insts) {
    const PessimisticResult r = pessimistic_value(inst.w, inst.actions);
    if (!r.positive_spillover) continue;
    ++checked;
    const double gap = std::fabs(r.value_total - r.principal_best_total);
    worst = std::max(worst, gap);
    if (gap > kTol) {
      ++mismatches;
      // Above this bonus the principal's payoff falls with effort, so a lower
      // equilibrium can pay her more than the maximal one.
      if (inst.w.w11 > (1.0 + inst.w.w10) / 2.0) ++high_wage;
    }
  }
  bool linear_ok = true;
  const double ipe_total = ipe_optimal(running_a0()).total;
  std::ostringstream d;
  d << "suite-7 instances checked=" << checked << " mismatches=" << mismatches << " (with w11>(1+w10)/2: " << high_wage
    << ") max gap=" << num(worst) << "; linear:";
  for (int k = 1; k <= 9; ++k) {
    const double alpha = 0.1 * k;
    const Contract w = linear_contract(alpha);
    const InducedGame g0(w, running_a0());
    const std::size_t a0 = extremal_br_path(g0, Extreme::MAX).limit;
    const ActionSpec top = running_a0()[a0];
    const double p_star = std::clamp(top.prob - top.cost / alpha + kDefaultWitnessEps, 0.0, 1.0);
    const double v = pessimistic_value(w, running_a0().with_appended({{0.0, p_star}})).value_total;
    if (!(v < ipe_total)) linear_ok = false;
    d << " " << num(v);
  }
  return {14, "pessimistic selection", mismatches == 0 && linear_ok, d.str()};
}

CriterionResult c15_quadrature() {
  constexpr double kTol = 1e-6;
  constexpr long kSteps = 1000000;
  Rng rng(0x1515ULL);
  double worst = 0.0;
  int fails = 0;
  for (int k = 0; k < 200; ++k) {
    const double w11 = rng.uniform(0.02, 1.0);
    const double w10 = rng.uniform(0.0, w11);
    const double p0 = rng.uniform(0.05, 1.0);
    const ActionSpec a0{rng.uniform(0.001, 0.999) * p0, p0};
    const double closed = pbar_closed_form(w11, w10, a0).p_end;
    const double numeric = ode_oracle_p_end(w11, w10, a0, kSteps);
    const double gap = std::fabs(closed - numeric);
    worst = std::max(worst, gap);
    if (gap > kTol) ++fails;
  }
  return {15, "closed form vs RK4 integration (200 draws)", fails == 0,
          "failures=" + std::to_string(fails) + " max gap=" + num(worst)};
}

}  // namespace

CriterionResult run_criterion(int id, std::uint64_t seed) {
  switch (id) {
    case 1: return c1_ipe_optimum();
    case 2: return c2_jpe_optimum();
    case 3: return c3_collapse();
    case 4: return c4_chain();
    case 5: return c5_limits();
    case 6: return c6_rpe_dominated();
    case 7: return c7_lower_bound(seed);
    case 8: return c8_lemma5();
    case 9: return c9_multi_agent();
    case 10: return c10_regimes();
    case 11: return c11_bayes();
    case 12: return c12_discriminatory();
    case 13: return c13_asym();
    case 14: return c14_pessimistic(seed);
    case 15: return c15_quadrature();
  }
  throw ModelError("unknown acceptance criterion " + std::to_string(id));
}

std::vector<CriterionResult> run_acceptance(std::uint64_t seed) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriteria; ++id) {
    try {
      out.push_back(run_criterion(id, seed));
    } catch (const std::exception& e) {
      out.push_back({id, "criterion " + std::to_string(id), false, std::string("threw: ") + e.what()});
    }
  }
  return out;
}

}  // namespace robustpay::checks
