#include "robustpay/extensions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "robustpay/game.hpp"
#include "robustpay/worstcase.hpp"

namespace robustpay {

Contract two_agent_equivalent(const MultiAgentContract& mac) { return {mac.w0 + mac.b, mac.w0, 0.0, 0.0}; }

MultiAgentValue multi_agent_value(const MultiAgentContract& mac, const ActionSet& A0) {
  if (mac.n < 2) throw ModelError("multi_agent_value: needs n >= 2");
  if (!(mac.w0 >= 0.0)) throw ModelError("multi_agent_value: base wage must be nonnegative");
  if (!(mac.b > 0.0)) throw ModelError("multi_agent_value: bonus factor must be positive");
  A0.require_assumption1();
  const WorstCaseResult r = jpe_value(two_agent_equivalent(mac), A0);
  return {r.per_agent, mac.n * r.per_agent};
}

void BayesianEnv::validate() const {
  if (!(mu > 0.0 && mu < 1.0)) throw ModelError("bayesian env: mu must lie in (0,1)");
  if (!(c0 > 0.0 && c0 < p0 && p0 <= 1.0)) throw ModelError("bayesian env: needs 0 < c0 < p0 <= 1");
  if (!(p_star > 0.0 && p_star < p0)) throw ModelError("bayesian env: needs 0 < p_star < p0");
}

const char* to_string(SchemeKind k) {
  switch (k) {
    case SchemeKind::ZERO: return "ZERO";
    case SchemeKind::IPE_MIXED: return "IPE_MIXED";
    case SchemeKind::IPE_ALWAYS_A0: return "IPE_ALWAYS_A0";
    case SchemeKind::JPE: return "JPE";
  }
  return "ZERO";
}

double bayesian_jpe_bonus(const BayesianEnv& env, double w0) { return (env.c0 / env.p0 - w0) / env.p0; }

double bayesian_eval(const BayesianEnv& env, const Scheme& scheme) {
  env.validate();
  const double mu = env.mu, p0 = env.p0, c0 = env.c0, ps = env.p_star;
  switch (scheme.kind) {
    case SchemeKind::ZERO: return (1.0 - mu) * ps;
    case SchemeKind::IPE_MIXED: return (mu * p0 + (1.0 - mu) * ps) * (1.0 - c0 / p0);
    case SchemeKind::IPE_ALWAYS_A0: return p0 * (1.0 - c0 / (p0 - ps));
    case SchemeKind::JPE: {
      if (!(scheme.w0 >= 0.0 && scheme.w0 <= c0 / p0))
        throw ModelError("bayesian_eval: JPE base wage must lie in [0, c0/p0]");
      const double b = bayesian_jpe_bonus(env, scheme.w0);
      return mu * p0 * (1.0 - c0 / p0) + (1.0 - mu) * ps * (1.0 - (scheme.w0 + ps * b));
    }
  }
  return 0.0;
}

double bayesian_best_jpe(const BayesianEnv& env) { return bayesian_eval(env, Scheme::jpe(0.0)); }

SchemeKind bayesian_best_ipe(const BayesianEnv& env) {
  SchemeKind best = SchemeKind::ZERO;
  double v = bayesian_eval(env, {SchemeKind::ZERO});
  for (SchemeKind k : {SchemeKind::IPE_MIXED, SchemeKind::IPE_ALWAYS_A0}) {
    const double u = bayesian_eval(env, {k});
    if (u > v) {
      v = u;
      best = k;
    }
  }
  return best;
}

namespace {

std::string jpe_label(bool beats) { return beats ? "JPE_BEATS_IPE" : "IPE_WEAKLY_BEST"; }

}  // namespace

std::vector<MuThreshold> bayesian_thresholds(double p0, double c0, double p_star) {
  auto env_at = [&](double mu) { return BayesianEnv{mu, p0, c0, p_star}; };
  env_at(0.5).validate();
  auto ipe_label = [&](double mu) { return std::string(to_string(bayesian_best_ipe(env_at(mu)))); };
  auto jpe_beats = [&](double mu) {
    const BayesianEnv e = env_at(mu);
    return bayesian_best_jpe(e) > bayesian_eval(e, {bayesian_best_ipe(e)});
  };
  auto locate = [](double lo, double hi, const std::function<std::string(double)>& label) {
    const std::string left = label(lo);
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (label(mid) == left) lo = mid;
      else hi = mid;
    }
    return 0.5 * (lo + hi);
  };

  std::vector<MuThreshold> out;
  constexpr int kScan = 1000;
  for (int k = 1; k + 1 < kScan; ++k) {
    const double lo = static_cast<double>(k) / kScan, hi = static_cast<double>(k + 1) / kScan;
    const std::string a = ipe_label(lo), b = ipe_label(hi);
    if (a != b) out.push_back({"best_ipe", a, b, locate(lo, hi, ipe_label)});
    const bool ja = jpe_beats(lo), jb = jpe_beats(hi);
    if (ja != jb) {
      auto lab = [&](double mu) { return jpe_label(jpe_beats(mu)); };
      out.push_back({"jpe_beats_ipe", jpe_label(ja), jpe_label(jb), locate(lo, hi, lab)});
    }
  }
  return out;
}

AsymValue asym_unknown_value(const Contract& w, const ActionSpec& a0) {
  w.validate();
  if (w.w01 != 0.0 || w.w00 != 0.0 || !(w.w11 >= w.w10))
    throw ModelError("asym_unknown_value: needs w01 = w00 = 0 and w11 >= w10");
  if (!(a0.prob > a0.cost && a0.cost > 0.0)) throw ModelError("asym_unknown_value: needs p0 > c0 > 0");
  auto undercut = [&](double opponent) {
    const double d = opponent * w.w11 + (1.0 - opponent) * w.w10;
    return d > 0.0 ? std::max(0.0, a0.prob - a0.cost / d) : 0.0;
  };
  AsymValue v;
  v.p1 = undercut(a0.prob);
  v.p2 = undercut(v.p1);
  const double full = 2.0 - 2.0 * w.w11;
  const double shirk =
      v.p1 * v.p2 * (2.0 - 2.0 * w.w11) + (v.p1 * (1.0 - v.p2) + v.p2 * (1.0 - v.p1)) * (1.0 - w.w10);
  v.total = std::min(full, shirk);
  return v;
}

PessimisticResult pessimistic_value(const Contract& w, const ActionSet& A) {
  const InducedGame game(w, A);
  const auto eqs = enumerate_equilibria(game, A.size() <= kMixedCap);
  PessimisticResult out;
  out.value_total = select_and_value(game, eqs, Selection::PESSIMISTIC_PARETO).principal_total;
  out.principal_best_total = select_and_value(game, eqs, Selection::PRINCIPAL_BEST).principal_total;
  out.positive_spillover = w.w01 == 0.0 && w.w00 == 0.0 && w.w11 > w.w10 &&
                           check_modularity(game) == Modularity::SUPERMODULAR;
  out.agrees = std::fabs(out.value_total - out.principal_best_total) <= 1e-12;
  return out;
}

Contract linear_contract(double alpha) {
  if (!(alpha >= 0.0)) throw ModelError("linear_contract: share must be nonnegative");
  return {2.0 * alpha, alpha, alpha, 0.0};
}

}  // namespace robustpay
