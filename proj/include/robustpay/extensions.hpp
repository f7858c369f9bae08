#pragma once

#include <string>
#include <vector>

#include "robustpay/model.hpp"

namespace robustpay {

// w(y_i, y_-i) = (w0 + b/(n-1) * sum_{j != i} y_j) * y_i.
struct MultiAgentContract {
  int n = 2;
  double w0 = 0.0;
  double b = 0.0;
};

struct MultiAgentValue {
  double per_agent = 0.0;
  double total = 0.0;
};

// Two-agent equivalent: w11 = w0 + b, w10 = w0.
Contract two_agent_equivalent(const MultiAgentContract& mac);
MultiAgentValue multi_agent_value(const MultiAgentContract& mac, const ActionSet& A0);

struct BayesianEnv {
  double mu = 0.0;  // probability that the unknown action is absent
  double p0 = 0.0;
  double c0 = 0.0;
  double p_star = 0.0;
  void validate() const;
};

enum class SchemeKind { ZERO, IPE_MIXED, IPE_ALWAYS_A0, JPE };

struct Scheme {
  SchemeKind kind = SchemeKind::ZERO;
  double w0 = 0.0;  // JPE base wage
  static Scheme jpe(double w0) { return {SchemeKind::JPE, w0}; }
};

const char* to_string(SchemeKind k);

// Expected per-agent profit of the scheme over both technology states.
double bayesian_eval(const BayesianEnv& env, const Scheme& scheme);
// Team bonus of the JPE scheme: b = (c0/p0 - w0)/p0.
double bayesian_jpe_bonus(const BayesianEnv& env, double w0);
// Value of JPE(w0) as w0 -> 0, the supremum over admissible base wages.
double bayesian_best_jpe(const BayesianEnv& env);
// Best of the three IPE schemes; ties go to the earlier scheme in enum order.
SchemeKind bayesian_best_ipe(const BayesianEnv& env);

struct MuThreshold {
  std::string kind;  // "best_ipe" or "jpe_beats_ipe"
  std::string below; // regime just below the threshold
  std::string above; // regime just above the threshold
  double mu = 0.0;
};

// Every mu in (0, 1) where the best IPE scheme changes, or where the best JPE
// starts or stops beating it. Located by a scan plus bisection.
std::vector<MuThreshold> bayesian_thresholds(double p0, double c0, double p_star);

struct AsymValue {
  double p1 = 0.0;
  double p2 = 0.0;
  double total = 0.0;
};

AsymValue asym_unknown_value(const Contract& w, const ActionSpec& a0);

struct PessimisticResult {
  double value_total = 0.0;         // pessimistic Pareto selection
  double principal_best_total = 0.0;
  bool positive_spillover = false;  // zero failure wages, w11 > w10, supermodular
  bool agrees = false;              // |value - principal best| <= 1e-12
};

PessimisticResult pessimistic_value(const Contract& w, const ActionSet& A);

// Linear contract with per-success share alpha: w11 = 2a, w10 = w01 = a, w00 = 0.
Contract linear_contract(double alpha);

}  // namespace robustpay
