#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "robustpay/model.hpp"

namespace robustpay {

// Path of the cheapest-undercut curve started at a0: p falls as the cost
// saving t grows, with slope -1 / (p*w11 + (1-p)*w10).
struct OdeSolution {
  ActionSpec a0;
  double w11 = 0.0;
  double w10 = 0.0;
  double t_zero = 0.0;  // saving at which the curve reaches p = 0
  double t_hat = 0.0;   // min(cost(a0), t_zero)
  double p_end = 0.0;   // curve value at t_hat
};

// Requires w11 >= w10 >= 0. The IPE branch (w11 == w10) is max(0, p0 - c0/w).
OdeSolution pbar_closed_form(double w11, double w10, const ActionSpec& a0);

enum class Binding { FULL_SUCCESS, SHIRK_EQ };
const char* to_string(Binding b);

struct Witness {
  std::string kind;
  ActionSet actions;
  double eps = 0.0;
  bool clamped = false;
  bool verified = false;       // game module reproduced the intended equilibrium
  double limit_prob = 0.0;     // success prob of the selected equilibrium action
  double game_per_agent = 0.0; // principal payoff per agent in that equilibrium
};

struct WorstCaseResult {
  double pbar = 0.0;
  double per_agent = 0.0;
  double total = 0.0;
  Binding binding = Binding::SHIRK_EQ;
  std::size_t a0_index = 0;  // known action attaining pbar
  bool singular = false;     // w00 variant: budget ran past the singular point
  std::optional<Witness> witness;
};

// Principal payoff per agent when both agents succeed with prob p.
double shirk_branch_per_agent(double w11, double w10, double p);

// Worst case for zero failure wages and w11 >= w10 >= 0 (IPE boundary included).
WorstCaseResult zero_failure_value(double w11, double w10, const ActionSet& A0);

WorstCaseResult jpe_value(const Contract& w, const ActionSet& A0);
WorstCaseResult jpe_value_w00(const Contract& w, const ActionSet& A0);

struct IpeOptimum {
  double w_star = 0.0;
  std::size_t a0_index = 0;
  ActionSpec a0;
  double per_agent = 0.0;
  double total = 0.0;
};

IpeOptimum ipe_optimal(const ActionSet& A0);

// Fixed point of p = max over A0 plus the null action of p(a) - c(a)/D(p),
// shifted up by eps (eps = 0 gives the limit value).
double rpe_fixed_point(const Contract& w, const ActionSet& A0, double eps = 0.0);
WorstCaseResult rpe_value(const Contract& w, const ActionSet& A0);

struct EulerOptions {
  std::optional<double> rho;  // overrides the default rounding offset
};

struct EulerChain {
  ActionSet actions;
  std::vector<std::size_t> chain;  // indices of the chain inside actions, top first
  double step = 0.0;
  double rho = 0.0;
  bool clamped = false;
  bool verified = false;       // maximal equilibrium is the bottom of the chain
  bool exact_path = false;     // maximal best-response path visits every chain element
  std::optional<std::size_t> failed_step;
  std::size_t limit_index = 0;
  double limit_prob = 0.0;
  std::optional<double> error_bound;
};

EulerChain euler_adversary(const Contract& w, const ActionSpec& a0, int n, const EulerOptions& opts = {});
// Chain anchored on the known action with the largest p_end, with A0 kept in
// the set. When a known action ranks above the anchor, the chain starts at
// p = 1 on the anchor's extended curve.
EulerChain euler_adversary(const Contract& w, const ActionSet& A0, int n, const EulerOptions& opts = {});

// nullopt means the slope is unbounded along the solution.
std::optional<double> euler_error_bound(const Contract& w, const ActionSpec& a0, int n);

struct IpeAdversary {
  ActionSet actions;
  ActionSpec a_star;
  bool clamped = false;
  bool unique_shirk_eq = false;
};

IpeAdversary ipe_adversary(double w, const ActionSet& A0, double eps);

inline constexpr double kDefaultWitnessEps = 1e-4;

// Builds the eps-witness for a result returned by zero_failure_value,
// jpe_value or rpe_value. Returns nullopt when no construction applies.
std::optional<Witness> build_witness(const Contract& w, const ActionSet& A0, const WorstCaseResult& r,
                                     double eps = kDefaultWitnessEps);

}  // namespace robustpay
