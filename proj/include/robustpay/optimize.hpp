#pragma once

#include <optional>
#include <string>
#include <vector>

#include "robustpay/model.hpp"
#include "robustpay/worstcase.hpp"

namespace robustpay {

enum class Regime { POOLED, MIXED, INFEASIBLE };
const char* to_string(Regime r);

struct OptimizationResult {
  double w11 = 0.0;
  double w10 = 0.0;
  double per_agent = 0.0;
  double grid_step = 0.0;  // step of the last grid evaluated
  bool refined = false;
  Regime regime = Regime::POOLED;
  double pbar = 0.0;
  Binding binding = Binding::SHIRK_EQ;
};

inline constexpr double kDefaultCoarseStep = 1e-2;
inline constexpr int kDefaultRefineRounds = 3;

// Maximizes the worst-case per-agent payoff over 0 <= w10 <= w11 <= 1.
OptimizationResult optimize_jpe(const ActionSet& A0, double coarse = kDefaultCoarseStep,
                                int refine_rounds = kDefaultRefineRounds);

struct Lemma5Witness {
  double eps = 0.0;
  Contract contract;
  double per_agent = 0.0;
  double ipe_per_agent = 0.0;
};

inline constexpr double kLemma5MinGain = 1e-6;

// Walks eps = 0.1, 0.05, 0.02, 0.01, ... and returns the first calibrated
// JPE that beats the optimal IPE by at least kLemma5MinGain.
Lemma5Witness lemma5_witness(const ActionSet& A0);
std::vector<double> lemma5_ladder();

struct SweepRow {
  double p0 = 0.0;
  double c0 = 0.0;
  Regime regime = Regime::INFEASIBLE;
  std::optional<OptimizationResult> opt;
};

// One optimize_jpe run per (p, c) cell; cells without p > c > 0 are flagged.
std::vector<SweepRow> sweep_regimes(const std::vector<double>& p_grid, const std::vector<double>& c_grid,
                                    double coarse = kDefaultCoarseStep, int refine_rounds = kDefaultRefineRounds);
// Same sweep with c0 = ratio * p0 for each ratio.
std::vector<SweepRow> sweep_regimes_ratio(const std::vector<double>& p_grid, const std::vector<double>& ratios,
                                          double coarse = kDefaultCoarseStep,
                                          int refine_rounds = kDefaultRefineRounds);

struct InnerWitness {
  double c1 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
};

struct DiscriminatoryResult {
  double w1 = 0.0;
  double w2 = 0.0;
  InnerWitness inner_witness;
  double value_total = 0.0;
  double per_agent() const { return value_total / 2.0; }
};

// Adversary's minimum of p1(1-w1) + p2(1-w2) for fixed wages w1 >= w2, with
// the second unknown action costless. c1 runs over a grid; p1 and p2 take
// their smallest incentive-compatible values. nullopt if no c1 is feasible.
std::optional<DiscriminatoryResult> discriminatory_inner(const ActionSet& A0, double w1, double w2, double grid);

// Both incentive constraints for agent-specific unknown actions (c1, p1), (c2, p2).
bool discriminatory_ic_holds(const ActionSet& A0, double w1, double w2, double c1, double p1, double c2, double p2,
                             double tol);

DiscriminatoryResult discriminatory_ipe(const ActionSet& A0, double grid = kDefaultCoarseStep);

}  // namespace robustpay
