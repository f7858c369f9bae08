#include "robustpay/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace robustpay {

const char* to_string(Regime r) {
  switch (r) {
    case Regime::POOLED: return "POOLED";
    case Regime::MIXED: return "MIXED";
    case Regime::INFEASIBLE: return "INFEASIBLE";
  }
  return "INFEASIBLE";
}

namespace {

// Points lo, lo+h, ..., hi with the end point hit exactly.
std::vector<double> grid_points(double lo, double hi, double h) {
  std::vector<double> out;
  if (hi < lo) return out;
  const auto steps = static_cast<long>(std::floor((hi - lo) / h + 1e-9));
  for (long k = 0; k <= steps; ++k) out.push_back(lo + k * h);
  if (hi - out.back() > 1e-12) out.push_back(hi);
  else out.back() = hi;
  return out;
}

struct Candidate {
  double w11 = 0.0;
  double w10 = 0.0;
  double value = -std::numeric_limits<double>::infinity();
};

// Higher value wins; equal values go to the lexicographically smaller pair.
bool better(const Candidate& a, const Candidate& b) {
  if (a.value != b.value) return a.value > b.value;
  if (a.w11 != b.w11) return a.w11 < b.w11;
  return a.w10 < b.w10;
}

void scan(const ActionSet& A0, double lo11, double hi11, double lo10, double hi10, double h, Candidate& best) {
  for (double w11 : grid_points(lo11, hi11, h)) {
    for (double w10 : grid_points(lo10, std::min(hi10, w11), h)) {
      Candidate c{w11, w10, zero_failure_value(w11, w10, A0).per_agent};
      if (better(c, best)) best = c;
    }
  }
}

}  // namespace

OptimizationResult optimize_jpe(const ActionSet& A0, double coarse, int refine_rounds) {
  A0.require_assumption1();
  if (!(coarse > 0.0) || coarse > 1.0) throw ModelError("optimize_jpe: grid step must lie in (0, 1]");
  if (refine_rounds < 0) throw ModelError("optimize_jpe: refine rounds must be nonnegative");
  Candidate best;
  scan(A0, 0.0, 1.0, 0.0, 1.0, coarse, best);
  double h = coarse;
  for (int r = 0; r < refine_rounds; ++r) {
    const double half = 2.0 * h;
    h /= 10.0;
    scan(A0, std::max(0.0, best.w11 - half), std::min(1.0, best.w11 + half), std::max(0.0, best.w10 - half),
         std::min(1.0, best.w10 + half), h, best);
  }
  OptimizationResult out;
  out.w11 = best.w11;
  out.w10 = best.w10;
  out.grid_step = h;
  out.refined = refine_rounds > 0;
  const WorstCaseResult wc = zero_failure_value(best.w11, best.w10, A0);
  out.per_agent = wc.per_agent;
  out.pbar = wc.pbar;
  out.binding = wc.binding;
  out.regime = best.w10 <= 0.5 * h ? Regime::POOLED : Regime::MIXED;
  return out;
}

std::vector<double> lemma5_ladder() {
  std::vector<double> out;
  constexpr double kFloor = 1e-9;
  for (int decade = 1; decade <= 9; ++decade) {
    const double scale = std::pow(10.0, -decade);
    for (double m : {1.0, 0.5, 0.2}) {
      if (scale * m < kFloor * (1.0 - 1e-9)) return out;
      out.push_back(scale * m);
    }
  }
  return out;
}

Lemma5Witness lemma5_witness(const ActionSet& A0) {
  const IpeOptimum ipe = ipe_optimal(A0);
  for (double eps : lemma5_ladder()) {
    if (!(eps < ipe.w_star)) continue;
    const Contract w = calibrate_jpe(ipe.w_star, ipe.a0, eps);
    const double v = jpe_value(w, A0).per_agent;
    if (v >= ipe.per_agent + kLemma5MinGain) return {eps, w, v, ipe.per_agent};
  }
  throw ConvergenceError("lemma5_witness: eps ladder exhausted without a strict improvement");
}

std::vector<SweepRow> sweep_regimes(const std::vector<double>& p_grid, const std::vector<double>& c_grid,
                                    double coarse, int refine_rounds) {
  std::vector<SweepRow> rows;
  for (double p : p_grid)
    for (double c : c_grid) {
      SweepRow row{p, c, Regime::INFEASIBLE, std::nullopt};
      if (p > c && c > 0.0 && p <= 1.0) {
        row.opt = optimize_jpe(make_known({{c, p}}), coarse, refine_rounds);
        row.regime = row.opt->regime;
      }
      rows.push_back(row);
    }
  return rows;
}

std::vector<SweepRow> sweep_regimes_ratio(const std::vector<double>& p_grid, const std::vector<double>& ratios,
                                          double coarse, int refine_rounds) {
  std::vector<SweepRow> rows;
  for (double p : p_grid)
    for (double r : ratios) {
      auto one = sweep_regimes({p}, {r * p}, coarse, refine_rounds);
      rows.push_back(one.front());
    }
  return rows;
}

bool discriminatory_ic_holds(const ActionSet& A0, double w1, double w2, double c1, double p1, double c2, double p2,
                             double tol) {
  const double u1 = p1 * w1 - c1;
  const double u2 = p2 * w2 - c2;
  if (u1 < p2 * w1 - c2 - tol) return false;
  if (u2 < p1 * w2 - c1 - tol) return false;
  for (std::size_t i = 0; i < A0.known_count(); ++i) {
    if (u1 < A0[i].prob * w1 - A0[i].cost - tol) return false;
    if (u2 < A0[i].prob * w2 - A0[i].cost - tol) return false;
  }
  return true;
}

std::optional<DiscriminatoryResult> discriminatory_inner(const ActionSet& A0, double w1, double w2, double grid) {
  if (!(w1 >= w2) || w2 < 0.0) throw ModelError("discriminatory_inner: needs w1 >= w2 >= 0");
  double best1 = -std::numeric_limits<double>::infinity();
  double best2 = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < A0.known_count(); ++i) {
    best1 = std::max(best1, A0[i].prob * w1 - A0[i].cost);
    best2 = std::max(best2, A0[i].prob * w2 - A0[i].cost);
  }
  // Smallest p2 keeping the costless action at least as good as the known ones.
  double floor2 = 0.0;
  if (w2 > 0.0) floor2 = std::max(0.0, best2 / w2);
  else if (best2 > 0.0) return std::nullopt;
  if (floor2 > 1.0) return std::nullopt;

  std::optional<DiscriminatoryResult> out;
  for (double c1 : grid_points(0.0, 1.0, grid)) {
    double p1 = 0.0;
    if (w1 > 0.0) {
      p1 = std::max({0.0, (best1 + c1) / w1, floor2 + c1 / w1});
    } else if (c1 > 0.0 || best1 > 0.0) {
      continue;
    }
    if (p1 > 1.0) break;
    const double p2 = w2 > 0.0 ? std::max(floor2, p1 - c1 / w2) : 0.0;
    if (p2 > 1.0) continue;
    const double v = p1 * (1.0 - w1) + p2 * (1.0 - w2);
    if (!out || v < out->value_total) out = DiscriminatoryResult{w1, w2, {c1, p1, p2}, v};
  }
  return out;
}

DiscriminatoryResult discriminatory_ipe(const ActionSet& A0, double grid) {
  A0.require_assumption1();
  if (!(grid > 0.0) || grid > 1.0) throw ModelError("discriminatory_ipe: grid step must lie in (0, 1]");
  std::optional<DiscriminatoryResult> best;
  for (double w1 : grid_points(0.0, 1.0, grid))
    for (double w2 : grid_points(0.0, w1, grid)) {
      const auto inner = discriminatory_inner(A0, w1, w2, grid);
      if (inner && (!best || inner->value_total > best->value_total)) best = inner;
    }
  if (!best) throw ModelError("discriminatory_ipe: no feasible wage pair on the grid");
  return *best;
}

}  // namespace robustpay
