#include "robustpay/worstcase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "robustpay/game.hpp"

namespace robustpay {

namespace {

bool zero_failure(const Contract& w) { return w.w01 == 0.0 && w.w00 == 0.0; }

void require_known(const ActionSet& A0) {
  if (A0.known_count() == 0) throw ModelError("worst-case evaluation needs at least one known action");
}

// Antiderivative of the slope denominator: w10*p + (w11-w10)*p^2/2.
double undercut_integral(double w11, double w10, double p) { return w10 * p + 0.5 * (w11 - w10) * p * p; }

double clamp01(double p, bool& clamped) {
  if (p < 0.0) {
    clamped = true;
    return 0.0;
  }
  if (p > 1.0) {
    clamped = true;
    return 1.0;
  }
  return p;
}

std::optional<double> bound_from(double w11, double w10, double budget, double p_end, int n) {
  const double d_min = p_end * w11 + (1.0 - p_end) * w10;
  if (!(d_min > 0.0)) return std::nullopt;
  if (budget <= 0.0) return 0.0;
  const double b = w11 - w10;
  const double lipschitz = b / (d_min * d_min);
  const double curvature = b / (d_min * d_min * d_min);
  const double step = budget / n;
  const double rho = budget / (static_cast<double>(n) * n * (w11 + 1.0));
  const double growth = lipschitz > 0.0 ? std::expm1(budget * lipschitz) / lipschitz : budget;
  return growth * (step * curvature / 2.0 + rho / step);
}

// Euler steps a_1..a_n below (p_start, c_start); costs fall by budget/n each step.
std::vector<ActionSpec> undercut_chain(double w11, double w10, double p_start, double c_start, double budget, int n,
                                       double rho, bool& clamped) {
  std::vector<ActionSpec> out;
  out.reserve(n);
  const double step = budget / n;
  double p = p_start;
  for (int k = 1; k <= n; ++k) {
    const double d = p * w11 + (1.0 - p) * w10;
    if (d > 0.0) {
      p = clamp01(p - step / d + rho, clamped);
    } else {
      clamped = true;
      p = 0.0;
    }
    const double c = k == n ? c_start - budget : c_start - k * step;
    out.push_back({std::max(0.0, c), p});
  }
  return out;
}

void verify_chain(EulerChain& ch, const Contract& w) {
  const InducedGame game(w, ch.actions);
  const BrPath path = extremal_br_path(game, Extreme::MAX);
  ch.limit_index = path.limit;
  ch.limit_prob = ch.actions[path.limit].prob;
  ch.verified = path.converged && path.limit == ch.chain.back();
  ch.exact_path = path.path == ch.chain;
  if (!ch.exact_path) {
    std::size_t k = 0;
    while (k < path.path.size() && k < ch.chain.size() && path.path[k] == ch.chain[k]) ++k;
    ch.failed_step = k;
  }
}

void require_zero_failure_jpe(const Contract& w, const char* who) {
  w.validate();
  if (!zero_failure(w) || !(w.w11 >= w.w10))
    throw ModelError(std::string(who) + ": needs w01 = w00 = 0 and w11 >= w10");
}

}  // namespace

const char* to_string(Binding b) { return b == Binding::FULL_SUCCESS ? "FULL_SUCCESS" : "SHIRK_EQ"; }

OdeSolution pbar_closed_form(double w11, double w10, const ActionSpec& a0) {
  if (!(w10 >= 0.0) || !(w11 >= w10)) throw ModelError("pbar_closed_form: needs w11 >= w10 >= 0");
  OdeSolution s;
  s.a0 = a0;
  s.w11 = w11;
  s.w10 = w10;
  const double p0 = a0.prob, c0 = a0.cost;
  const double b = w11 - w10;
  s.t_zero = undercut_integral(w11, w10, p0);
  s.t_hat = std::min(c0, s.t_zero);
  if (c0 == 0.0) {
    s.p_end = p0;
  } else if (b == 0.0) {
    s.p_end = w10 > 0.0 ? std::max(0.0, p0 - c0 / w10) : 0.0;
  } else if (c0 >= s.t_zero) {
    s.p_end = 0.0;
  } else {
    // Larger root of b/2 p^2 + w10 p = t_zero - c0, in cancellation-free form.
    const double rest = s.t_zero - c0;
    const double root = std::sqrt(w10 * w10 + 2.0 * b * rest);
    s.p_end = std::min(p0, 2.0 * rest / (root + w10));
  }
  return s;
}

double shirk_branch_per_agent(double w11, double w10, double p) {
  return p * (p * (1.0 - w11) + (1.0 - p) * (1.0 - w10));
}

WorstCaseResult zero_failure_value(double w11, double w10, const ActionSet& A0) {
  require_known(A0);
  WorstCaseResult r;
  for (std::size_t i = 0; i < A0.known_count(); ++i) {
    const double p = pbar_closed_form(w11, w10, A0[i]).p_end;
    if (i == 0 || p > r.pbar) {
      r.pbar = p;
      r.a0_index = i;
    }
  }
  const double full = 1.0 - w11;
  if (w10 >= 1.0) {
    r.per_agent = full;
    r.binding = Binding::FULL_SUCCESS;
  } else {
    const double shirk = shirk_branch_per_agent(w11, w10, r.pbar);
    if (full < shirk) {
      r.per_agent = full;
      r.binding = Binding::FULL_SUCCESS;
    } else {
      r.per_agent = shirk;
      r.binding = Binding::SHIRK_EQ;
    }
  }
  r.total = 2.0 * r.per_agent;
  return r;
}

WorstCaseResult jpe_value(const Contract& w, const ActionSet& A0) {
  w.validate();
  if (classify(w).tag != ContractTag::JPE || !zero_failure(w) || !(w.w11 > w.w10))
    throw ModelError("jpe_value: needs a JPE contract with w01 = w00 = 0 and w11 > w10");
  return zero_failure_value(w.w11, w.w10, A0);
}

WorstCaseResult jpe_value_w00(const Contract& w, const ActionSet& A0) {
  w.validate();
  if (!(w.w11 > 0.0) || !(w.w00 > 0.0) || w.w10 != 0.0 || w.w01 != 0.0)
    throw ModelError("jpe_value_w00: needs w11 > 0, w00 > 0 and w10 = w01 = 0");
  require_known(A0);
  const double a = 0.5 * (w.w11 + w.w00);
  const double p_sing = w.w00 / (w.w11 + w.w00);
  // Antiderivative of p*w11 - (1-p)*w00, minimized at p_sing.
  auto h = [&](double p) { return a * p * p - w.w00 * p; };
  WorstCaseResult r;
  for (std::size_t i = 0; i < A0.known_count(); ++i) {
    const double p0 = A0[i].prob, c0 = A0[i].cost;
    double p_end = 0.0;
    bool singular = false;
    if (p0 > p_sing) {
      const double rest = h(p0) - c0;
      if (c0 == 0.0) {
        p_end = p0;
      } else if (rest <= h(p_sing)) {
        singular = true;
      } else {
        p_end = std::min(p0, (w.w00 + std::sqrt(w.w00 * w.w00 + 4.0 * a * rest)) / (2.0 * a));
      }
    } else {
      singular = true;
    }
    if (i == 0 || p_end > r.pbar) {
      r.pbar = p_end;
      r.a0_index = i;
      r.singular = singular;
    }
  }
  const double p = r.pbar;
  const double full = 1.0 - w.w11;
  const double shirk = p * p * (1.0 - w.w11) + p * (1.0 - p) - (1.0 - p) * (1.0 - p) * w.w00;
  if (full < shirk) {
    r.per_agent = full;
    r.binding = Binding::FULL_SUCCESS;
  } else {
    r.per_agent = shirk;
    r.binding = Binding::SHIRK_EQ;
  }
  r.total = 2.0 * r.per_agent;
  return r;
}

IpeOptimum ipe_optimal(const ActionSet& A0) {
  A0.require_assumption1();
  IpeOptimum best;
  bool found = false;
  for (std::size_t i = 0; i < A0.known_count(); ++i) {
    const ActionSpec& a = A0[i];
    if (!(a.prob > a.cost)) continue;
    const double w = std::sqrt(a.cost / a.prob);
    const double v = (a.prob - a.cost / w) * (1.0 - w);
    if (!found || v > best.per_agent) {
      found = true;
      best.w_star = w;
      best.a0_index = i;
      best.a0 = a;
      best.per_agent = v;
    }
  }
  best.total = 2.0 * best.per_agent;
  return best;
}

double rpe_fixed_point(const Contract& w, const ActionSet& A0, double eps) {
  auto image = [&](double p) {
    const double d = p * w.w11 + (1.0 - p) * w.w10;
    double t = 0.0;  // null action
    for (std::size_t i = 0; i < A0.known_count(); ++i) {
      const ActionSpec& a = A0[i];
      if (a.cost == 0.0) {
        t = std::max(t, a.prob);
      } else if (d > 0.0) {
        t = std::max(t, a.prob - a.cost / d);
      }
    }
    return std::min(1.0, t + eps);
  };
  // image(p) - p is strictly decreasing, nonnegative at 0 and nonpositive at 1.
  double lo = 0.0, hi = 1.0;
  if (image(lo) <= lo) return lo;
  if (image(hi) >= hi) return hi;
  constexpr int kMaxIter = 200;
  for (int it = 0; it < kMaxIter; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) return mid;
    if (image(mid) > mid) lo = mid;
    else hi = mid;
    if (hi - lo < 1e-15) return 0.5 * (lo + hi);
  }
  const double mid = 0.5 * (lo + hi);
  if (std::fabs(image(mid) - mid) > 1e-10) throw ConvergenceError("rpe_fixed_point: bisection did not converge");
  return mid;
}

WorstCaseResult rpe_value(const Contract& w, const ActionSet& A0) {
  w.validate();
  if (!zero_failure(w) || !(w.w11 < w.w10)) throw ModelError("rpe_value: needs w01 = w00 = 0 and w11 < w10");
  require_known(A0);
  WorstCaseResult r;
  r.pbar = rpe_fixed_point(w, A0, 0.0);
  r.per_agent = shirk_branch_per_agent(w.w11, w.w10, r.pbar);
  r.total = 2.0 * r.per_agent;
  r.binding = Binding::SHIRK_EQ;
  return r;
}

std::optional<double> euler_error_bound(const Contract& w, const ActionSpec& a0, int n) {
  require_zero_failure_jpe(w, "euler_error_bound");
  if (n < 1) throw ModelError("euler_error_bound: n must be at least 1");
  const OdeSolution s = pbar_closed_form(w.w11, w.w10, a0);
  return bound_from(w.w11, w.w10, s.t_hat, s.p_end, n);
}

EulerChain euler_adversary(const Contract& w, const ActionSpec& a0, int n, const EulerOptions& opts) {
  require_zero_failure_jpe(w, "euler_adversary");
  if (n < 1) throw ModelError("euler_adversary: n must be at least 1");
  const OdeSolution s = pbar_closed_form(w.w11, w.w10, a0);
  EulerChain ch;
  ch.step = s.t_hat / n;
  ch.rho = opts.rho.value_or(s.t_hat / (static_cast<double>(n) * n * (w.w11 + 1.0)));
  std::vector<ActionSpec> acts{a0};
  const auto chain = undercut_chain(w.w11, w.w10, a0.prob, a0.cost, s.t_hat, n, ch.rho, ch.clamped);
  acts.insert(acts.end(), chain.begin(), chain.end());
  ch.actions = ActionSet(std::move(acts), 1);
  for (std::size_t k = 0; k <= static_cast<std::size_t>(n); ++k) ch.chain.push_back(k);
  if (!opts.rho) ch.error_bound = bound_from(w.w11, w.w10, s.t_hat, s.p_end, n);
  verify_chain(ch, w);
  return ch;
}

EulerChain euler_adversary(const Contract& w, const ActionSet& A0, int n, const EulerOptions& opts) {
  require_zero_failure_jpe(w, "euler_adversary");
  require_known(A0);
  if (n < 1) throw ModelError("euler_adversary: n must be at least 1");

  // Anchor: largest p_end, then the curve that reaches zero at the lowest cost.
  std::size_t anchor = 0;
  OdeSolution best = pbar_closed_form(w.w11, w.w10, A0[0]);
  for (std::size_t i = 1; i < A0.known_count(); ++i) {
    const OdeSolution s = pbar_closed_form(w.w11, w.w10, A0[i]);
    const bool better = s.p_end > best.p_end ||
                        (s.p_end == best.p_end && s.a0.cost - s.t_zero < best.a0.cost - best.t_zero);
    if (better) {
      best = s;
      anchor = i;
    }
  }
  const ActionSet known = A0.known();
  const ActionSpec& a0 = A0[anchor];
  bool anchor_on_top = true;
  for (std::size_t i = 0; i < known.size(); ++i)
    if (more_productive(known[i], a0)) anchor_on_top = false;

  EulerChain ch;
  std::vector<ActionSpec> acts = known.actions();
  double p_start = a0.prob, c_start = a0.cost, budget = best.t_hat;
  if (anchor_on_top) {
    ch.chain.push_back(known.order().back());
  } else {
    const double lift = undercut_integral(w.w11, w.w10, 1.0) - best.t_zero;
    p_start = 1.0;
    c_start = a0.cost + lift;
    budget += lift;
    ch.chain.push_back(acts.size());
    acts.push_back({c_start, 1.0});
  }
  ch.step = budget / n;
  ch.rho = opts.rho.value_or(budget / (static_cast<double>(n) * n * (w.w11 + 1.0)));
  const auto chain = undercut_chain(w.w11, w.w10, p_start, c_start, budget, n, ch.rho, ch.clamped);
  for (const auto& a : chain) {
    ch.chain.push_back(acts.size());
    acts.push_back(a);
  }
  ch.actions = ActionSet(std::move(acts), known.size());
  if (!opts.rho) ch.error_bound = bound_from(w.w11, w.w10, budget, best.p_end, n);
  verify_chain(ch, w);
  return ch;
}

IpeAdversary ipe_adversary(double w, const ActionSet& A0, double eps) {
  if (!(w > 0.0)) throw ModelError("ipe_adversary: wage must be positive");
  if (!(eps > 0.0)) throw ModelError("ipe_adversary: eps must be positive");
  require_known(A0);
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < A0.known_count(); ++i) top = std::max(top, A0[i].prob - A0[i].cost / w);
  IpeAdversary out;
  out.a_star = {0.0, clamp01(top + eps, out.clamped)};
  out.actions = A0.known().with_appended({out.a_star});
  const InducedGame game(Contract{w, w, 0.0, 0.0}, out.actions);
  const auto eqs = enumerate_equilibria(to_bimatrix(game), false);
  const std::size_t star = out.actions.size() - 1;
  out.unique_shirk_eq = eqs.size() == 1 && eqs.front().pure_pair() == std::make_pair(star, star);
  return out;
}

namespace {

// Principal-best equilibrium for small sets, maximal equilibrium otherwise.
void score_witness(Witness& wit, const Contract& w, std::size_t intended) {
  const InducedGame game(w, wit.actions);
  if (wit.actions.size() <= kMixedCap) {
    const auto eqs = enumerate_equilibria(game, true);
    const auto rep = select_and_value(game, eqs, Selection::PRINCIPAL_BEST);
    wit.game_per_agent = rep.principal_per_agent;
    const auto pair = rep.selected.pure_pair();
    wit.verified = pair && pair->first == intended && pair->second == intended;
    wit.limit_prob = pair ? wit.actions[pair->first].prob : std::numeric_limits<double>::quiet_NaN();
  } else {
    const BrPath path = extremal_br_path(game, Extreme::MAX);
    wit.limit_prob = wit.actions[path.limit].prob;
    wit.game_per_agent = symmetric_principal_total(w, wit.limit_prob) / 2.0;
    wit.verified = path.converged && path.limit == intended;
  }
}

}  // namespace

std::optional<Witness> build_witness(const Contract& w, const ActionSet& A0, const WorstCaseResult& r, double eps) {
  if (!(eps > 0.0)) throw ModelError("build_witness: eps must be positive");
  const ActionSet known = A0.known();
  Witness wit;
  if (zero_failure(w) && w.w11 >= w.w10) {
    if (r.binding == Binding::FULL_SUCCESS) {
      wit.kind = "dominant_full_success";
      wit.eps = 0.0;
      wit.actions = known.with_appended({{0.0, 1.0}});
      score_witness(wit, w, wit.actions.size() - 1);
      return wit;
    }
    if (w.w11 == w.w10) {
      if (w.w10 == 0.0) {
        wit.kind = "null_action";
        wit.eps = 0.0;
        wit.actions = known.with_appended({{0.0, 0.0}});
        score_witness(wit, w, wit.actions.size() - 1);
        return wit;
      }
      const IpeAdversary adv = ipe_adversary(w.w10, known, eps);
      wit.kind = "ipe_undercut";
      wit.eps = eps;
      wit.clamped = adv.clamped;
      wit.actions = adv.actions;
      score_witness(wit, w, wit.actions.size() - 1);
      return wit;
    }
    // Budget is at most cost + lift <= cost + 1; pick n so the step is below eps.
    double budget = 0.0;
    for (std::size_t i = 0; i < known.size(); ++i) budget = std::max(budget, known[i].cost + 1.0);
    constexpr int kMaxSteps = 20000;
    const int n = static_cast<int>(std::clamp(std::ceil(budget / eps), 1.0, static_cast<double>(kMaxSteps)));
    const EulerChain ch = euler_adversary(w, known, n);
    wit.kind = "euler_chain";
    wit.eps = ch.step;
    wit.clamped = ch.clamped;
    wit.actions = ch.actions;
    wit.verified = ch.verified;
    wit.limit_prob = ch.limit_prob;
    wit.game_per_agent = symmetric_principal_total(w, ch.limit_prob) / 2.0;
    return wit;
  }
  if (zero_failure(w) && w.w11 < w.w10) {
    const double p = rpe_fixed_point(w, known, eps);
    wit.kind = "rpe_fixed_point";
    wit.eps = eps;
    wit.actions = known.with_appended({{0.0, p}, {0.0, 0.0}});
    score_witness(wit, w, known.size());
    return wit;
  }
  return std::nullopt;
}

}  // namespace robustpay
