#include "robustpay/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace robustpay {

bool operator==(const ActionSpec& a, const ActionSpec& b) {
  return a.cost == b.cost && a.prob == b.prob;
}

bool more_productive(const ActionSpec& a, const ActionSpec& b) {
  if (a.prob != b.prob) return a.prob > b.prob;
  return a.cost < b.cost;
}

ActionSet::ActionSet(std::vector<ActionSpec> actions, std::size_t known_count)
    : actions_(std::move(actions)), known_count_(known_count) {
  if (actions_.empty()) throw ModelError("action set is empty");
  if (known_count_ > actions_.size()) throw ModelError("known count exceeds number of actions");
  for (const auto& a : actions_) {
    if (!std::isfinite(a.cost) || !std::isfinite(a.prob)) throw ModelError("action has non-finite cost or prob");
    if (a.cost < 0.0) throw ModelError("action cost must be nonnegative");
    if (a.prob < 0.0 || a.prob > 1.0) throw ModelError("action prob must lie in [0,1]");
  }
  order_.resize(actions_.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::stable_sort(order_.begin(), order_.end(), [&](std::size_t i, std::size_t j) {
    if (more_productive(actions_[j], actions_[i])) return true;
    if (more_productive(actions_[i], actions_[j])) return false;
    return i > j;
  });
  rank_.resize(actions_.size());
  for (std::size_t r = 0; r < order_.size(); ++r) rank_[order_[r]] = r;
}

ActionSet ActionSet::known() const {
  return ActionSet(std::vector<ActionSpec>(actions_.begin(), actions_.begin() + known_count_), known_count_);
}

ActionSet ActionSet::with_appended(const std::vector<ActionSpec>& extra) const {
  auto all = actions_;
  all.insert(all.end(), extra.begin(), extra.end());
  return ActionSet(std::move(all), known_count_);
}

void ActionSet::require_assumption1() const {
  if (known_count_ == 0) throw ModelError("model assumption violated: no known actions");
  bool surplus = false;
  for (std::size_t i = 0; i < known_count_; ++i) {
    if (actions_[i].cost <= 0.0) throw ModelError("model assumption violated: known action with zero cost");
    if (actions_[i].prob - actions_[i].cost > 0.0) surplus = true;
  }
  if (!surplus) throw ModelError("model assumption violated: no known action with prob > cost");
}

ActionSet make_known(std::vector<ActionSpec> actions) {
  const auto n = actions.size();
  return ActionSet(std::move(actions), n);
}

double Contract::wage(int yi, int yj) const {
  if (yi) return yj ? w11 : w10;
  return yj ? w01 : w00;
}

void Contract::validate() const {
  for (double v : {w11, w10, w01, w00}) {
    if (!std::isfinite(v)) throw ModelError("contract wage is not finite");
    if (v < 0.0) throw ModelError("limited liability violated: negative wage");
  }
}

bool operator==(const Contract& a, const Contract& b) {
  return a.w11 == b.w11 && a.w10 == b.w10 && a.w01 == b.w01 && a.w00 == b.w00;
}

const char* to_string(ContractTag tag) {
  switch (tag) {
    case ContractTag::IPE: return "IPE";
    case ContractTag::RPE: return "RPE";
    case ContractTag::JPE: return "JPE";
    case ContractTag::OTHER: return "OTHER";
  }
  return "OTHER";
}

namespace {

// -1, 0 or +1 for a vs b with |a-b| <= tol treated as equal.
int cmp(double a, double b, double tol) {
  if (a > b + tol) return 1;
  if (a < b - tol) return -1;
  return 0;
}

ContractClass classify_impl(const Contract& w, double tol) {
  ContractClass out;
  const int top = cmp(w.w11, w.w10, tol);
  const int bottom = cmp(w.w01, w.w00, tol);
  if (top == 0 && bottom == 0) {
    out.tag = ContractTag::IPE;
  } else if (top <= 0 && bottom <= 0) {
    out.tag = ContractTag::RPE;
  } else if (top >= 0 && bottom >= 0) {
    out.tag = ContractTag::JPE;
  } else {
    out.tag = ContractTag::OTHER;
  }

  AffineCoeffs c{w.w00, w.w10 - w.w00, w.w01 - w.w00};
  const double affine_tol = std::max(tol, kAffineTol);
  const bool identity = std::fabs(w.w11 - (w.w10 + w.w01 - w.w00)) <= affine_tol;
  if (identity && c.alpha_i >= -tol && c.alpha_j >= -tol) {
    out.affine = true;
    out.coeffs = c;
  }
  return out;
}

}  // namespace

ContractClass classify(const Contract& w) { return classify_impl(w, 0.0); }

ContractClass classify(const Contract& w, double tol) { return classify_impl(w, tol); }

Contract reduce_failure_wages(const Contract& w) {
  Contract r = w;
  if (w.w11 >= w.w01) {
    r.w11 = w.w11 - w.w01;
    r.w01 = 0.0;
  } else {
    r.w01 = w.w01 - w.w11;
    r.w11 = 0.0;
  }
  if (w.w10 >= w.w00) {
    r.w10 = w.w10 - w.w00;
    r.w00 = 0.0;
  } else {
    r.w00 = w.w00 - w.w10;
    r.w10 = 0.0;
  }
  return r;
}

Contract calibrate_jpe(double w_star, const ActionSpec& a0, double eps) {
  if (!(eps > 0.0)) throw ModelError("calibrate_jpe: eps must be positive");
  if (!(eps < w_star)) throw ModelError("calibrate_jpe: eps must be below w_star");
  if (w_star > 1.0) throw ModelError("calibrate_jpe: w_star must not exceed 1");
  if (!(a0.prob > 0.0)) throw ModelError("calibrate_jpe: calibration action has zero success probability");
  Contract w;
  w.w10 = w_star - eps;
  w.w11 = (w_star - (1.0 - a0.prob) * w.w10) / a0.prob;
  return w;
}

}  // namespace robustpay
