#include <algorithm>
#include <cmath>

#include "robustpay/checks.hpp"
#include "robustpay/worstcase.hpp"

namespace robustpay::checks {

Rng::Rng(std::uint64_t seed) : state_(seed) {}

// splitmix64
std::uint64_t Rng::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform(double lo, double hi) {
  const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

int Rng::integer(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(next() % span);
}

namespace {

template <class Denominator>
double rk4(const Denominator& den, double p0, double budget, long steps) {
  if (budget <= 0.0) return p0;
  const double h = budget / static_cast<double>(steps);
  double p = p0;
  auto slope = [&](double q, bool& stop) {
    const double d = den(q);
    if (!(q > 0.0) || !(d > 0.0)) {
      stop = true;
      return 0.0;
    }
    return -1.0 / d;
  };
  for (long k = 0; k < steps; ++k) {
    bool stop = false;
    const double k1 = slope(p, stop);
    const double k2 = slope(p + 0.5 * h * k1, stop);
    const double k3 = slope(p + 0.5 * h * k2, stop);
    const double k4 = slope(p + h * k3, stop);
    if (stop) return 0.0;
    p += h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
    if (p <= 0.0) return 0.0;
  }
  return p;
}

}  // namespace

double ode_oracle_p_end(double w11, double w10, const ActionSpec& a0, long steps) {
  return rk4([&](double q) { return q * w11 + (1.0 - q) * w10; }, a0.prob, a0.cost, steps);
}

double ode_oracle_w00(double w11, double w00, const ActionSpec& a0, long steps) {
  return rk4([&](double q) { return q * w11 - (1.0 - q) * w00; }, a0.prob, a0.cost, steps);
}

JpeInstance random_jpe_instance(Rng& rng) {
  JpeInstance inst;
  inst.w.w11 = rng.uniform(0.02, 1.0);
  inst.w.w10 = rng.uniform(0.0, inst.w.w11);
  std::vector<ActionSpec> acts;
  const int known = rng.integer(1, 3);
  for (int k = 0; k < known; ++k) {
    const double p = rng.uniform(0.1, 1.0);
    acts.push_back({rng.uniform(0.01, 0.99) * p, p});
  }
  const int extra = rng.integer(0, 6 - known);
  for (int k = 0; k < extra; ++k) {
    if (rng.uniform(0.0, 1.0) < 0.5) {
      acts.push_back({rng.uniform(0.0, 0.5), rng.uniform(0.0, 1.0)});
    } else {
      // Near the undercut curve of a random known action.
      const ActionSpec a0 = acts[rng.integer(0, known - 1)];
      const OdeSolution s = pbar_closed_form(inst.w.w11, inst.w.w10, a0);
      const double t = rng.uniform(0.0, s.t_hat);
      const double p_t = pbar_closed_form(inst.w.w11, inst.w.w10, {t, a0.prob}).p_end;
      const double p = std::clamp(p_t + rng.uniform(-0.05, 0.05), 0.0, 1.0);
      acts.push_back({std::max(0.0, a0.cost - t), p});
    }
  }
  inst.actions = ActionSet(std::move(acts), static_cast<std::size_t>(known));
  return inst;
}

std::vector<JpeInstance> suite7_instances(std::uint64_t seed) {
  Rng rng(seed ^ 0x7777ULL);
  std::vector<JpeInstance> out;
  for (int k = 0; k < 500; ++k) out.push_back(random_jpe_instance(rng));
  return out;
}

}  // namespace robustpay::checks
