#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "robustpay/model.hpp"

namespace robustpay::checks {

// Deterministic uniform draws; the stdlib distributions are not portable.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  double uniform(double lo, double hi);
  int integer(int lo, int hi);  // inclusive range

 private:
  std::uint64_t state_;
  std::uint64_t next();
};

// Fixed-step RK4 integration of p' = -1/(p*w11 + (1-p)*w10) over t in
// [0, c0]. Returns 0 once the path (or a stage) reaches p <= 0.
double ode_oracle_p_end(double w11, double w10, const ActionSpec& a0, long steps);

// Same integration for p' = -1/(p*w11 - (1-p)*w00). Stops at the first step
// where the denominator is no longer positive and reports p = 0 there.
double ode_oracle_w00(double w11, double w00, const ActionSpec& a0, long steps);

struct JpeInstance {
  Contract w;
  ActionSet actions;  // known prefix is A0
};

// Random JPE with zero failure wages and 1..3 surplus-positive known actions,
// padded to at most six actions; some unknown actions sit near the undercut
// curve of a known action.
JpeInstance random_jpe_instance(Rng& rng);
std::vector<JpeInstance> suite7_instances(std::uint64_t seed);

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
};

inline constexpr int kCriteria = 15;

CriterionResult run_criterion(int id, std::uint64_t seed);
std::vector<CriterionResult> run_acceptance(std::uint64_t seed);

}  // namespace robustpay::checks
