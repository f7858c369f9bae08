#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace robustpay {

// Bad input or a violated model assumption. The CLI maps this to exit 2.
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical routine failed to converge. The CLI maps this to exit 3.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ActionSpec {
  double cost = 0.0;
  double prob = 0.0;
};

bool operator==(const ActionSpec& a, const ActionSpec& b);

// Strict part of the productivity order: higher prob wins, then lower cost.
// Returns false for identical specs; callers break those ties by index.
bool more_productive(const ActionSpec& a, const ActionSpec& b);

class ActionSet {
 public:
  ActionSet() = default;
  ActionSet(std::vector<ActionSpec> actions, std::size_t known_count);

  const std::vector<ActionSpec>& actions() const { return actions_; }
  std::size_t size() const { return actions_.size(); }
  std::size_t known_count() const { return known_count_; }
  const ActionSpec& operator[](std::size_t i) const { return actions_[i]; }

  // Indices sorted from the order-smallest to the order-largest action.
  // Among identical specs the lower index ranks higher.
  const std::vector<std::size_t>& order() const { return order_; }
  // rank()[i] is the position of action i inside order().
  const std::vector<std::size_t>& rank() const { return rank_; }
  std::size_t max_index() const { return order_.back(); }
  std::size_t min_index() const { return order_.front(); }

  // True when action i ranks at or above action j.
  bool weakly_above(std::size_t i, std::size_t j) const { return rank_[i] >= rank_[j]; }

  ActionSet known() const;
  ActionSet with_appended(const std::vector<ActionSpec>& extra) const;

  // Throws ModelError unless the known prefix is non-empty, every known action
  // is costly and at least one known action has positive surplus.
  void require_assumption1() const;

 private:
  std::vector<ActionSpec> actions_;
  std::size_t known_count_ = 0;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> rank_;
};

// Builds an A0 set where every action is known.
ActionSet make_known(std::vector<ActionSpec> actions);

struct Contract {
  double w11 = 0.0;
  double w10 = 0.0;
  double w01 = 0.0;
  double w00 = 0.0;

  double base() const { return w10; }
  double bonus() const { return w11 - w10; }
  // Wage for own outcome yi and other's outcome yj.
  double wage(int yi, int yj) const;
  void validate() const;
};

bool operator==(const Contract& a, const Contract& b);

enum class ContractTag { IPE, RPE, JPE, OTHER };

struct AffineCoeffs {
  double alpha0 = 0.0;
  double alpha_i = 0.0;
  double alpha_j = 0.0;
};

struct ContractClass {
  ContractTag tag = ContractTag::OTHER;
  bool affine = false;
  std::optional<AffineCoeffs> coeffs;
};

const char* to_string(ContractTag tag);

inline constexpr double kAffineTol = 1e-9;

// Exact comparisons on the wages as given.
ContractClass classify(const Contract& w);
// Same classification with every comparison relaxed by tol.
ContractClass classify(const Contract& w, double tol);

Contract reduce_failure_wages(const Contract& w);

// JPE with w10 = w_star - eps and p0*w11 + (1-p0)*w10 = w_star.
Contract calibrate_jpe(double w_star, const ActionSpec& a0, double eps);

}  // namespace robustpay
