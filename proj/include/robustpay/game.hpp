#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "robustpay/model.hpp"

namespace robustpay {

// Two-agent symmetric game induced by a contract on an action set.
class InducedGame {
 public:
  InducedGame(Contract contract, ActionSet actions);

  const Contract& contract() const { return contract_; }
  const ActionSet& actions() const { return actions_; }
  std::size_t size() const { return actions_.size(); }

  // Expected utility of playing `own` against an opponent playing `other`.
  double payoff(std::size_t own, std::size_t other) const {
    const ActionSpec& a = actions_[own];
    return a.prob * success_wage_[other] + (1.0 - a.prob) * failure_wage_[other] - a.cost;
  }

  std::vector<std::vector<double>> payoff_matrix() const;

 private:
  Contract contract_;
  ActionSet actions_;
  // Expected wage after own success (failure) given the opponent's action.
  std::vector<double> success_wage_;
  std::vector<double> failure_wage_;
};

InducedGame induce_game(const Contract& contract, const ActionSet& actions);

enum class Modularity { SUPERMODULAR, SUBMODULAR, BOTH, NEITHER };
const char* to_string(Modularity m);

inline constexpr double kModularityTol = 1e-12;
Modularity check_modularity(const InducedGame& game);

enum class Extreme { MAX, MIN };

// Payoff gaps within this tolerance count as ties in best responses.
inline constexpr double kTieTol = 1e-12;

// Maximal (MAX) or minimal (MIN) best response to a pure opponent action.
std::size_t best_response(const InducedGame& game, std::size_t opponent, Extreme pick);

struct BrPath {
  std::size_t limit = 0;
  std::vector<std::size_t> path;  // includes the start and the limit
  bool converged = false;          // false when a cycle was found
};

BrPath extremal_br_path(const InducedGame& game, Extreme from);

// Iterates (h, l) -> (maxBR(l), minBR(h)) from (a_max, a_min).
struct PairedLimit {
  std::size_t high = 0;
  std::size_t low = 0;
  std::size_t steps = 0;
  bool converged = false;
};

PairedLimit paired_br_limit(const InducedGame& game);

// General bimatrix game: row payoff a[i][j], column payoff b[i][j].
struct Bimatrix {
  std::vector<std::vector<double>> a;
  std::vector<std::vector<double>> b;
  std::size_t rows() const { return a.size(); }
  std::size_t cols() const { return a.empty() ? 0 : a.front().size(); }
};

Bimatrix to_bimatrix(const InducedGame& game);

struct Profile {
  std::vector<double> x;  // row player
  std::vector<double> y;  // column player

  static Profile pure(std::size_t n_rows, std::size_t n_cols, std::size_t i, std::size_t j);
  // Action pair when both strategies are degenerate.
  std::optional<std::pair<std::size_t, std::size_t>> pure_pair() const;
};

inline constexpr double kEquilibriumTol = 1e-9;
inline constexpr std::size_t kMixedCap = 12;

bool is_equilibrium(const Bimatrix& g, const Profile& s, double tol = kEquilibriumTol);
std::pair<double, double> expected_payoffs(const Bimatrix& g, const Profile& s);

// Pure equilibria, plus mixed ones with two-action supports for both players.
std::vector<Profile> enumerate_equilibria(const Bimatrix& g, bool mixed, std::size_t cap = kMixedCap);
std::vector<Profile> enumerate_equilibria(const InducedGame& game, bool mixed, std::size_t cap = kMixedCap);

enum class Selection { PRINCIPAL_BEST, PESSIMISTIC_PARETO };
const char* to_string(Selection s);

inline constexpr double kParetoTol = 1e-12;

struct EquilibriumReport {
  std::vector<Profile> equilibria;
  Selection selection = Selection::PRINCIPAL_BEST;
  std::size_t selected_index = 0;
  Profile selected;
  double principal_per_agent = 0.0;
  double principal_total = 0.0;
};

// Sum over both agents of E[y_i - w(y_i, y_j)].
double principal_total(const InducedGame& game, const Profile& s);
// Same quantity when both agents play a common action with success prob p.
double symmetric_principal_total(const Contract& w, double p);

EquilibriumReport select_and_value(const InducedGame& game, const std::vector<Profile>& equilibria, Selection rule);

}  // namespace robustpay
