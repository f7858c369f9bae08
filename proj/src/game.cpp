#include "robustpay/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

namespace robustpay {

InducedGame::InducedGame(Contract contract, ActionSet actions)
    : contract_(contract), actions_(std::move(actions)) {
  contract_.validate();
  success_wage_.resize(actions_.size());
  failure_wage_.resize(actions_.size());
  for (std::size_t j = 0; j < actions_.size(); ++j) {
    const double q = actions_[j].prob;
    success_wage_[j] = q * contract_.w11 + (1.0 - q) * contract_.w10;
    failure_wage_[j] = q * contract_.w01 + (1.0 - q) * contract_.w00;
  }
}

std::vector<std::vector<double>> InducedGame::payoff_matrix() const {
  std::vector<std::vector<double>> m(size(), std::vector<double>(size()));
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < size(); ++j) m[i][j] = payoff(i, j);
  return m;
}

InducedGame induce_game(const Contract& contract, const ActionSet& actions) { return InducedGame(contract, actions); }

const char* to_string(Modularity m) {
  switch (m) {
    case Modularity::SUPERMODULAR: return "SUPERMODULAR";
    case Modularity::SUBMODULAR: return "SUBMODULAR";
    case Modularity::BOTH: return "BOTH";
    case Modularity::NEITHER: return "NEITHER";
  }
  return "NEITHER";
}

Modularity check_modularity(const InducedGame& game) {
  const auto& ord = game.actions().order();
  const std::size_t n = ord.size();
  bool increasing = true;
  bool decreasing = true;
  for (std::size_t hi = 1; hi < n; ++hi) {
    for (std::size_t lo = 0; lo < hi; ++lo) {
      const std::size_t ih = ord[hi], il = ord[lo];
      for (std::size_t hj = 1; hj < n; ++hj) {
        for (std::size_t lj = 0; lj < hj; ++lj) {
          const std::size_t jh = ord[hj], jl = ord[lj];
          const double d = (game.payoff(ih, jh) - game.payoff(il, jh)) - (game.payoff(ih, jl) - game.payoff(il, jl));
          if (d < -kModularityTol) increasing = false;
          if (d > kModularityTol) decreasing = false;
        }
      }
      if (!increasing && !decreasing) return Modularity::NEITHER;
    }
  }
  if (increasing && decreasing) return Modularity::BOTH;
  return increasing ? Modularity::SUPERMODULAR : Modularity::SUBMODULAR;
}

std::size_t best_response(const InducedGame& game, std::size_t opponent, Extreme pick) {
  const std::size_t n = game.size();
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) best = std::max(best, game.payoff(i, opponent));
  const auto& ord = game.actions().order();
  if (pick == Extreme::MAX) {
    for (std::size_t r = n; r-- > 0;)
      if (game.payoff(ord[r], opponent) >= best - kTieTol) return ord[r];
  } else {
    for (std::size_t r = 0; r < n; ++r)
      if (game.payoff(ord[r], opponent) >= best - kTieTol) return ord[r];
  }
  return ord.back();
}

BrPath extremal_br_path(const InducedGame& game, Extreme from) {
  BrPath out;
  std::size_t cur = from == Extreme::MAX ? game.actions().max_index() : game.actions().min_index();
  std::vector<bool> seen(game.size(), false);
  out.path.push_back(cur);
  seen[cur] = true;
  for (;;) {
    const std::size_t next = best_response(game, cur, from);
    if (next == cur) {
      out.converged = true;
      break;
    }
    if (seen[next]) break;
    seen[next] = true;
    out.path.push_back(next);
    cur = next;
  }
  out.limit = cur;
  return out;
}

PairedLimit paired_br_limit(const InducedGame& game) {
  PairedLimit out;
  std::size_t h = game.actions().max_index();
  std::size_t l = game.actions().min_index();
  std::set<std::pair<std::size_t, std::size_t>> seen{{h, l}};
  for (;;) {
    const std::size_t nh = best_response(game, l, Extreme::MAX);
    const std::size_t nl = best_response(game, h, Extreme::MIN);
    if (nh == h && nl == l) {
      out.converged = true;
      break;
    }
    ++out.steps;
    h = nh;
    l = nl;
    if (!seen.insert({h, l}).second) break;
  }
  out.high = h;
  out.low = l;
  return out;
}

Bimatrix to_bimatrix(const InducedGame& game) {
  Bimatrix g;
  g.a = game.payoff_matrix();
  g.b.assign(game.size(), std::vector<double>(game.size()));
  for (std::size_t i = 0; i < game.size(); ++i)
    for (std::size_t j = 0; j < game.size(); ++j) g.b[i][j] = g.a[j][i];
  return g;
}

Profile Profile::pure(std::size_t n_rows, std::size_t n_cols, std::size_t i, std::size_t j) {
  Profile s;
  s.x.assign(n_rows, 0.0);
  s.y.assign(n_cols, 0.0);
  s.x[i] = 1.0;
  s.y[j] = 1.0;
  return s;
}

std::optional<std::pair<std::size_t, std::size_t>> Profile::pure_pair() const {
  auto find_one = [](const std::vector<double>& v) -> std::optional<std::size_t> {
    for (std::size_t k = 0; k < v.size(); ++k)
      if (v[k] == 1.0) return k;
    return std::nullopt;
  };
  const auto i = find_one(x), j = find_one(y);
  if (i && j) return std::make_pair(*i, *j);
  return std::nullopt;
}

std::pair<double, double> expected_payoffs(const Bimatrix& g, const Profile& s) {
  double u1 = 0.0, u2 = 0.0;
  for (std::size_t i = 0; i < g.rows(); ++i) {
    if (s.x[i] == 0.0) continue;
    for (std::size_t j = 0; j < g.cols(); ++j) {
      if (s.y[j] == 0.0) continue;
      u1 += s.x[i] * s.y[j] * g.a[i][j];
      u2 += s.x[i] * s.y[j] * g.b[i][j];
    }
  }
  return {u1, u2};
}

bool is_equilibrium(const Bimatrix& g, const Profile& s, double tol) {
  const auto [u1, u2] = expected_payoffs(g, s);
  for (std::size_t i = 0; i < g.rows(); ++i) {
    double dev = 0.0;
    for (std::size_t j = 0; j < g.cols(); ++j) dev += s.y[j] * g.a[i][j];
    if (dev > u1 + tol) return false;
  }
  for (std::size_t j = 0; j < g.cols(); ++j) {
    double dev = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i) dev += s.x[i] * g.b[i][j];
    if (dev > u2 + tol) return false;
  }
  return true;
}

std::vector<Profile> enumerate_equilibria(const Bimatrix& g, bool mixed, std::size_t cap) {
  const std::size_t m = g.rows(), n = g.cols();
  if (mixed && std::max(m, n) > cap)
    throw ModelError("mixed equilibrium enumeration is capped at " + std::to_string(cap) + " actions");
  std::vector<Profile> out;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      auto s = Profile::pure(m, n, i, j);
      if (is_equilibrium(g, s)) out.push_back(std::move(s));
    }
  if (!mixed) return out;

  // Two-action supports on both sides; in nondegenerate games every other
  // support pair with a mixed component is empty.
  constexpr double kDenTol = 1e-14;
  constexpr double kInterior = 1e-12;
  for (std::size_t r1 = 0; r1 < m; ++r1)
    for (std::size_t r2 = r1 + 1; r2 < m; ++r2)
      for (std::size_t c1 = 0; c1 < n; ++c1)
        for (std::size_t c2 = c1 + 1; c2 < n; ++c2) {
          const double den_x = g.b[r1][c1] - g.b[r2][c1] - g.b[r1][c2] + g.b[r2][c2];
          const double den_y = g.a[r1][c1] - g.a[r1][c2] - g.a[r2][c1] + g.a[r2][c2];
          if (std::fabs(den_x) < kDenTol || std::fabs(den_y) < kDenTol) continue;
          const double x = (g.b[r2][c2] - g.b[r2][c1]) / den_x;
          const double y = (g.a[r2][c2] - g.a[r1][c2]) / den_y;
          if (!(x > kInterior && x < 1.0 - kInterior && y > kInterior && y < 1.0 - kInterior)) continue;
          Profile s;
          s.x.assign(m, 0.0);
          s.y.assign(n, 0.0);
          s.x[r1] = x;
          s.x[r2] = 1.0 - x;
          s.y[c1] = y;
          s.y[c2] = 1.0 - y;
          if (is_equilibrium(g, s)) out.push_back(std::move(s));
        }
  return out;
}

std::vector<Profile> enumerate_equilibria(const InducedGame& game, bool mixed, std::size_t cap) {
  if (mixed && game.size() > cap)
    throw ModelError("mixed equilibrium enumeration is capped at " + std::to_string(cap) + " actions");
  return enumerate_equilibria(to_bimatrix(game), mixed, cap);
}

const char* to_string(Selection s) {
  return s == Selection::PRINCIPAL_BEST ? "PRINCIPAL_BEST" : "PESSIMISTIC_PARETO";
}

namespace {

double expected_wage(const Contract& w, double own, double other) {
  return own * other * w.w11 + own * (1.0 - other) * w.w10 + (1.0 - own) * other * w.w01 +
         (1.0 - own) * (1.0 - other) * w.w00;
}

double success_prob(const ActionSet& actions, const std::vector<double>& mix) {
  double p = 0.0;
  for (std::size_t k = 0; k < mix.size(); ++k) p += mix[k] * actions[k].prob;
  return p;
}

}  // namespace

double principal_total(const InducedGame& game, const Profile& s) {
  const double p1 = success_prob(game.actions(), s.x);
  const double p2 = success_prob(game.actions(), s.y);
  const Contract& w = game.contract();
  return p1 + p2 - expected_wage(w, p1, p2) - expected_wage(w, p2, p1);
}

double symmetric_principal_total(const Contract& w, double p) { return 2.0 * (p - expected_wage(w, p, p)); }

EquilibriumReport select_and_value(const InducedGame& game, const std::vector<Profile>& equilibria, Selection rule) {
  if (equilibria.empty()) throw ModelError("select_and_value: empty equilibrium list");
  EquilibriumReport rep;
  rep.equilibria = equilibria;
  rep.selection = rule;

  std::vector<double> totals;
  for (const auto& s : equilibria) totals.push_back(principal_total(game, s));

  std::vector<bool> candidate(equilibria.size(), true);
  if (rule == Selection::PESSIMISTIC_PARETO) {
    const Bimatrix g = to_bimatrix(game);
    std::vector<std::pair<double, double>> u;
    for (const auto& s : equilibria) u.push_back(expected_payoffs(g, s));
    for (std::size_t k = 0; k < u.size(); ++k)
      for (std::size_t l = 0; l < u.size(); ++l)
        if (u[l].first > u[k].first + kParetoTol && u[l].second > u[k].second + kParetoTol) {
          candidate[k] = false;
          break;
        }
  }

  std::optional<std::size_t> pick;
  for (std::size_t k = 0; k < equilibria.size(); ++k) {
    if (!candidate[k]) continue;
    if (!pick) {
      pick = k;
    } else if (rule == Selection::PRINCIPAL_BEST ? totals[k] > totals[*pick] : totals[k] < totals[*pick]) {
      pick = k;
    }
  }
  rep.selected_index = *pick;
  rep.selected = equilibria[*pick];
  rep.principal_total = totals[*pick];
  rep.principal_per_agent = rep.principal_total / 2.0;
  return rep;
}

}  // namespace robustpay
