#include "robustpay/cli.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "robustpay/checks.hpp"
#include "robustpay/extensions.hpp"
#include "robustpay/io.hpp"

#ifndef ROBUSTPAY_VERSION
#define ROBUSTPAY_VERSION "0.0.0"
#endif

namespace robustpay::cli {

using io::Json;

namespace {

// Witness action lists longer than this are summarized by their size and
// refused by --dump-game, whose payoff matrix is dense.
constexpr std::size_t kMaxListedActions = 200;
constexpr int kDefaultChainSteps = 100;

bool zero_failure(const Contract& w) { return w.w01 == 0.0 && w.w00 == 0.0; }

std::string fmt(double v) { return io::format_number(v); }

struct Result {
  Json json;
  std::optional<io::Table> table;
  int status = kExitOk;
};

Json effective_config(const RunConfig& cfg, const Json& input) {
  Json c{{"verb", cfg.verb}, {"seed", cfg.seed}};
  if (cfg.format) c["format"] = *cfg.format == Format::CSV ? "csv" : "json";
  if (cfg.grid_step) c["grid_step"] = *cfg.grid_step;
  if (cfg.refine) c["refine"] = *cfg.refine;
  if (cfg.n) c["n"] = *cfg.n;
  if (cfg.eps) c["eps"] = *cfg.eps;
  if (cfg.mu) c["mu"] = *cfg.mu;
  c["input"] = input;
  return c;
}

double pick_double(const std::optional<double>& flag, const Json& in, const char* key, double fallback,
                   const std::string& where) {
  if (flag) return *flag;
  return io::get_number_or(in, key, fallback, where);
}

int pick_int(const std::optional<int>& flag, const Json& in, const char* key, int fallback, const std::string& where) {
  if (flag) return *flag;
  const double v = io::get_number_or(in, key, fallback, where);
  if (v != std::floor(v) || std::fabs(v) > 1e9) throw ModelError(where + ": field '" + std::string(key) + "' must be an integer");
  return static_cast<int>(v);
}

// ---- evaluate ----

struct Evaluation {
  Contract used;
  std::string method;
  bool upper_bound = false;
  WorstCaseResult r;
};

Evaluation evaluate_contract(const Contract& w, const ActionSet& A0) {
  Evaluation ev{w, "", false, {}};
  Contract c = w;
  if (!zero_failure(c) && !(c.w10 == 0.0 && c.w01 == 0.0 && c.w00 > 0.0 && c.w11 > 0.0)) {
    // Failure wages never raise the worst case; the reduced contract bounds it from above.
    c = reduce_failure_wages(c);
    ev.upper_bound = true;
  }
  ev.used = c;
  if (zero_failure(c) && c.w11 >= c.w10) {
    ev.method = c.w11 == c.w10 ? "ipe" : "jpe";
    ev.r = zero_failure_value(c.w11, c.w10, A0);
  } else if (zero_failure(c)) {
    ev.method = "rpe";
    ev.r = rpe_value(c, A0);
  } else if (c.w10 == 0.0 && c.w01 == 0.0 && c.w00 > 0.0 && c.w11 > 0.0) {
    ev.method = "jpe_w00";
    ev.r = jpe_value_w00(c, A0);
  } else {
    throw ModelError("evaluate: no worst-case characterization for this contract, even after removing failure wages");
  }
  return ev;
}

Result do_evaluate(const RunConfig& cfg, const Json& in) {
  const std::string where = "evaluate input";
  io::check_fields(in, {"contract", "A0", "eps"}, {"contract", "A0"}, where);
  const Contract w = io::contract_from_json(in.at("contract"), where + ".contract");
  const ActionSet A0 = io::known_set_from_json(in.at("A0"), where + ".A0");
  A0.require_assumption1();
  const double eps = pick_double(cfg.eps, in, "eps", kDefaultWitnessEps, where);
  if (!(eps > 0.0)) throw ModelError(where + ": eps must be positive");

  const Evaluation ev = evaluate_contract(w, A0);
  std::optional<Witness> wit;
  if (!ev.upper_bound) wit = build_witness(ev.used, A0, ev.r, eps);

  const ContractClass cls = classify(w);
  Result out;
  Json& j = out.json;
  j["classification"] = Json{{"tag", to_string(cls.tag)}, {"affine", cls.affine}};
  j["method"] = ev.method;
  j["evaluated_contract"] = io::to_json(ev.used);
  j["upper_bound"] = ev.upper_bound;
  j["pbar"] = ev.r.pbar;
  j["per_agent"] = ev.r.per_agent;
  j["total"] = ev.r.total;
  j["binding"] = to_string(ev.r.binding);
  j["a0_index"] = ev.r.a0_index;
  j["singular"] = ev.r.singular;
  if (ev.r.per_agent <= 0.0 && ev.r.pbar == 0.0)
    j["note"] = "known actions are costly; an adversary can drive effort to zero success probability";
  j["witness"] = wit ? io::to_json(*wit, wit->actions.size() <= kMaxListedActions) : Json(nullptr);

  out.table = io::Table{{"pbar", "per_agent", "total", "binding", "method", "upper_bound"},
                        {{fmt(ev.r.pbar), fmt(ev.r.per_agent), fmt(ev.r.total), to_string(ev.r.binding), ev.method,
                          ev.upper_bound ? "true" : "false"}}};

  if (!cfg.dump_game_path.empty()) {
    if (wit && wit->actions.size() > kMaxListedActions)
      throw ModelError("--dump-game: witness has " + std::to_string(wit->actions.size()) +
                       " actions; pass a larger --eps to get a dumpable game");
    const InducedGame game(w, wit ? wit->actions : A0);
    io::write_atomic(cfg.dump_game_path, io::game_dump(game).dump(2) + "\n");
  }
  return out;
}

// ---- optimize / sweep / discriminate ----

std::vector<std::string> opt_row(double p0, double c0, const OptimizationResult& r) {
  return {fmt(p0), fmt(c0), fmt(r.w11), fmt(r.w10), fmt(r.per_agent), to_string(r.regime)};
}

const std::vector<std::string> kOptColumns{"p0", "c0", "w11", "w10", "per_agent", "regime"};

double grid_step(const RunConfig& cfg, const Json& in, const std::string& where) {
  const double g = pick_double(cfg.grid_step, in, "grid_step", kDefaultCoarseStep, where);
  if (!(g > 0.0 && g <= 0.5)) throw ModelError(where + ": grid_step must lie in (0, 0.5]");
  return g;
}

int refine_rounds(const RunConfig& cfg, const Json& in, const std::string& where) {
  const int r = pick_int(cfg.refine, in, "refine", kDefaultRefineRounds, where);
  if (r < 0 || r > 8) throw ModelError(where + ": refine must lie in [0, 8]");
  return r;
}

Result do_optimize(const RunConfig& cfg, const Json& in) {
  const std::string where = "optimize input";
  io::check_fields(in, {"A0", "grid_step", "refine"}, {"A0"}, where);
  const ActionSet A0 = io::known_set_from_json(in.at("A0"), where + ".A0");
  A0.require_assumption1();
  const OptimizationResult r = optimize_jpe(A0, grid_step(cfg, in, where), refine_rounds(cfg, in, where));
  const IpeOptimum ipe = ipe_optimal(A0);
  const ActionSpec a0 = A0[zero_failure_value(r.w11, r.w10, A0).a0_index];

  Result out;
  out.json = io::to_json(r);
  out.json["a0"] = io::to_json(a0);
  out.json["ipe"] = Json{{"w_star", ipe.w_star}, {"per_agent", ipe.per_agent}, {"total", ipe.total}};
  out.table = io::Table{kOptColumns, {opt_row(a0.prob, a0.cost, r)}};
  return out;
}

Result do_sweep(const RunConfig& cfg, const Json& in) {
  const std::string where = "sweep input";
  io::check_fields(in, {"p0", "c", "c_ratio", "grid_step", "refine"}, {"p0"}, where);
  if (in.contains("c") == in.contains("c_ratio")) throw ModelError(where + ": give exactly one of 'c' and 'c_ratio'");
  const auto ps = io::get_number_list(in, "p0", where);
  const double g = grid_step(cfg, in, where);
  const int rounds = refine_rounds(cfg, in, where);
  const auto rows = in.contains("c") ? sweep_regimes(ps, io::get_number_list(in, "c", where), g, rounds)
                                     : sweep_regimes_ratio(ps, io::get_number_list(in, "c_ratio", where), g, rounds);
  Result out;
  io::Table t{kOptColumns, {}};
  Json arr = Json::array();
  for (const SweepRow& row : rows) {
    if (row.opt) {
      t.rows.push_back(opt_row(row.p0, row.c0, *row.opt));
      Json j = io::to_json(*row.opt);
      j["p0"] = row.p0;
      j["c0"] = row.c0;
      arr.push_back(j);
    } else {
      t.rows.push_back({fmt(row.p0), fmt(row.c0), "", "", "", to_string(row.regime)});
      arr.push_back(Json{{"p0", row.p0}, {"c0", row.c0}, {"regime", to_string(row.regime)}});
    }
  }
  out.json["rows"] = arr;
  out.table = t;
  return out;
}

Result do_discriminate(const RunConfig& cfg, const Json& in) {
  const std::string where = "discriminate input";
  io::check_fields(in, {"A0", "grid_step", "refine"}, {"A0"}, where);
  const ActionSet A0 = io::known_set_from_json(in.at("A0"), where + ".A0");
  A0.require_assumption1();
  const double g = grid_step(cfg, in, where);
  const DiscriminatoryResult d = discriminatory_ipe(A0, g);
  const OptimizationResult jpe = optimize_jpe(A0, kDefaultCoarseStep, refine_rounds(cfg, in, where));

  Result out;
  out.json = Json{{"w1", d.w1},
                  {"w2", d.w2},
                  {"per_agent", d.per_agent()},
                  {"value_total", d.value_total},
                  {"inner_witness", Json{{"c1", d.inner_witness.c1}, {"p1", d.inner_witness.p1}, {"p2", d.inner_witness.p2}}},
                  {"grid_step", g},
                  {"jpe", io::to_json(jpe)},
                  {"beats_jpe", d.per_agent() > jpe.per_agent}};
  out.table = io::Table{{"w1", "w2", "per_agent", "c1", "p1", "p2", "jpe_per_agent"},
                        {{fmt(d.w1), fmt(d.w2), fmt(d.per_agent()), fmt(d.inner_witness.c1), fmt(d.inner_witness.p1),
                          fmt(d.inner_witness.p2), fmt(jpe.per_agent)}}};
  return out;
}

// ---- adversary ----

Result do_adversary(const RunConfig& cfg, const Json& in) {
  const std::string where = "adversary input";
  io::check_fields(in, {"contract", "A0", "n", "eps"}, {"contract", "A0"}, where);
  const Contract w = io::contract_from_json(in.at("contract"), where + ".contract");
  const ActionSet A0 = io::known_set_from_json(in.at("A0"), where + ".A0");
  A0.require_assumption1();
  const std::optional<double> eps = cfg.eps ? cfg.eps
                                            : (in.contains("eps") ? std::optional<double>(io::get_number(in, "eps", where))
                                                                  : std::nullopt);
  if (eps && !(*eps > 0.0)) throw ModelError(where + ": eps must be positive");

  Result out;
  io::Table t{{"index", "cost", "prob", "known", "chain_pos"}, {}};
  if (zero_failure(w) && w.w11 > w.w10) {
    const int n = pick_int(cfg.n, in, "n", kDefaultChainSteps, where);
    if (n < 1 || n > 1000000) throw ModelError(where + ": n must lie in [1, 1000000]");
    const EulerChain ch = euler_adversary(w, A0, n, {eps});
    std::vector<long> pos(ch.actions.size(), -1);
    for (std::size_t k = 0; k < ch.chain.size(); ++k) pos[ch.chain[k]] = static_cast<long>(k);
    for (std::size_t i = 0; i < ch.actions.size(); ++i)
      t.rows.push_back({std::to_string(i), fmt(ch.actions[i].cost), fmt(ch.actions[i].prob),
                        i < ch.actions.known_count() ? "1" : "0", std::to_string(pos[i])});
    out.json = Json{{"kind", "euler_chain"},
                    {"n", n},
                    {"step", ch.step},
                    {"rho", ch.rho},
                    {"clamped", ch.clamped},
                    {"verified", ch.verified},
                    {"exact_path", ch.exact_path},
                    {"limit_index", ch.limit_index},
                    {"limit_prob", ch.limit_prob},
                    {"pbar", zero_failure_value(w.w11, w.w10, A0).pbar},
                    {"error_bound", ch.error_bound ? Json(*ch.error_bound) : Json(nullptr)},
                    {"failed_step", ch.failed_step ? Json(*ch.failed_step) : Json(nullptr)},
                    {"actions", io::to_json(ch.actions)}};
  } else {
    const Evaluation ev = evaluate_contract(w, A0);
    if (ev.upper_bound) throw ModelError("adversary: no witness construction for contracts with failure wages");
    const auto wit = build_witness(ev.used, A0, ev.r, eps.value_or(kDefaultWitnessEps));
    if (!wit) throw ModelError("adversary: no witness construction for this contract");
    for (std::size_t i = 0; i < wit->actions.size(); ++i)
      t.rows.push_back({std::to_string(i), fmt(wit->actions[i].cost), fmt(wit->actions[i].prob),
                        i < wit->actions.known_count() ? "1" : "0", "-1"});
    out.json = io::to_json(*wit, true);
    out.json["pbar"] = ev.r.pbar;
  }
  out.table = t;
  return out;
}

// ---- extensions ----

Result do_bayes(const RunConfig& cfg, const Json& in) {
  const std::string where = "bayes input";
  io::check_fields(in, {"mu", "p0", "c0", "p_star", "w0"}, {"p0", "c0", "p_star"}, where);
  if (!cfg.mu && !in.contains("mu")) throw ModelError(where + ": mu is required (field 'mu' or --mu)");
  const BayesianEnv env{pick_double(cfg.mu, in, "mu", 0.0, where), io::get_number(in, "p0", where),
                        io::get_number(in, "c0", where), io::get_number(in, "p_star", where)};
  env.validate();

  Result out;
  io::Table t{{"scheme", "w0", "value"}, {}};
  Json values = Json::object();
  for (SchemeKind k : {SchemeKind::ZERO, SchemeKind::IPE_MIXED, SchemeKind::IPE_ALWAYS_A0}) {
    const double v = bayesian_eval(env, {k});
    values[to_string(k)] = v;
    t.rows.push_back({to_string(k), "", fmt(v)});
  }
  const double best_jpe = bayesian_best_jpe(env);
  values["JPE_SUP"] = best_jpe;
  t.rows.push_back({"JPE_SUP", "0", fmt(best_jpe)});
  if (in.contains("w0")) {
    const double w0 = io::get_number(in, "w0", where);
    const double v = bayesian_eval(env, Scheme::jpe(w0));
    out.json["jpe"] = Json{{"w0", w0}, {"bonus", bayesian_jpe_bonus(env, w0)}, {"value", v}};
    t.rows.push_back({"JPE", fmt(w0), fmt(v)});
  }
  const SchemeKind best_ipe = bayesian_best_ipe(env);
  out.json["values"] = values;
  out.json["best_ipe"] = to_string(best_ipe);
  out.json["jpe_beats_ipe"] = best_jpe > bayesian_eval(env, {best_ipe});
  Json th = Json::array();
  for (const MuThreshold& m : bayesian_thresholds(env.p0, env.c0, env.p_star))
    th.push_back(Json{{"kind", m.kind}, {"below", m.below}, {"above", m.above}, {"mu", m.mu}});
  out.json["thresholds"] = th;
  out.table = t;
  return out;
}

Result do_multi(const RunConfig& cfg, const Json& in) {
  const std::string where = "multi input";
  io::check_fields(in, {"n", "w0", "b", "A0"}, {"w0", "b", "A0"}, where);
  const ActionSet A0 = io::known_set_from_json(in.at("A0"), where + ".A0");
  MultiAgentContract mac{pick_int(cfg.n, in, "n", 2, where), io::get_number(in, "w0", where),
                         io::get_number(in, "b", where)};
  const MultiAgentValue v = multi_agent_value(mac, A0);
  const IpeOptimum ipe = ipe_optimal(A0);
  Result out;
  out.json = Json{{"n", mac.n},
                  {"per_agent", v.per_agent},
                  {"total", v.total},
                  {"two_agent_equivalent", io::to_json(two_agent_equivalent(mac))},
                  {"ipe_total", mac.n * ipe.per_agent},
                  {"beats_ipe", v.total > mac.n * ipe.per_agent}};
  out.table = io::Table{{"n", "per_agent", "total", "ipe_total"},
                        {{std::to_string(mac.n), fmt(v.per_agent), fmt(v.total), fmt(mac.n * ipe.per_agent)}}};
  return out;
}

Result do_asym(const RunConfig&, const Json& in) {
  const std::string where = "asym input";
  io::check_fields(in, {"contract", "a0"}, {"contract", "a0"}, where);
  const Contract w = io::contract_from_json(in.at("contract"), where + ".contract");
  const ActionSpec a0 = io::action_from_json(in.at("a0"), where + ".a0");
  const AsymValue v = asym_unknown_value(w, a0);
  Result out;
  out.json = Json{{"p1", v.p1}, {"p2", v.p2}, {"total", v.total}};
  out.table = io::Table{{"p1", "p2", "total"}, {{fmt(v.p1), fmt(v.p2), fmt(v.total)}}};
  return out;
}

Result do_selftest(const RunConfig& cfg) {
  const auto results = checks::run_acceptance(cfg.seed);
  Result out;
  io::Table t{{"criterion", "pass", "title", "detail"}, {}};
  Json arr = Json::array();
  bool all = true;
  for (const auto& r : results) {
    all = all && r.pass;
    arr.push_back(Json{{"criterion", r.id}, {"pass", r.pass}, {"title", r.title}, {"detail", r.detail}});
    t.rows.push_back({std::to_string(r.id), r.pass ? "PASS" : "FAIL", r.title, r.detail});
  }
  out.json["criteria"] = arr;
  out.json["all_passed"] = all;
  out.table = t;
  out.status = all ? kExitOk : kExitFailedChecks;
  return out;
}

Format default_format(const std::string& verb) {
  return verb == "sweep" || verb == "adversary" ? Format::CSV : Format::JSON;
}

}  // namespace

const char* version() { return ROBUSTPAY_VERSION; }

Artifact execute(const RunConfig& cfg, const std::string& input_text) {
  Json in = Json::object();
  if (cfg.verb != "selftest") {
    try {
      in = Json::parse(input_text);
    } catch (const Json::parse_error& e) {
      throw ModelError(std::string("malformed JSON input: ") + e.what());
    }
  }
  if (!cfg.dump_game_path.empty() && cfg.verb != "evaluate") throw ModelError("--dump-game applies to evaluate only");

  Result res;
  if (cfg.verb == "evaluate") res = do_evaluate(cfg, in);
  else if (cfg.verb == "optimize") res = do_optimize(cfg, in);
  else if (cfg.verb == "adversary") res = do_adversary(cfg, in);
  else if (cfg.verb == "sweep") res = do_sweep(cfg, in);
  else if (cfg.verb == "discriminate") res = do_discriminate(cfg, in);
  else if (cfg.verb == "bayes") res = do_bayes(cfg, in);
  else if (cfg.verb == "multi") res = do_multi(cfg, in);
  else if (cfg.verb == "asym") res = do_asym(cfg, in);
  else if (cfg.verb == "selftest") res = do_selftest(cfg);
  else throw ModelError("unknown verb '" + cfg.verb + "'");

  const Json config = effective_config(cfg, in);
  Artifact art;
  art.status = res.status;
  if (cfg.format.value_or(default_format(cfg.verb)) == Format::CSV) {
    if (!res.table) throw ModelError("verb '" + cfg.verb + "' has no CSV output");
    art.content = io::render_csv(*res.table, {std::string("robustpay ") + version() + " verb=" + cfg.verb,
                                              "config=" + config.dump()});
  } else {
    Json doc;
    doc["metadata"] = Json{{"tool", "robustpay"}, {"version", version()}, {"config", config}};
    for (auto& item : res.json.items()) doc[item.key()] = item.value();
    art.content = doc.dump(2) + "\n";
  }
  return art;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    std::string text;
    if (cfg.verb != "selftest") {
      if (cfg.input_path.empty()) throw ModelError(cfg.verb + ": --input is required");
      text = io::read_file(cfg.input_path);
    }
    const Artifact art = execute(cfg, text);
    if (cfg.output_path.empty()) out << art.content;
    else io::write_atomic(cfg.output_path, art.content);
    return art.status;
  } catch (const ModelError& e) {
    err << "robustpay: error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const ConvergenceError& e) {
    err << "robustpay: no convergence: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const std::exception& e) {
    err << "robustpay: internal error: " << e.what() << "\n";
    return kExitFailedChecks;
  }
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Worst-case evaluation and design of team incentive contracts"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  RunConfig cfg;
  std::string format;
  double grid = 0.0, eps = 0.0, mu = 0.0;
  int refine = 0, n = 0;

  const std::vector<std::pair<std::string, std::string>> verbs{
      {"evaluate", "worst-case value of a contract"},
      {"optimize", "worst-case optimal JPE by grid search"},
      {"adversary", "undercutting action set for a contract"},
      {"sweep", "optimal-JPE regimes over a (p0, c0) grid"},
      {"discriminate", "best discriminatory IPE on a wage grid"},
      {"bayes", "Bayesian scheme values and mu thresholds"},
      {"multi", "n-agent team contract value"},
      {"asym", "value with agent-specific unknown actions"},
      {"selftest", "run every acceptance criterion"}};
  std::vector<CLI::App*> subs;
  for (const auto& [name, help] : verbs) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_option("--input,-i", cfg.input_path, "JSON input file");
    s->add_option("--output,-o", cfg.output_path, "output file (stdout if omitted)");
    s->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}, CLI::ignore_case));
    s->add_option("--seed", cfg.seed, "seed for randomized suites");
    s->add_option("--grid-step", grid, "coarse grid step");
    s->add_option("--refine", refine, "refinement rounds");
    s->add_option("--n", n, "chain steps or number of agents");
    s->add_option("--eps", eps, "witness slack or rounding offset");
    s->add_option("--mu", mu, "probability the unknown action is absent");
    if (name == "evaluate") s->add_option("--dump-game", cfg.dump_game_path, "write the witness game as JSON");
    subs.push_back(s);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  for (CLI::App* s : subs) {
    if (!s->parsed()) continue;
    cfg.verb = s->get_name();
    if (s->count("--format")) cfg.format = (format == "csv" || format == "CSV") ? Format::CSV : Format::JSON;
    if (s->count("--grid-step")) cfg.grid_step = grid;
    if (s->count("--refine")) cfg.refine = refine;
    if (s->count("--n")) cfg.n = n;
    if (s->count("--eps")) cfg.eps = eps;
    if (s->count("--mu")) cfg.mu = mu;
  }

  std::ostringstream params;
  params << "verb=" << cfg.verb << " input=" << (cfg.input_path.empty() ? "-" : cfg.input_path)
         << " output=" << (cfg.output_path.empty() ? "-" : cfg.output_path) << " seed=" << cfg.seed;
  if (cfg.format) params << " format=" << (*cfg.format == Format::CSV ? "csv" : "json");
  if (cfg.grid_step) params << " grid_step=" << io::format_number(*cfg.grid_step);
  if (cfg.refine) params << " refine=" << *cfg.refine;
  if (cfg.n) params << " n=" << *cfg.n;
  if (cfg.eps) params << " eps=" << io::format_number(*cfg.eps);
  if (cfg.mu) params << " mu=" << io::format_number(*cfg.mu);
  err << "robustpay " << version() << ": " << params.str() << "\n";
  return run(cfg, out, err);
}

}  // namespace robustpay::cli
