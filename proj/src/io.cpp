#include "robustpay/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace robustpay::io {

namespace {

bool contains(std::initializer_list<const char*> keys, const std::string& k) {
  for (const char* c : keys)
    if (k == c) return true;
  return false;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void check_fields(const Json& obj, std::initializer_list<const char*> allowed,
                  std::initializer_list<const char*> required, const std::string& where) {
  if (!obj.is_object()) throw ModelError(where + ": expected a JSON object");
  for (const auto& item : obj.items())
    if (!contains(allowed, item.key())) throw ModelError(where + ": unknown field '" + item.key() + "'");
  for (const char* k : required)
    if (!obj.contains(k)) throw ModelError(where + ": missing required field '" + std::string(k) + "'");
}

double get_number(const Json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ModelError(where + ": missing required field '" + std::string(key) + "'");
  const Json& v = obj.at(key);
  if (!v.is_number()) throw ModelError(where + ": field '" + std::string(key) + "' must be a number");
  return v.get<double>();
}

double get_number_or(const Json& obj, const char* key, double fallback, const std::string& where) {
  return obj.contains(key) ? get_number(obj, key, where) : fallback;
}

std::vector<double> get_number_list(const Json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ModelError(where + ": missing required field '" + std::string(key) + "'");
  const Json& v = obj.at(key);
  if (!v.is_array() || v.empty()) throw ModelError(where + ": field '" + std::string(key) + "' must be a non-empty array");
  std::vector<double> out;
  for (const Json& x : v) {
    if (!x.is_number()) throw ModelError(where + ": field '" + std::string(key) + "' must contain numbers only");
    out.push_back(x.get<double>());
  }
  return out;
}

ActionSpec action_from_json(const Json& j, const std::string& where) {
  check_fields(j, {"cost", "prob"}, {"cost", "prob"}, where);
  return {get_number(j, "cost", where), get_number(j, "prob", where)};
}

ActionSet known_set_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ModelError(where + ": expected a non-empty array of actions");
  std::vector<ActionSpec> acts;
  for (std::size_t i = 0; i < j.size(); ++i) acts.push_back(action_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return make_known(std::move(acts));
}

Contract contract_from_json(const Json& j, const std::string& where) {
  check_fields(j, {"w11", "w10", "w01", "w00"}, {"w11", "w10"}, where);
  Contract w{get_number(j, "w11", where), get_number(j, "w10", where), get_number_or(j, "w01", 0.0, where),
             get_number_or(j, "w00", 0.0, where)};
  w.validate();
  return w;
}

Json to_json(const ActionSpec& a) { return Json{{"cost", a.cost}, {"prob", a.prob}}; }

Json to_json(const ActionSet& A) {
  Json arr = Json::array();
  for (std::size_t i = 0; i < A.size(); ++i) {
    Json a = to_json(A[i]);
    a["known"] = i < A.known_count();
    arr.push_back(a);
  }
  return arr;
}

Json to_json(const Contract& w) { return Json{{"w11", w.w11}, {"w10", w.w10}, {"w01", w.w01}, {"w00", w.w00}}; }

Json to_json(const Witness& wit, bool with_actions) {
  Json j{{"kind", wit.kind},
         {"eps", wit.eps},
         {"clamped", wit.clamped},
         {"verified", wit.verified},
         {"limit_prob", wit.limit_prob},
         {"game_per_agent", wit.game_per_agent},
         {"size", wit.actions.size()}};
  if (with_actions) j["actions"] = to_json(wit.actions);
  return j;
}

Json to_json(const OptimizationResult& r) {
  return Json{{"w11", r.w11},         {"w10", r.w10},       {"per_agent", r.per_agent},
              {"total", 2.0 * r.per_agent}, {"regime", to_string(r.regime)}, {"pbar", r.pbar},
              {"binding", to_string(r.binding)}, {"grid_step", r.grid_step}, {"refined", r.refined}};
}

Json game_dump(const InducedGame& game) {
  Json payoffs = Json::array();
  for (const auto& row : game.payoff_matrix()) payoffs.push_back(row);
  return Json{{"contract", to_json(game.contract())},
              {"actions", to_json(game.actions())},
              {"modularity", to_string(check_modularity(game))},
              {"payoffs", payoffs}};
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string render_csv(const Table& t, const std::vector<std::string>& metadata) {
  std::string out;
  for (const auto& m : metadata) out += "# " + m + "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + csv_field(t.columns[i]);
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_field(row[i]);
    out += "\n";
  }
  return out;
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ModelError("cannot open output file '" + tmp + "' for writing");
    f << content;
    f.flush();
    if (!f) throw ModelError("failed writing output file '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw ModelError("cannot move output into place at '" + path + "'");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ModelError("cannot read input file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace robustpay::io
