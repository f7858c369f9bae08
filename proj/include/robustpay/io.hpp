#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "json.hpp"
#include "robustpay/game.hpp"
#include "robustpay/model.hpp"
#include "robustpay/optimize.hpp"
#include "robustpay/worstcase.hpp"

namespace robustpay::io {

using Json = nlohmann::ordered_json;

// Throws ModelError naming `where` when obj is not an object, has a key
// outside `allowed`, or misses a key from `required`.
void check_fields(const Json& obj, std::initializer_list<const char*> allowed,
                  std::initializer_list<const char*> required, const std::string& where);

double get_number(const Json& obj, const char* key, const std::string& where);
double get_number_or(const Json& obj, const char* key, double fallback, const std::string& where);
std::vector<double> get_number_list(const Json& obj, const char* key, const std::string& where);

// {"cost": c, "prob": p}
ActionSpec action_from_json(const Json& j, const std::string& where);
// Array of actions; all are treated as known.
ActionSet known_set_from_json(const Json& j, const std::string& where);
// {"w11":..., "w10":..., "w01":..., "w00":...}; w01 and w00 default to 0.
Contract contract_from_json(const Json& j, const std::string& where);

Json to_json(const ActionSpec& a);
Json to_json(const ActionSet& A);
Json to_json(const Contract& w);
Json to_json(const Witness& wit, bool with_actions);
Json to_json(const OptimizationResult& r);

// Action list plus row-player payoff matrix; the game is symmetric.
Json game_dump(const InducedGame& game);

// Shortest round-trip decimal form with '.' as separator.
std::string format_number(double v);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

// CSV with '#' metadata lines first, then the header and rows.
std::string render_csv(const Table& t, const std::vector<std::string>& metadata);

// Writes to a temp file next to path, then renames it over path.
void write_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace robustpay::io
