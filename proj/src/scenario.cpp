#include "cmkt/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "cmkt/io.hpp"
#include "json.hpp"

namespace cmkt {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ScenarioError(path, message);
}

std::string type_name(const json& j) { return j.type_name(); }

const json& require_key(const json& obj, const std::string& key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, "missing required key '" + key + "'");
  return *it;
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const std::string& key = it.key();
    if (!key.empty() && key.front() == '_') continue;  // annotation
    if (!known.count(key)) fail(path, "unknown key '" + key + "'");
  }
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number, got " + type_name(j));
  const double x = j.get<double>();
  if (!std::isfinite(x)) fail(path, "must be finite");
  return x;
}

std::int64_t as_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer, got " + type_name(j));
  return j.get<std::int64_t>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string, got " + type_name(j));
  return j.get<std::string>();
}

const json& as_array(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array, got " + type_name(j));
  return j;
}

const json& as_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object, got " + type_name(j));
  return j;
}

std::vector<double> number_list(const json& j, const std::string& path,
                                bool require_nonneg) {
  std::vector<double> out;
  for (std::size_t i = 0; i < as_array(j, path).size(); ++i) {
    const std::string item_path = path + "[" + std::to_string(i) + "]";
    const double x = as_number(j[i], item_path);
    if (require_nonneg && x < 0.0) fail(item_path, "must be >= 0");
    out.push_back(x);
  }
  return out;
}

std::vector<Commodity> parse_commodities(const json& j, const std::string& path) {
  std::vector<Commodity> commodities;
  const auto& arr = as_array(j, path);
  if (arr.empty()) fail(path, "at least one commodity is required");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string item_path = path + "[" + std::to_string(i) + "]";
    Commodity c;
    if (arr[i].is_string()) {
      c.id = arr[i].get<std::string>();
      c.name = c.id;
    } else if (arr[i].is_object()) {
      reject_unknown_keys(arr[i], {"id", "name"}, item_path);
      c.id = as_string(require_key(arr[i], "id", item_path), item_path + ".id");
      c.name = arr[i].contains("name")
                   ? as_string(arr[i]["name"], item_path + ".name")
                   : c.id;
    } else {
      fail(item_path, "expected a string or an object with an 'id'");
    }
    if (c.id.empty()) fail(item_path, "commodity id must be non-empty");
    if (!ids.insert(c.id).second) fail(item_path, "duplicate commodity id '" + c.id + "'");
    commodities.push_back(std::move(c));
  }
  return commodities;
}

std::int64_t parse_units(const json& obj, const std::string& path) {
  if (!obj.contains("units")) return 1;
  const std::int64_t units = as_integer(obj["units"], path + ".units");
  if (units < 1) fail(path + ".units", "must be >= 1");
  return units;
}

NeedsHierarchy parse_hierarchy(const json& j, std::size_t n, std::size_t focal,
                               const std::string& path) {
  const auto& arr = as_array(j, path);
  if (arr.size() != n) {
    fail(path, "expected " + std::to_string(n) + " entries (one per commodity), got " +
                   std::to_string(arr.size()));
  }
  std::vector<int> indicators;
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const std::string item_path = path + "[" + std::to_string(k) + "]";
    const std::int64_t flag = as_integer(arr[k], item_path);
    if (flag != 0 && flag != 1) fail(item_path, "hierarchy indicators must be 0 or 1");
    indicators.push_back(static_cast<int>(flag));
  }
  try {
    NeedsHierarchy hierarchy(std::move(indicators));
    hierarchy.require_focal_unmarked(focal);
    return hierarchy;
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

SmoothSpec parse_smooth(const json& j, const std::string& path) {
  const auto& obj = as_object(j, path);
  reject_unknown_keys(obj, {"side", "family", "support", "v_max", "capacity", "power"},
                      path);
  SmoothSpec spec;

  const std::string family =
      as_string(require_key(obj, "family", path), path + ".family");
  const std::string side = obj.contains("side")
                               ? as_string(obj["side"], path + ".side")
                               : std::string("demand");
  if (side == "demand") {
    spec.side = Side::demand;
  } else if (side == "supply") {
    spec.side = Side::supply;
  } else {
    fail(path + ".side", "must be 'demand' or 'supply'");
  }

  if (obj.contains("capacity")) {
    spec.capacity = as_number(obj["capacity"], path + ".capacity");
    if (!(spec.capacity > 0.0)) fail(path + ".capacity", "must be > 0");
  }

  auto read_support = [&]() {
    if (obj.contains("support")) {
      const auto bounds = number_list(obj["support"], path + ".support", true);
      if (bounds.size() != 2 || !(bounds[0] < bounds[1])) {
        fail(path + ".support", "expected [low, high] with low < high");
      }
      spec.low = bounds[0];
      spec.high = bounds[1];
    } else if (obj.contains("v_max")) {
      spec.low = 0.0;
      spec.high = as_number(obj["v_max"], path + ".v_max");
      if (!(spec.high > 0.0)) fail(path + ".v_max", "must be > 0");
    } else {
      fail(path, "needs either 'support' or 'v_max'");
    }
  };

  if (family == "triangular" || family == "uniform") {
    spec.family = SmoothFamily::uniform_triangular;
    read_support();
    if (obj.contains("power")) fail(path + ".power", "only the pyramidal family takes a power");
  } else if (family == "pyramidal") {
    spec.family = SmoothFamily::pyramidal_power;
    if (spec.side != Side::demand) fail(path + ".side", "the pyramidal family is demand-side");
    if (obj.contains("support")) {
      fail(path + ".support", "the pyramidal family is parameterized by 'v_max'");
    }
    spec.low = 0.0;
    spec.high = as_number(require_key(obj, "v_max", path), path + ".v_max");
    if (!(spec.high > 0.0)) fail(path + ".v_max", "must be > 0");
    if (obj.contains("power")) {
      spec.power = as_number(obj["power"], path + ".power");
      if (!(spec.power >= 1.0)) fail(path + ".power", "must be >= 1");
    }
  } else {
    fail(path + ".family", "must be 'triangular', 'uniform' or 'pyramidal'");
  }
  return spec;
}

LeontiefEconomy parse_leontief(const json& j, const std::string& path) {
  const auto& obj = as_object(j, path);
  reject_unknown_keys(obj, {"inputs", "labor", "names"}, path);
  const auto& inputs_json = as_array(require_key(obj, "inputs", path), path + ".inputs");
  std::vector<std::vector<double>> inputs;
  for (std::size_t i = 0; i < inputs_json.size(); ++i) {
    inputs.push_back(
        number_list(inputs_json[i], path + ".inputs[" + std::to_string(i) + "]", true));
  }
  const auto labor = number_list(require_key(obj, "labor", path), path + ".labor", true);
  if (obj.contains("names")) {
    const auto& names = as_array(obj["names"], path + ".names");
    if (names.size() != labor.size()) {
      fail(path + ".names", "expected " + std::to_string(labor.size()) + " names");
    }
  }
  try {
    return LeontiefEconomy(std::move(inputs), labor);
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

ExperimentSpec parse_experiment(const json& j, const std::string& path) {
  const auto& obj = as_object(j, path);
  reject_unknown_keys(obj, {"sizes", "replications", "base_seed", "grid"}, path);
  ExperimentSpec spec;

  const auto& sizes = as_array(require_key(obj, "sizes", path), path + ".sizes");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const std::string item_path = path + ".sizes[" + std::to_string(i) + "]";
    const std::int64_t n = as_integer(sizes[i], item_path);
    if (n < 1) fail(item_path, "must be >= 1");
    spec.sizes.push_back(static_cast<std::size_t>(n));
  }
  if (obj.contains("replications")) {
    const std::int64_t r = as_integer(obj["replications"], path + ".replications");
    if (r < 1) fail(path + ".replications", "must be >= 1");
    spec.replications = static_cast<std::size_t>(r);
  }
  if (obj.contains("base_seed")) {
    const std::int64_t s = as_integer(obj["base_seed"], path + ".base_seed");
    if (s < 0) fail(path + ".base_seed", "must be >= 0");
    spec.base_seed = static_cast<std::uint64_t>(s);
  }

  const auto& grid = require_key(obj, "grid", path);
  if (grid.is_array()) {
    spec.grid = number_list(grid, path + ".grid", true);
  } else if (grid.is_object()) {
    reject_unknown_keys(grid, {"low", "high", "step"}, path + ".grid");
    const double low = as_number(require_key(grid, "low", path + ".grid"), path + ".grid.low");
    const double high =
        as_number(require_key(grid, "high", path + ".grid"), path + ".grid.high");
    const double step =
        as_number(require_key(grid, "step", path + ".grid"), path + ".grid.step");
    if (low < 0.0 || !(high > low) || !(step > 0.0)) {
      fail(path + ".grid", "requires 0 <= low < high and step > 0");
    }
    const auto count = static_cast<std::size_t>((high - low) / step + 1e-9) + 1;
    for (std::size_t i = 0; i < count; ++i) {
      spec.grid.push_back(low + static_cast<double>(i) * step);
    }
  } else {
    fail(path + ".grid", "expected an array of prices or {low, high, step}");
  }
  return spec;
}

}  // namespace

SmoothModel SmoothSpec::to_model() const {
  if (family == SmoothFamily::pyramidal_power) {
    return SmoothModel::pyramidal(high, capacity, power);
  }
  return SmoothModel::uniform(side, low, high, capacity);
}

ExperimentConfig ExperimentSpec::to_config(const SmoothModel& model) const {
  ExperimentConfig cfg{model, sizes, replications, base_seed, grid};
  cfg.validate();
  return cfg;
}

std::vector<double> Scenario::demand_values() const {
  if (values) return *values;
  std::vector<double> out;
  for (const auto& group : buyers) {
    const double v = valuation(group.unit.wealth, group.unit.hierarchy, *prices);
    out.insert(out.end(), static_cast<std::size_t>(group.units), v);
  }
  return out;
}

std::vector<double> Scenario::supply_costs() const {
  if (costs) return *costs;
  std::vector<double> out;
  for (const auto& group : sellers) {
    const double c = seller_cost(group.unit, *prices);
    out.insert(out.end(), static_cast<std::size_t>(group.units), c);
  }
  return out;
}

Scenario parse_scenario(const std::filesystem::path& path) {
  return parse_scenario_text(io::read_text(path), path.string());
}

Scenario parse_scenario_text(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(origin, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(origin, "scenario must be a JSON object");
  reject_unknown_keys(doc,
                      {"commodities", "focal", "prices", "buyers", "values", "sellers",
                       "costs", "smooth", "leontief", "experiment"},
                      origin);

  Scenario scenario;
  scenario.commodities =
      parse_commodities(require_key(doc, "commodities", origin), origin + ": commodities");
  const std::size_t n = scenario.commodities.size();

  const std::string focal_id =
      as_string(require_key(doc, "focal", origin), origin + ": focal");
  bool found = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (scenario.commodities[i].id == focal_id) {
      scenario.focal = i;
      found = true;
      break;
    }
  }
  if (!found) fail(origin + ": focal", "no commodity with id '" + focal_id + "'");

  if (doc.contains("prices")) {
    const std::string path = origin + ": prices";
    auto prices = number_list(doc["prices"], path, true);
    if (prices.size() != n) {
      fail(path, "expected " + std::to_string(n) + " entries (one per commodity), got " +
                     std::to_string(prices.size()));
    }
    try {
      scenario.prices.emplace(std::move(prices));
    } catch (const std::invalid_argument& e) {
      fail(path, e.what());
    }
  }

  if (doc.contains("values") && doc.contains("buyers")) {
    fail(origin, "'values' and 'buyers' are mutually exclusive");
  }
  if (doc.contains("costs") && doc.contains("sellers")) {
    fail(origin, "'costs' and 'sellers' are mutually exclusive");
  }

  if (doc.contains("values")) {
    scenario.values = number_list(doc["values"], origin + ": values", false);
  }
  if (doc.contains("costs")) {
    auto costs = number_list(doc["costs"], origin + ": costs", true);
    scenario.costs = std::move(costs);
  }

  if (doc.contains("buyers")) {
    const auto& buyers = as_array(doc["buyers"], origin + ": buyers");
    for (std::size_t i = 0; i < buyers.size(); ++i) {
      const std::string path = origin + ": buyers[" + std::to_string(i) + "]";
      const auto& obj = as_object(buyers[i], path);
      reject_unknown_keys(obj, {"wealth", "hierarchy", "units"}, path);
      const double wealth = as_number(require_key(obj, "wealth", path), path + ".wealth");
      if (wealth < 0.0) fail(path + ".wealth", "must be >= 0");
      BuyerGroup group{
          BuyerUnit{wealth, parse_hierarchy(require_key(obj, "hierarchy", path), n,
                                            scenario.focal, path + ".hierarchy")},
          parse_units(obj, path)};
      scenario.buyers.push_back(std::move(group));
    }
  }

  if (doc.contains("sellers")) {
    const auto& sellers = as_array(doc["sellers"], origin + ": sellers");
    for (std::size_t i = 0; i < sellers.size(); ++i) {
      const std::string path = origin + ": sellers[" + std::to_string(i) + "]";
      const auto& obj = as_object(sellers[i], path);
      reject_unknown_keys(obj, {"recipe", "cost", "units"}, path);
      const bool has_recipe = obj.contains("recipe");
      const bool has_cost = obj.contains("cost");
      if (has_recipe == has_cost) {
        fail(path, "needs exactly one of 'recipe' or 'cost'");
      }
      const std::int64_t units = parse_units(obj, path);
      if (has_recipe) {
        auto coefficients = number_list(obj["recipe"], path + ".recipe", true);
        if (coefficients.size() != n) {
          fail(path + ".recipe", "expected " + std::to_string(n) +
                                     " coefficients (one per commodity), got " +
                                     std::to_string(coefficients.size()));
        }
        scenario.sellers.push_back(
            {SellerUnit::with_recipe(InputRecipe(std::move(coefficients))), units});
      } else {
        const double cost = as_number(obj["cost"], path + ".cost");
        if (cost < 0.0) fail(path + ".cost", "must be >= 0");
        scenario.sellers.push_back({SellerUnit::with_cost(cost), units});
      }
    }
  }

  const bool needs_prices =
      !scenario.buyers.empty() ||
      std::any_of(scenario.sellers.begin(), scenario.sellers.end(),
                  [](const SellerGroup& g) { return g.unit.has_recipe(); });
  if (needs_prices && !scenario.prices) {
    fail(origin, "structured buyers/sellers require a 'prices' vector");
  }

  if (doc.contains("smooth")) {
    scenario.smooth = parse_smooth(doc["smooth"], origin + ": smooth");
  }
  if (doc.contains("leontief")) {
    scenario.leontief = parse_leontief(doc["leontief"], origin + ": leontief");
  }
  if (doc.contains("experiment")) {
    if (!scenario.smooth) {
      fail(origin + ": experiment", "an experiment needs a 'smooth' model block");
    }
    scenario.experiment = parse_experiment(doc["experiment"], origin + ": experiment");
    try {
      scenario.experiment->to_config(scenario.smooth->to_model());
    } catch (const std::invalid_argument& e) {
      fail(origin + ": experiment", e.what());
    }
  }

  return scenario;
}

}  // namespace cmkt
