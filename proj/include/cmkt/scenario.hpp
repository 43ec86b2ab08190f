#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmkt/agents.hpp"
#include "cmkt/aggregation.hpp"
#include "cmkt/leontief.hpp"
#include "cmkt/smooth.hpp"

// One self-contained JSON document drives every subcommand: a commodity
// list with a focal good, the market population (structured buyer/seller
// groups or direct value/cost lists), and optional smooth-model, economy
// and experiment blocks.  Keys beginning with '_' are annotations and are
// ignored; anything else unknown is rejected with a field-precise error.
// The format is documented in docs/scenario-format.md.

namespace cmkt {

class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(const std::string& path, const std::string& message)
      : std::runtime_error(path + ": " + message), field_path_(path) {}
  const std::string& field_path() const { return field_path_; }

 private:
  std::string field_path_;
};

struct Commodity {
  std::string id;
  std::string name;  // defaults to the id
};

struct BuyerGroup {
  BuyerUnit unit;
  std::int64_t units;
};

struct SellerGroup {
  SellerUnit unit;  // recipe form or direct-cost form
  std::int64_t units;
};

struct SmoothSpec {
  SmoothFamily family = SmoothFamily::uniform_triangular;
  Side side = Side::demand;
  double low = 0.0;
  double high = 1.0;
  double capacity = 1.0;
  double power = 2.0;  // pyramidal only

  SmoothModel to_model() const;
};

struct ExperimentSpec {
  std::vector<std::size_t> sizes;
  std::size_t replications = 1;
  std::uint64_t base_seed = 0;
  std::vector<double> grid;

  ExperimentConfig to_config(const SmoothModel& model) const;
};

struct Scenario {
  std::vector<Commodity> commodities;
  std::size_t focal = 0;

  std::optional<PriceVector> prices;  // required once structured agents appear

  std::vector<BuyerGroup> buyers;
  std::optional<std::vector<double>> values;  // direct demand list
  std::vector<SellerGroup> sellers;
  std::optional<std::vector<double>> costs;  // direct supply list

  std::optional<SmoothSpec> smooth;
  std::optional<LeontiefEconomy> leontief;
  std::optional<ExperimentSpec> experiment;

  const Commodity& focal_commodity() const { return commodities[focal]; }

  // Reservation prices of every buyer unit (direct list, or buyer groups
  // evaluated at the scenario prices) and costs of every seller unit.
  std::vector<double> demand_values() const;
  std::vector<double> supply_costs() const;
};

Scenario parse_scenario(const std::filesystem::path& path);
Scenario parse_scenario_text(const std::string& text, const std::string& origin);

}  // namespace cmkt
