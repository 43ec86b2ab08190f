#include <filesystem>

#include "cmkt/scenario.hpp"
#include "cmkt/schedules.hpp"
#include "doctest.h"

using namespace cmkt;

namespace {

const std::filesystem::path kScenarioDir = CMKT_SCENARIO_DIR;

Scenario parse(const std::string& text) { return parse_scenario_text(text, "test"); }

}  // namespace

TEST_CASE("the shipped discrete market parses and crosses as documented") {
  const auto scenario = parse_scenario(kScenarioDir / "discrete_market.json");
  CHECK(scenario.focal_commodity().id == "widget");
  const auto result =
      cross(build_demand(scenario.demand_values()), build_supply(scenario.supply_costs()));
  CHECK(result.quantity == 2);
  CHECK(result.price_low == 6.0);
  CHECK(result.price_high == 7.0);
  CHECK(max_surplus(scenario.demand_values(), scenario.supply_costs()) == 10.0);
}

TEST_CASE("the shipped smooth scenario carries a valid experiment") {
  const auto scenario = parse_scenario(kScenarioDir / "smooth_pyramid.json");
  REQUIRE(scenario.smooth.has_value());
  REQUIRE(scenario.experiment.has_value());
  const auto model = scenario.smooth->to_model();
  CHECK(model.family() == SmoothFamily::pyramidal_power);
  CHECK(model.high() == 125.0);
  const auto cfg = scenario.experiment->to_config(model);
  CHECK(cfg.sizes == std::vector<std::size_t>{100, 1000, 10000});
  CHECK(cfg.grid.size() == 17);
  CHECK(cfg.grid.back() == 125.0);
}

TEST_CASE("the shipped hunting economy parses") {
  const auto scenario = parse_scenario(kScenarioDir / "leontief_hunters.json");
  REQUIRE(scenario.leontief.has_value());
  CHECK(scenario.leontief->size() == 2);
  CHECK(scenario.leontief->labor() == std::vector<double>{2, 1});
}

TEST_CASE("structured buyers and sellers expand into unit lists") {
  const auto scenario = parse(R"({
    "commodities": ["corn", "iron"],
    "focal": "corn",
    "prices": [0, 2],
    "buyers": [
      {"wealth": 10, "hierarchy": [0, 1], "units": 2},
      {"wealth": 3, "hierarchy": [0, 0]}
    ],
    "sellers": [
      {"recipe": [0, 1.5], "units": 2},
      {"cost": 4}
    ]
  })");
  // v = 10 - 2 = 8 twice, then 3; c = 1.5 * 2 = 3 twice, then 4
  CHECK(scenario.demand_values() == std::vector<double>{8, 8, 3});
  CHECK(scenario.supply_costs() == std::vector<double>{3, 3, 4});
}

TEST_CASE("annotation keys are ignored, unknown keys are not") {
  CHECK_NOTHROW(parse(R"({
    "_comment": "fine",
    "commodities": ["x"],
    "focal": "x",
    "values": [],
    "_trailing": 3
  })"));
  CHECK_THROWS_WITH_AS(parse(R"({"commodities": ["x"], "focal": "x", "valves": []})"),
                       doctest::Contains("unknown key 'valves'"), ScenarioError);
}

TEST_CASE("schema violations fail with field-precise messages") {
  CHECK_THROWS_WITH_AS(parse(R"({"focal": "x"})"),
                       doctest::Contains("missing required key 'commodities'"),
                       ScenarioError);
  CHECK_THROWS_WITH_AS(parse(R"({"commodities": ["a", "a"], "focal": "a"})"),
                       doctest::Contains("duplicate commodity id 'a'"), ScenarioError);
  CHECK_THROWS_WITH_AS(parse(R"({"commodities": ["a"], "focal": "b"})"),
                       doctest::Contains("no commodity with id 'b'"), ScenarioError);
  CHECK_THROWS_WITH_AS(
      parse(R"({"commodities": ["a", "b"], "focal": "a", "prices": [1]})"),
      doctest::Contains("expected 2 entries"), ScenarioError);
  CHECK_THROWS_WITH_AS(
      parse(R"({"commodities": ["a"], "focal": "a", "values": [1], "buyers": []})"),
      doctest::Contains("mutually exclusive"), ScenarioError);
  CHECK_THROWS_AS(parse("{"), ScenarioError);
}

TEST_CASE("hierarchy vectors must match the commodity list and spare the focal") {
  const char* short_hierarchy = R"({
    "commodities": ["a", "b", "c"],
    "focal": "a",
    "prices": [0, 1, 1],
    "buyers": [{"wealth": 5, "hierarchy": [0, 1]}]
  })";
  CHECK_THROWS_WITH_AS(parse(short_hierarchy), doctest::Contains("expected 3 entries"),
                       ScenarioError);

  const char* marked_focal = R"({
    "commodities": ["a", "b"],
    "focal": "a",
    "prices": [0, 1],
    "buyers": [{"wealth": 5, "hierarchy": [1, 0]}]
  })";
  CHECK_THROWS_WITH_AS(parse(marked_focal),
                       doctest::Contains("cannot be more urgent than itself"),
                       ScenarioError);
}

TEST_CASE("structured agents demand a price vector") {
  const char* no_prices = R"({
    "commodities": ["a", "b"],
    "focal": "a",
    "buyers": [{"wealth": 5, "hierarchy": [0, 1]}]
  })";
  CHECK_THROWS_WITH_AS(parse(no_prices), doctest::Contains("require a 'prices' vector"),
                       ScenarioError);
  // direct-cost sellers are fine without prices
  CHECK_NOTHROW(parse(R"({
    "commodities": ["a", "b"],
    "focal": "a",
    "sellers": [{"cost": 2}]
  })"));
}

TEST_CASE("seller groups carry exactly one cost source") {
  const char* both = R"({
    "commodities": ["a"],
    "focal": "a",
    "prices": [1],
    "sellers": [{"recipe": [1], "cost": 2}]
  })";
  CHECK_THROWS_WITH_AS(parse(both), doctest::Contains("exactly one of"), ScenarioError);
}

TEST_CASE("experiments require a smooth block and a sane grid") {
  const char* no_smooth = R"({
    "commodities": ["a"],
    "focal": "a",
    "experiment": {"sizes": [10], "grid": [0, 1]}
  })";
  CHECK_THROWS_WITH_AS(parse(no_smooth), doctest::Contains("needs a 'smooth'"),
                       ScenarioError);

  const char* bad_sizes = R"({
    "commodities": ["a"],
    "focal": "a",
    "smooth": {"family": "pyramidal", "v_max": 10},
    "experiment": {"sizes": [10, 10], "grid": [0, 1]}
  })";
  CHECK_THROWS_AS(parse(bad_sizes), ScenarioError);
}
