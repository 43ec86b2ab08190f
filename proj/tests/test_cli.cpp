#include <unistd.h>

#include <filesystem>
#include <string>
#include <vector>

#include "cmkt/cli.hpp"
#include "cmkt/io.hpp"
#include "cmkt/schedules.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace cmkt;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarioDir = CMKT_SCENARIO_DIR;

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("cmkt_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "cmkt");
  return cli::run(args);
}

// Rebuild a schedule from a grid table: between grid prices the counts
// pin each unit's reservation price to the row where it enters or leaves.
StepSchedule demand_from_grid(const std::vector<std::pair<double, std::int64_t>>& rows) {
  std::vector<double> values;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::int64_t next = (i + 1 < rows.size()) ? rows[i + 1].second : 0;
    const std::int64_t mass = rows[i].second - next;
    for (std::int64_t m = 0; m < mass; ++m) values.push_back(rows[i].first);
  }
  return build_demand(values);
}

StepSchedule supply_from_grid(const std::vector<std::pair<double, std::int64_t>>& rows) {
  std::vector<double> costs;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::int64_t prev = (i > 0) ? rows[i - 1].second : 0;
    const std::int64_t mass = rows[i].second - prev;
    for (std::int64_t m = 0; m < mass; ++m) costs.push_back(rows[i].first);
  }
  return build_supply(costs);
}

}  // namespace

TEST_CASE("schedule emits a monotone grid table") {
  TempDir tmp;
  const auto out = tmp.file("schedule.csv");
  const int rc = run({"schedule", (kScenarioDir / "discrete_market.json").string(),
                      "--grid", "0:12:1", "--out", out});
  REQUIRE(rc == 0);
  const auto table = io::read_csv(out);
  CHECK(table.header == std::vector<std::string>{"price", "demand_qty", "supply_qty"});
  REQUIRE(table.rows.size() == 13);
  std::int64_t d_prev = 5;
  std::int64_t s_prev = -1;
  for (const auto& row : table.rows) {
    const auto d = static_cast<std::int64_t>(io::parse_field(row[1], "demand"));
    const auto s = static_cast<std::int64_t>(io::parse_field(row[2], "supply"));
    CHECK(d <= d_prev);
    CHECK(s >= s_prev);
    d_prev = d;
    s_prev = s;
  }
  CHECK(table.rows.front()[1] == "4");  // D(0) = capacity
  CHECK(table.rows.back()[2] == "4");   // S(12) = capacity
}

TEST_CASE("schedule csv round-trips through re-ingestion") {
  TempDir tmp;
  const auto out = tmp.file("schedule.csv");
  REQUIRE(run({"schedule", (kScenarioDir / "discrete_market.json").string(), "--out",
               out}) == 0);
  const auto table = io::read_csv(out);

  std::vector<std::pair<double, std::int64_t>> demand_rows;
  std::vector<std::pair<double, std::int64_t>> supply_rows;
  std::vector<double> grid;
  for (const auto& row : table.rows) {
    const double p = io::parse_field(row[0], "price");
    grid.push_back(p);
    demand_rows.emplace_back(p, static_cast<std::int64_t>(io::parse_field(row[1], "d")));
    supply_rows.emplace_back(p, static_cast<std::int64_t>(io::parse_field(row[2], "s")));
  }
  const auto demand = demand_from_grid(demand_rows);
  const auto supply = supply_from_grid(supply_rows);
  const auto original_demand = build_demand({10, 8, 6, 4});
  const auto original_supply = build_supply({3, 5, 7, 9});
  for (double p : grid) {
    CHECK(demand.evaluate(p) == original_demand.evaluate(p));
    CHECK(supply.evaluate(p) == original_supply.evaluate(p));
  }
}

TEST_CASE("schedule honors the side filter and empty sides") {
  TempDir tmp;
  const auto scenario = tmp.file("empty_buyers.json");
  io::write_text(scenario, R"({
    "commodities": ["x"],
    "focal": "x",
    "values": [],
    "costs": [2, 3]
  })");
  const auto out = tmp.file("demand_only.csv");
  REQUIRE(run({"schedule", scenario, "--side", "demand", "--grid", "0:4:1", "--out",
               out}) == 0);
  const auto table = io::read_csv(out);
  CHECK(table.header == std::vector<std::string>{"price", "demand_qty"});
  for (const auto& row : table.rows) CHECK(row[1] == "0");
}

TEST_CASE("equilibrium reports the crossing as json") {
  TempDir tmp;
  const auto out = tmp.file("equilibrium.json");
  REQUIRE(run({"equilibrium", (kScenarioDir / "discrete_market.json").string(), "--out",
               out}) == 0);
  const auto j = nlohmann::json::parse(io::read_text(out));
  CHECK(j["quantity"] == 2);
  CHECK(j["price_low"] == 6.0);
  CHECK(j["price_high"] == 7.0);
  CHECK(j["degenerate"] == false);
  CHECK(j["surplus"] == 10.0);
}

TEST_CASE("a degenerate market still exits zero") {
  TempDir tmp;
  const auto scenario = tmp.file("degenerate.json");
  io::write_text(scenario, R"({
    "commodities": ["x"],
    "focal": "x",
    "values": [1],
    "costs": [2]
  })");
  const auto out = tmp.file("equilibrium.json");
  CHECK(run({"equilibrium", scenario, "--out", out}) == 0);
  const auto j = nlohmann::json::parse(io::read_text(out));
  CHECK(j["quantity"] == 0);
  CHECK(j["degenerate"] == true);
}

TEST_CASE("smooth emits the pyramid as the square of the triangle") {
  TempDir tmp;
  const auto pyramid_out = tmp.file("pyramid.csv");
  const auto triangle_out = tmp.file("triangle.csv");
  REQUIRE(run({"smooth", "--family", "pyramidal", "--vmax", "125", "--grid", "0:125:1",
               "--out", pyramid_out}) == 0);
  REQUIRE(run({"smooth", "--family", "triangular", "--vmax", "125", "--grid",
               "0:125:1", "--out", triangle_out}) == 0);
  const auto pyramid = io::read_csv(pyramid_out);
  const auto triangle = io::read_csv(triangle_out);
  REQUIRE(pyramid.rows.size() == 126);
  REQUIRE(triangle.rows.size() == 126);
  for (std::size_t i = 0; i < 126; ++i) {
    const double tri = io::parse_field(triangle.rows[i][1], "triangle quantity");
    const double pyr = io::parse_field(pyramid.rows[i][1], "pyramid quantity");
    CHECK(pyr == tri * tri);
  }
  CHECK(pyramid.rows.front()[1] == "1");  // capacity at p = 0
  CHECK(pyramid.rows.back()[1] == "0");   // nothing at p = 125
}

TEST_CASE("leontief prices the hunting economy from the scenario block") {
  TempDir tmp;
  const auto out = tmp.file("hunters.json");
  REQUIRE(run({"leontief", (kScenarioDir / "leontief_hunters.json").string(), "--out",
               out}) == 0);
  const auto j = nlohmann::json::parse(io::read_text(out));
  CHECK(j["productive"] == true);
  CHECK(j["labor_values"][0] == doctest::Approx(2.0));
  CHECK(j["relative_prices"][0][1] == doctest::Approx(2.0));
}

TEST_CASE("leontief ingests csv matrices") {
  TempDir tmp;
  const auto out = tmp.file("hunters.json");
  REQUIRE(run({"leontief", "--matrix", (kScenarioDir / "hunters_inputs.csv").string(),
               "--labor", (kScenarioDir / "hunters_labor.csv").string(), "--out",
               out}) == 0);
  const auto j = nlohmann::json::parse(io::read_text(out));
  CHECK(j["relative_prices"][0][1] == doctest::Approx(2.0));
}

TEST_CASE("leontief csv headers are optional") {
  TempDir tmp;
  const auto matrix = tmp.file("with_header.csv");
  const auto labor = tmp.file("labor_header.csv");
  io::write_text(matrix, "ale,barley\n0,0\n0.5,0\n");
  io::write_text(labor, "labor\n1\n1\n");
  const auto out = tmp.file("out.json");
  REQUIRE(run({"leontief", "--matrix", matrix, "--labor", labor, "--out", out}) == 0);
  const auto j = nlohmann::json::parse(io::read_text(out));
  CHECK(j["labor_values"][0] == doctest::Approx(1.5));
  CHECK(j["labor_values"][1] == doctest::Approx(1.0));
}

TEST_CASE("a non-productive economy exits with the numerical code") {
  TempDir tmp;
  const auto matrix = tmp.file("identity.csv");
  const auto labor = tmp.file("labor.csv");
  io::write_text(matrix, "1,0\n0,1\n");
  io::write_text(labor, "1,1\n");
  CHECK(run({"leontief", "--matrix", matrix, "--labor", labor, "--out",
             tmp.file("out.json")}) == 2);
}

TEST_CASE("aggregate runs the shipped experiment deterministically") {
  TempDir tmp;
  const auto scenario = tmp.file("small_experiment.json");
  io::write_text(scenario, R"({
    "commodities": ["x"],
    "focal": "x",
    "smooth": {"family": "pyramidal", "v_max": 125, "capacity": 1},
    "experiment": {
      "sizes": [100, 1000],
      "replications": 5,
      "base_seed": 42,
      "grid": {"low": 0, "high": 125, "step": 12.5}
    }
  })");
  const auto out_a = tmp.file("report_a.json");
  const auto csv_a = tmp.file("stats_a.csv");
  const auto out_b = tmp.file("report_b.json");
  const auto csv_b = tmp.file("stats_b.csv");
  REQUIRE(run({"aggregate", scenario, "--out", out_a, "--csv", csv_a}) == 0);
  REQUIRE(run({"aggregate", scenario, "--out", out_b, "--csv", csv_b}) == 0);
  CHECK(io::read_text(out_a) == io::read_text(out_b));
  CHECK(io::read_text(csv_a) == io::read_text(csv_b));

  const auto j = nlohmann::json::parse(io::read_text(out_a));
  REQUIRE(j["sizes"].size() == 2);
  CHECK(j["sizes"][1]["mean_ks"].get<double>() < j["sizes"][0]["mean_ks"].get<double>());

  const auto csv = io::read_csv(csv_a);
  CHECK(csv.header == std::vector<std::string>{"size", "replication", "ks"});
  CHECK(csv.rows.size() == 10);

  // --seed overrides the configured base seed
  const auto out_c = tmp.file("report_c.json");
  REQUIRE(run({"aggregate", scenario, "--seed", "7", "--out", out_c}) == 0);
  CHECK(io::read_text(out_c) != io::read_text(out_a));

  // the optional curvature-emergence report rides along
  const auto emergence = tmp.file("emergence.json");
  REQUIRE(run({"aggregate", scenario, "--out", tmp.file("report_d.json"),
               "--convexity", emergence}) == 0);
  const auto e = nlohmann::json::parse(io::read_text(emergence));
  CHECK(e["size"] == 1000);
  CHECK(e["convex"] == true);
  CHECK(e["second_differences"].size() == e["grid"].size() - 2);
}

TEST_CASE("aggregate without an experiment block is a usage error") {
  CHECK(run({"aggregate", (kScenarioDir / "discrete_market.json").string()}) == 1);
}

TEST_CASE("relations classifies profiles from csv") {
  TempDir tmp;
  const auto profiles = tmp.file("profiles.csv");
  io::write_text(profiles,
                 "scenario,commodity,quantity\n"
                 "s1,tea,1\ns1,coffee,0\ns1,sugar,2\n"
                 "s2,tea,0\ns2,coffee,3\ns2,sugar,1\n"
                 "s3,tea,1\ns3,coffee,0\ns3,sugar,1\n");
  const auto out = tmp.file("relations.json");
  REQUIRE(run({"relations", "--profiles", profiles, "--out", out}) == 0);
  const auto j = nlohmann::json::parse(io::read_text(out));
  REQUIRE(j["pairs"].size() == 3);
  CHECK(j["pairs"][0]["first"] == "tea");
  CHECK(j["pairs"][0]["second"] == "coffee");
  CHECK(j["pairs"][0]["verdict"] == "substitutes");
  // sugar is demanded everywhere, tea only with sugar
  CHECK(j["pairs"][1]["first"] == "tea");
  CHECK(j["pairs"][1]["second"] == "sugar");
}

TEST_CASE("bad inputs exit with the usage code") {
  TempDir tmp;
  CHECK(run({"equilibrium", tmp.file("missing.json")}) == 1);
  const auto bad = tmp.file("bad.json");
  io::write_text(bad, R"({"commodities": ["x"]})");
  CHECK(run({"equilibrium", bad}) == 1);
  CHECK(run({"schedule", bad}) == 1);
  CHECK(run({"nonsense"}) == 1);
}

TEST_CASE("every subcommand is byte-deterministic across runs") {
  TempDir tmp;
  const auto discrete = (kScenarioDir / "discrete_market.json").string();
  const std::vector<std::vector<std::string>> invocations{
      {"schedule", discrete, "--grid", "0:12:0.5"},
      {"equilibrium", discrete},
      {"smooth", "--family", "pyramidal", "--vmax", "125", "--grid", "0:125:2.5"},
      {"leontief", (kScenarioDir / "leontief_hunters.json").string()},
  };
  int index = 0;
  for (const auto& base : invocations) {
    const auto out_a = tmp.file("a" + std::to_string(index));
    const auto out_b = tmp.file("b" + std::to_string(index));
    ++index;
    auto args_a = base;
    args_a.push_back("--out");
    args_a.push_back(out_a);
    auto args_b = base;
    args_b.push_back("--out");
    args_b.push_back(out_b);
    REQUIRE(run(args_a) == 0);
    REQUIRE(run(args_b) == 0);
    const auto text = io::read_text(out_a);
    CHECK(text == io::read_text(out_b));
    CHECK(!text.empty());
    CHECK(text.back() == '\n');
  }
}
