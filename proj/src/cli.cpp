#include "cmkt/cli.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <optional>
#include <set>

#include "CLI11.hpp"
#include "json.hpp"

#include "cmkt/aggregation.hpp"
#include "cmkt/io.hpp"
#include "cmkt/leontief.hpp"
#include "cmkt/relations.hpp"
#include "cmkt/scenario.hpp"
#include "cmkt/schedules.hpp"
#include "cmkt/smooth.hpp"

namespace cmkt::cli {

namespace {

using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    io::write_text(out_path, text);
  }
}

std::vector<double> parse_grid_spec(const std::string& spec) {
  const auto first = spec.find(':');
  const auto second = spec.find(':', first == std::string::npos ? first : first + 1);
  if (first == std::string::npos || second == std::string::npos) {
    throw std::runtime_error("--grid expects low:high:step, got '" + spec + "'");
  }
  const double low = io::parse_field(spec.substr(0, first), "--grid low");
  const double high = io::parse_field(spec.substr(first + 1, second - first - 1), "--grid high");
  const double step = io::parse_field(spec.substr(second + 1), "--grid step");
  if (low < 0.0 || !(high >= low) || !(step > 0.0)) {
    throw std::runtime_error("--grid requires 0 <= low <= high and step > 0");
  }
  std::vector<double> grid;
  const auto count = static_cast<std::size_t>((high - low) / step + 1e-9) + 1;
  for (std::size_t i = 0; i < count; ++i) {
    grid.push_back(low + static_cast<double>(i) * step);
  }
  return grid;
}

// Default schedule grid: every breakpoint, the midpoints between
// neighbors, zero, and one past the top, so each flat segment shows up.
std::vector<double> default_grid(const std::vector<const StepSchedule*>& schedules) {
  std::set<double> prices{0.0};
  for (const auto* s : schedules) {
    for (const auto& bp : s->breakpoints()) prices.insert(bp.price);
  }
  std::vector<double> grid(prices.begin(), prices.end());
  std::vector<double> expanded;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    expanded.push_back(grid[i]);
    if (i + 1 < grid.size()) expanded.push_back(0.5 * (grid[i] + grid[i + 1]));
  }
  expanded.push_back(grid.back() + 1.0);
  return expanded;
}

int run_schedule(const std::string& scenario_path, const std::string& side,
                 const std::string& grid_spec, const std::string& out_path,
                 const std::string& json_path) {
  const Scenario scenario = parse_scenario(scenario_path);
  const bool want_demand = side != "supply";
  const bool want_supply = side != "demand";

  std::optional<StepSchedule> demand;
  std::optional<StepSchedule> supply;
  if (want_demand) demand.emplace(build_demand(scenario.demand_values()));
  if (want_supply) supply.emplace(build_supply(scenario.supply_costs()));

  std::vector<const StepSchedule*> included;
  if (demand) included.push_back(&*demand);
  if (supply) included.push_back(&*supply);

  const std::vector<double> grid =
      grid_spec.empty() ? default_grid(included) : parse_grid_spec(grid_spec);

  std::string csv = "price";
  if (demand) csv += ",demand_qty";
  if (supply) csv += ",supply_qty";
  csv += '\n';
  for (double p : grid) {
    csv += io::format_double(p);
    if (demand) {
      csv += ',';
      csv += io::format_int(demand->evaluate(p));
    }
    if (supply) {
      csv += ',';
      csv += io::format_int(supply->evaluate(p));
    }
    csv += '\n';
  }
  emit(csv, out_path);

  if (!json_path.empty()) {
    ordered_json j;
    if (demand) j["demand"] = nlohmann::json::parse(demand->to_json());
    if (supply) j["supply"] = nlohmann::json::parse(supply->to_json());
    io::write_text(json_path, j.dump(2) + "\n");
  }
  return kExitOk;
}

int run_equilibrium(const std::string& scenario_path, const std::string& out_path) {
  const Scenario scenario = parse_scenario(scenario_path);
  const auto values = scenario.demand_values();
  const auto costs = scenario.supply_costs();
  const auto result = cross(build_demand(values), build_supply(costs));

  ordered_json j;
  j["quantity"] = result.quantity;
  j["price_low"] = result.price_low;
  j["price_high"] = result.price_high;  // non-finite serializes as null
  j["degenerate"] = result.degenerate;
  j["surplus"] = max_surplus(values, costs);
  emit(j.dump(2) + "\n", out_path);
  return kExitOk;
}

int run_smooth(const SmoothSpec& spec, const std::string& grid_spec,
               const std::string& out_path) {
  const SmoothModel model = spec.to_model();
  const std::vector<double> grid = parse_grid_spec(grid_spec);

  std::vector<double> share(grid.size());
  model.fraction_batch(grid, share);

  std::string csv = "price,quantity,slope,second_difference\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    csv += io::format_double(grid[i]);
    csv += ',';
    csv += io::format_double(model.capacity() * share[i]);
    csv += ',';
    csv += io::format_double(slope(model, grid[i]));
    csv += ',';
    if (i > 0 && i + 1 < grid.size()) {
      const double d = model.capacity() * (share[i + 1] - 2.0 * share[i] + share[i - 1]);
      csv += io::format_double(d);
    }
    csv += '\n';
  }
  emit(csv, out_path);
  return kExitOk;
}

LeontiefEconomy leontief_from_csv(const std::string& matrix_path,
                                  const std::string& labor_path) {
  const auto matrix_table = io::read_csv(matrix_path);
  std::vector<std::vector<double>> inputs;
  for (std::size_t r = 0; r < matrix_table.rows.size(); ++r) {
    std::vector<double> row;
    for (std::size_t c = 0; c < matrix_table.rows[r].size(); ++c) {
      row.push_back(io::parse_field(matrix_table.rows[r][c],
                                    matrix_path + " row " + std::to_string(r + 1)));
    }
    inputs.push_back(std::move(row));
  }

  const auto labor_table = io::read_csv(labor_path);
  std::vector<double> labor;
  for (const auto& row : labor_table.rows) {
    for (const auto& field : row) {
      labor.push_back(io::parse_field(field, labor_path));
    }
  }
  return LeontiefEconomy(std::move(inputs), std::move(labor));
}

int run_leontief(const std::string& scenario_path, const std::string& matrix_path,
                 const std::string& labor_path, const std::string& out_path) {
  std::optional<LeontiefEconomy> economy;
  if (!scenario_path.empty()) {
    const Scenario scenario = parse_scenario(scenario_path);
    if (!scenario.leontief) {
      std::cerr << scenario_path << " has no 'leontief' block\n";
      return kExitUsage;
    }
    economy = *scenario.leontief;
  } else {
    if (matrix_path.empty() || labor_path.empty()) {
      std::cerr << "leontief needs either a scenario or --matrix and --labor\n";
      return kExitUsage;
    }
    economy = leontief_from_csv(matrix_path, labor_path);
  }

  const auto productivity = productivity_check(economy->inputs());
  if (!productivity.productive) {
    std::cerr << "economy is not productive: spectral radius estimate "
              << io::format_double(productivity.spectral_radius) << " is not below 1\n";
    return kExitNumerical;
  }
  const auto values = labor_values(*economy);
  const auto ratios = relative_prices(values);

  ordered_json j;
  j["productive"] = true;
  j["spectral_radius"] = productivity.spectral_radius;
  j["labor_values"] = values;
  j["relative_prices"] = ratios;
  emit(j.dump(2) + "\n", out_path);
  return kExitOk;
}

int run_aggregate(const std::string& scenario_path, std::optional<std::uint64_t> seed,
                  const std::string& out_path, const std::string& csv_path,
                  const std::string& convexity_path) {
  const Scenario scenario = parse_scenario(scenario_path);
  if (!scenario.smooth || !scenario.experiment) {
    std::cerr << scenario_path
              << " needs 'smooth' and 'experiment' blocks for aggregation\n";
    return kExitUsage;
  }
  const SmoothModel model = scenario.smooth->to_model();
  ExperimentConfig cfg = scenario.experiment->to_config(model);
  if (seed) cfg.base_seed = *seed;

  const ConvergenceReport report = run_convergence(cfg);

  ordered_json j;
  j["base_seed"] = cfg.base_seed;
  ordered_json model_json;
  model_json["side"] = model.side() == Side::demand ? "demand" : "supply";
  switch (model.family()) {
    case SmoothFamily::uniform_triangular:
      model_json["family"] = "uniform";
      break;
    case SmoothFamily::pyramidal_power:
      model_json["family"] = "pyramidal";
      model_json["power"] = model.power();
      break;
    case SmoothFamily::custom_density:
      model_json["family"] = "custom";
      break;
  }
  model_json["support"] = {model.low(), model.high()};
  model_json["capacity"] = model.capacity();
  j["model"] = model_json;
  j["replications"] = cfg.replications;
  j["grid"] = cfg.grid;
  auto& sizes = j["sizes"] = ordered_json::array();
  for (std::size_t s = 0; s < report.summary.size(); ++s) {
    ordered_json row;
    row["size"] = report.summary[s].size;
    row["mean_ks"] = report.summary[s].mean_ks;
    row["max_ks"] = report.summary[s].max_ks;
    std::vector<double> ks;
    for (std::size_t r = 0; r < cfg.replications; ++r) {
      ks.push_back(report.stats[s * cfg.replications + r].ks);
    }
    row["ks"] = ks;
    sizes.push_back(row);
  }
  emit(j.dump(2) + "\n", out_path);

  if (!csv_path.empty()) {
    std::string csv = "size,replication,ks\n";
    for (const auto& stat : report.stats) {
      csv += io::format_int(static_cast<std::int64_t>(stat.size));
      csv += ',';
      csv += io::format_int(static_cast<std::int64_t>(stat.replication));
      csv += ',';
      csv += io::format_double(stat.ks);
      csv += '\n';
    }
    io::write_text(csv_path, csv);
  }

  if (!convexity_path.empty()) {
    const auto emergence = run_convexity_emergence(cfg);
    ordered_json e;
    e["size"] = emergence.size;
    e["bins"] = emergence.bins;
    e["bin_width"] = emergence.bin_width;
    e["grid"] = emergence.grid;
    e["smoothed"] = emergence.smoothed;
    e["second_differences"] = emergence.second_differences;
    e["noise_bands"] = emergence.noise_bands;
    e["convex"] = emergence.convex;
    e["affine"] = emergence.affine;
    if (emergence.first_violation) {
      e["first_violation"] = *emergence.first_violation;
    }
    io::write_text(convexity_path, e.dump(2) + "\n");
  }
  return kExitOk;
}

ordered_json urgency_json(const relations::UrgencyResult& result) {
  ordered_json j;
  j["holds"] = result.holds;
  j["vacuous"] = result.vacuous;
  if (result.counterexample) j["counterexample"] = *result.counterexample;
  return j;
}

int run_relations(const std::string& profiles_path, const std::string& out_path) {
  const auto profiles = relations::profiles_from_csv(io::read_csv(profiles_path));
  if (profiles.size() < 2) {
    std::cerr << profiles_path << " must describe at least two commodities\n";
    return kExitUsage;
  }

  ordered_json j;
  auto& ids = j["commodities"] = ordered_json::array();
  for (const auto& p : profiles) ids.push_back(p.commodity);

  auto& pairs = j["pairs"] = ordered_json::array();
  for (std::size_t a = 0; a < profiles.size(); ++a) {
    for (std::size_t b = a + 1; b < profiles.size(); ++b) {
      const auto rel = relations::classify(profiles[a], profiles[b]);
      ordered_json pair;
      pair["first"] = rel.first;
      pair["second"] = rel.second;
      switch (rel.verdict) {
        case relations::Relation::complements:
          pair["verdict"] = "complements";
          break;
        case relations::Relation::substitutes:
          pair["verdict"] = "substitutes";
          break;
        case relations::Relation::first_more_urgent:
          pair["verdict"] = rel.first + " more urgent";
          break;
        case relations::Relation::second_more_urgent:
          pair["verdict"] = rel.second + " more urgent";
          break;
        case relations::Relation::unclassified:
          pair["verdict"] = "unclassified";
          break;
      }
      if (rel.both_positive) pair["both_positive"] = *rel.both_positive;
      if (rel.sign_disagreement) pair["sign_disagreement"] = *rel.sign_disagreement;
      if (rel.first_only) pair["first_only"] = *rel.first_only;
      if (rel.second_only) pair["second_only"] = *rel.second_only;
      pair["first_more_urgent"] = urgency_json(rel.first_more_urgent);
      pair["second_more_urgent"] = urgency_json(rel.second_more_urgent);
      pairs.push_back(pair);
    }
  }

  auto& triples = j["intransitive_substitute_triples"] = ordered_json::array();
  for (const auto& t : relations::substitute_intransitivities(profiles)) {
    triples.push_back({t.a, t.b, t.c});
  }
  emit(j.dump(2) + "\n", out_path);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"classical supply and demand toolkit"};
  app.require_subcommand(1);

  // schedule
  auto* schedule = app.add_subcommand(
      "schedule", "Emit demand/supply step schedules over a price grid as CSV");
  std::string schedule_scenario;
  std::string schedule_side = "both";
  std::string schedule_grid;
  std::string schedule_out;
  std::string schedule_json;
  schedule->add_option("scenario", schedule_scenario, "scenario JSON file")->required();
  schedule->add_option("--side", schedule_side, "both, demand or supply")
      ->check(CLI::IsMember({"both", "demand", "supply"}));
  schedule->add_option("--grid", schedule_grid,
                       "low:high:step (default: breakpoints and midpoints)");
  schedule->add_option("--out", schedule_out, "CSV output path (default stdout)");
  schedule->add_option("--json", schedule_json, "also write breakpoints as JSON");

  // equilibrium
  auto* equilibrium =
      app.add_subcommand("equilibrium", "Competitive crossing and maximal surplus");
  std::string equilibrium_scenario;
  std::string equilibrium_out;
  equilibrium->add_option("scenario", equilibrium_scenario, "scenario JSON file")
      ->required();
  equilibrium->add_option("--out", equilibrium_out, "JSON output path (default stdout)");

  // smooth
  auto* smooth = app.add_subcommand(
      "smooth", "Evaluate a parametric smooth schedule over a price grid");
  std::string smooth_family;
  std::string smooth_side = "demand";
  std::string smooth_support;
  double smooth_vmax = 0.0;
  double smooth_capacity = 1.0;
  double smooth_power = 2.0;
  std::string smooth_grid;
  std::string smooth_out;
  smooth->add_option("--family", smooth_family, "triangular, uniform or pyramidal")
      ->required()
      ->check(CLI::IsMember({"triangular", "uniform", "pyramidal"}));
  smooth->add_option("--side", smooth_side, "demand or supply")
      ->check(CLI::IsMember({"demand", "supply"}));
  smooth->add_option("--support", smooth_support, "low:high support bounds");
  smooth->add_option("--vmax", smooth_vmax, "top of a [0, vmax] support");
  smooth->add_option("--capacity", smooth_capacity, "schedule capacity (default 1)");
  smooth->add_option("--power", smooth_power, "pyramidal power (default 2)");
  smooth->add_option("--grid", smooth_grid, "low:high:step evaluation grid")->required();
  smooth->add_option("--out", smooth_out, "CSV output path (default stdout)");

  // leontief
  auto* leontief = app.add_subcommand(
      "leontief", "Embodied-labor values of an input-output economy");
  std::string leontief_scenario;
  std::string leontief_matrix;
  std::string leontief_labor;
  std::string leontief_out;
  leontief->add_option("scenario", leontief_scenario,
                       "scenario JSON file with a 'leontief' block");
  leontief->add_option("--matrix", leontief_matrix, "input coefficient matrix CSV");
  leontief->add_option("--labor", leontief_labor, "direct labor vector CSV");
  leontief->add_option("--out", leontief_out, "JSON output path (default stdout)");

  // aggregate
  auto* aggregate = app.add_subcommand(
      "aggregate", "Monte Carlo smoothing-convergence experiment");
  std::string aggregate_scenario;
  std::uint64_t aggregate_seed = 0;
  bool aggregate_seed_set = false;
  std::string aggregate_out;
  std::string aggregate_csv;
  std::string aggregate_convexity;
  aggregate->add_option("scenario", aggregate_scenario, "scenario JSON file")->required();
  aggregate->add_option("--seed", aggregate_seed, "override the experiment base seed")
      ->each([&](const std::string&) { aggregate_seed_set = true; });
  aggregate->add_option("--out", aggregate_out, "JSON report path (default stdout)");
  aggregate->add_option("--csv", aggregate_csv, "per-replication CSV path");
  aggregate->add_option("--convexity", aggregate_convexity,
                        "also write the curvature-emergence report (JSON)");

  // relations
  auto* relations_cmd = app.add_subcommand(
      "relations", "Classify commodity pairs from observed demand profiles");
  std::string relations_profiles;
  std::string relations_out;
  relations_cmd
      ->add_option("--profiles", relations_profiles,
                   "CSV of scenario, commodity, quantity rows")
      ->required();
  relations_cmd->add_option("--out", relations_out, "JSON report path (default stdout)");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (schedule->parsed()) {
      return run_schedule(schedule_scenario, schedule_side, schedule_grid, schedule_out,
                          schedule_json);
    }
    if (equilibrium->parsed()) {
      return run_equilibrium(equilibrium_scenario, equilibrium_out);
    }
    if (smooth->parsed()) {
      SmoothSpec spec;
      spec.side = smooth_side == "demand" ? Side::demand : Side::supply;
      spec.capacity = smooth_capacity;
      if (smooth_family == "pyramidal") {
        spec.family = SmoothFamily::pyramidal_power;
        spec.power = smooth_power;
        if (!(smooth_vmax > 0.0)) {
          std::cerr << "--family pyramidal needs --vmax > 0\n";
          return kExitUsage;
        }
        spec.low = 0.0;
        spec.high = smooth_vmax;
        if (spec.side != Side::demand) {
          std::cerr << "the pyramidal family is demand-side\n";
          return kExitUsage;
        }
      } else {
        spec.family = SmoothFamily::uniform_triangular;
        if (!smooth_support.empty()) {
          const auto colon = smooth_support.find(':');
          if (colon == std::string::npos) {
            std::cerr << "--support expects low:high\n";
            return kExitUsage;
          }
          spec.low = io::parse_field(smooth_support.substr(0, colon), "--support low");
          spec.high = io::parse_field(smooth_support.substr(colon + 1), "--support high");
        } else if (smooth_vmax > 0.0) {
          spec.low = 0.0;
          spec.high = smooth_vmax;
        } else {
          std::cerr << "--family " << smooth_family << " needs --support or --vmax\n";
          return kExitUsage;
        }
      }
      return run_smooth(spec, smooth_grid, smooth_out);
    }
    if (leontief->parsed()) {
      return run_leontief(leontief_scenario, leontief_matrix, leontief_labor,
                          leontief_out);
    }
    if (aggregate->parsed()) {
      return run_aggregate(aggregate_scenario,
                           aggregate_seed_set ? std::optional(aggregate_seed)
                                              : std::nullopt,
                           aggregate_out, aggregate_csv, aggregate_convexity);
    }
    if (relations_cmd->parsed()) {
      return run_relations(relations_profiles, relations_out);
    }
  } catch (const NonProductiveEconomyError& e) {
    std::cerr << e.what() << "\n";
    return kExitNumerical;
  } catch (const ScenarioError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace cmkt::cli
