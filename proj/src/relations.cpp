#include "cmkt/relations.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace cmkt::relations {

DemandProfile::DemandProfile(std::string commodity_, std::vector<std::string> scenario_ids_,
                             std::vector<double> quantities_)
    : commodity(std::move(commodity_)),
      scenario_ids(std::move(scenario_ids_)),
      quantities(std::move(quantities_)) {
  if (scenario_ids.size() != quantities.size()) {
    throw std::invalid_argument("profile for '" + commodity + "' has " +
                                std::to_string(scenario_ids.size()) + " scenarios but " +
                                std::to_string(quantities.size()) + " quantities");
  }
  for (std::size_t s = 0; s < quantities.size(); ++s) {
    if (!std::isfinite(quantities[s]) || quantities[s] < 0.0) {
      throw std::invalid_argument("profile for '" + commodity + "' has an invalid quantity in scenario '" +
                                  scenario_ids[s] + "'");
    }
  }
}

namespace {

void require_shared_scenarios(const DemandProfile& a, const DemandProfile& b) {
  if (a.scenario_ids == b.scenario_ids) return;
  std::set<std::string> in_a(a.scenario_ids.begin(), a.scenario_ids.end());
  std::set<std::string> in_b(b.scenario_ids.begin(), b.scenario_ids.end());
  std::string message = "profiles '" + a.commodity + "' and '" + b.commodity +
                        "' do not share a scenario set;";
  bool difference = false;
  for (const auto& id : in_a) {
    if (!in_b.count(id)) {
      message += " '" + id + "' only in '" + a.commodity + "';";
      difference = true;
    }
  }
  for (const auto& id : in_b) {
    if (!in_a.count(id)) {
      message += " '" + id + "' only in '" + b.commodity + "';";
      difference = true;
    }
  }
  if (!difference) message += " same ids in a different order";
  throw std::invalid_argument(message);
}

}  // namespace

UrgencyResult urgency(const DemandProfile& first, const DemandProfile& second) {
  require_shared_scenarios(first, second);
  if (first.scenario_ids.empty()) {
    throw std::invalid_argument("urgency needs a non-empty scenario set");
  }
  UrgencyResult result;
  bool premise_fired = false;
  for (std::size_t s = 0; s < first.quantities.size(); ++s) {
    if (first.quantities[s] > 0.0) continue;
    premise_fired = true;
    if (second.quantities[s] > 0.0) {
      result.holds = false;
      result.counterexample = first.scenario_ids[s];
      return result;
    }
  }
  result.holds = true;
  result.vacuous = !premise_fired;
  return result;
}

PairRelation classify(const DemandProfile& first, const DemandProfile& second) {
  require_shared_scenarios(first, second);
  if (first.scenario_ids.empty()) {
    throw std::invalid_argument("classify needs a non-empty scenario set");
  }

  PairRelation rel;
  rel.first = first.commodity;
  rel.second = second.commodity;

  for (std::size_t s = 0; s < first.quantities.size(); ++s) {
    const bool fp = first.quantities[s] > 0.0;
    const bool sp = second.quantities[s] > 0.0;
    const auto& id = first.scenario_ids[s];
    if (fp && sp && !rel.both_positive) rel.both_positive = id;
    if (fp != sp && !rel.sign_disagreement) rel.sign_disagreement = id;
    if (fp && !sp && !rel.first_only) rel.first_only = id;
    if (sp && !fp && !rel.second_only) rel.second_only = id;
  }
  rel.first_more_urgent = urgency(first, second);
  rel.second_more_urgent = urgency(second, first);

  if (!rel.sign_disagreement && rel.both_positive) {
    rel.verdict = Relation::complements;
    return rel;
  }
  if (!rel.both_positive && rel.first_only && rel.second_only) {
    rel.verdict = Relation::substitutes;
    return rel;
  }
  const bool first_urgent = rel.first_more_urgent.holds && !rel.first_more_urgent.vacuous;
  const bool second_urgent =
      rel.second_more_urgent.holds && !rel.second_more_urgent.vacuous;
  if (first_urgent && !second_urgent) {
    rel.verdict = Relation::first_more_urgent;
  } else if (second_urgent && !first_urgent) {
    rel.verdict = Relation::second_more_urgent;
  } else {
    rel.verdict = Relation::unclassified;
  }
  return rel;
}

std::vector<IntransitiveTriple> substitute_intransitivities(
    std::span<const DemandProfile> profiles) {
  const std::size_t n = profiles.size();
  std::vector<std::vector<bool>> sub(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool s = classify(profiles[i], profiles[j]).verdict == Relation::substitutes;
      sub[i][j] = sub[j][i] = s;
    }
  }
  std::vector<IntransitiveTriple> triples;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (b == a || !sub[a][b]) continue;
      for (std::size_t c = a + 1; c < n; ++c) {
        if (c == b || !sub[b][c] || sub[a][c]) continue;
        triples.push_back({profiles[a].commodity, profiles[b].commodity,
                           profiles[c].commodity});
      }
    }
  }
  return triples;
}

HierarchyConsistencyReport consistency_with_hierarchy(
    std::span<const HierarchyConsumer> consumers,
    std::span<const PriceVector> scenarios) {
  if (scenarios.empty()) {
    throw std::invalid_argument("hierarchy consistency needs at least one scenario");
  }
  const std::size_t n = scenarios.front().size();
  for (const auto& p : scenarios) {
    if (p.size() != n) {
      throw std::invalid_argument("all scenarios must price the same commodity set");
    }
  }

  HierarchyConsistencyReport report;
  for (std::size_t c = 0; c < consumers.size(); ++c) {
    const auto& consumer = consumers[c];
    if (consumer.hierarchies.size() != n) {
      throw std::invalid_argument("consumer " + std::to_string(c) + " declares " +
                                  std::to_string(consumer.hierarchies.size()) +
                                  " hierarchy vectors for " + std::to_string(n) +
                                  " goods");
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (consumer.hierarchies[i].size() != n) {
        throw std::invalid_argument("consumer " + std::to_string(c) +
                                    " hierarchy vector " + std::to_string(i) +
                                    " has the wrong length");
      }
      consumer.hierarchies[i].require_focal_unmarked(i);
    }

    // Unit demand indicator per good and scenario.
    std::vector<std::vector<bool>> demanded(n, std::vector<bool>(scenarios.size()));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t s = 0; s < scenarios.size(); ++s) {
        const double v = valuation(consumer.wealth, consumer.hierarchies[i], scenarios[s]);
        demanded[i][s] = unit_demand(v, scenarios[s][i]);
      }
    }

    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || !consumer.hierarchies[i].marks(k)) continue;
        // Declared: k is more urgent than i, so no scenario may drop k
        // while keeping i.
        HierarchyCheck check{c, k, i, CheckStatus::confirmed, std::nullopt};
        bool premise_fired = false;
        for (std::size_t s = 0; s < scenarios.size(); ++s) {
          if (demanded[k][s]) continue;
          premise_fired = true;
          if (demanded[i][s]) {
            check.status = CheckStatus::contradicted;
            check.scenario = s;
            ++report.contradiction_count;
            break;
          }
        }
        if (check.status == CheckStatus::confirmed && !premise_fired) {
          check.status = CheckStatus::vacuous;
        }
        report.checks.push_back(check);
      }
    }

    // Pairs with no declared order either way and both goods demanded in
    // every scenario carry no behavioral information at all.
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        if (consumer.hierarchies[b].marks(a) || consumer.hierarchies[a].marks(b)) continue;
        const bool a_always = std::all_of(demanded[a].begin(), demanded[a].end(),
                                          [](bool d) { return d; });
        const bool b_always = std::all_of(demanded[b].begin(), demanded[b].end(),
                                          [](bool d) { return d; });
        if (a_always && b_always) {
          report.incomparable.push_back({c, a, b});
        }
      }
    }
  }
  return report;
}

std::vector<DemandProfile> profiles_from_csv(const io::CsvTable& table) {
  // Ids are free-form strings, so a header row is the only way to tell
  // data from labels; insist on the canonical one.
  if (table.header != std::vector<std::string>{"scenario", "commodity", "quantity"}) {
    throw std::runtime_error(
        "profiles CSV needs the header row 'scenario,commodity,quantity'");
  }
  std::vector<std::string> scenario_order;
  std::set<std::string> seen_scenarios;
  std::vector<std::string> commodity_order;
  std::map<std::string, std::map<std::string, double>> data;

  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row.size() != 3) {
      throw std::runtime_error("profiles row " + std::to_string(r + 1) +
                               ": expected 3 fields (scenario, commodity, quantity), got " +
                               std::to_string(row.size()));
    }
    const std::string& scenario = row[0];
    const std::string& commodity = row[1];
    const double quantity =
        io::parse_field(row[2], "profiles row " + std::to_string(r + 1) + " quantity");
    if (seen_scenarios.insert(scenario).second) scenario_order.push_back(scenario);
    auto [it, inserted] = data.try_emplace(commodity);
    if (inserted) commodity_order.push_back(commodity);
    if (!it->second.emplace(scenario, quantity).second) {
      throw std::runtime_error("duplicate profile entry for commodity '" + commodity +
                               "' in scenario '" + scenario + "'");
    }
  }

  std::vector<DemandProfile> profiles;
  for (const auto& commodity : commodity_order) {
    const auto& by_scenario = data[commodity];
    std::vector<double> quantities;
    for (const auto& scenario : scenario_order) {
      auto it = by_scenario.find(scenario);
      if (it == by_scenario.end()) {
        throw std::runtime_error("commodity '" + commodity +
                                 "' is missing scenario '" + scenario + "'");
      }
      quantities.push_back(it->second);
    }
    profiles.emplace_back(commodity, scenario_order, std::move(quantities));
  }
  return profiles;
}

}  // namespace cmkt::relations
