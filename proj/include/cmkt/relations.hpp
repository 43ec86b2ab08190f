#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cmkt/agents.hpp"
#include "cmkt/io.hpp"

// Behavioral taxonomy of commodity pairs, read off demand profiles
// observed over a shared set of price scenarios.  Complements are
// demanded together or not at all; substitutes exclude one another; and
// the residual ordering is urgency: a good is more urgent than another
// when failing to demand it implies the other is not demanded either.
// All relations are material implications over the finite scenario set,
// so vacuous satisfaction is surfaced rather than silently classified.

namespace cmkt::relations {

struct DemandProfile {
  DemandProfile(std::string commodity, std::vector<std::string> scenario_ids,
                std::vector<double> quantities);

  std::string commodity;
  std::vector<std::string> scenario_ids;
  std::vector<double> quantities;  // demanded quantity per scenario, >= 0
};

struct UrgencyResult {
  bool holds = false;
  bool vacuous = false;  // premise never fired: the first good is demanded everywhere
  std::optional<std::string> counterexample;  // first scenario breaking the implication
};

// Tests "first is more urgent than second": every scenario in which the
// first good goes undemanded must leave the second undemanded too.
UrgencyResult urgency(const DemandProfile& first, const DemandProfile& second);

enum class Relation {
  complements,
  substitutes,
  first_more_urgent,
  second_more_urgent,
  unclassified,
};

struct PairRelation {
  std::string first;
  std::string second;
  Relation verdict = Relation::unclassified;

  // Witness scenarios for / against each clause.
  std::optional<std::string> both_positive;      // supports complements
  std::optional<std::string> sign_disagreement;  // refutes complements
  std::optional<std::string> first_only;         // supports substitutes
  std::optional<std::string> second_only;        // supports substitutes

  UrgencyResult first_more_urgent;   // urgency(first, second)
  UrgencyResult second_more_urgent;  // urgency(second, first)
};

// Throws std::invalid_argument when the profiles disagree on the scenario
// set, listing the difference.  Urgency verdicts require a non-vacuous
// implication; a pair that only satisfies its tests vacuously stays
// unclassified with the vacuity recorded.
PairRelation classify(const DemandProfile& first, const DemandProfile& second);

// Triples (a, b, c) where a/b and b/c are substitutes but a/c are not.
// Substitutability defined over a finite scenario set need not be
// transitive; these are the witnesses.
struct IntransitiveTriple {
  std::string a;
  std::string b;
  std::string c;
};

std::vector<IntransitiveTriple> substitute_intransitivities(
    std::span<const DemandProfile> profiles);

// One consumer with a full family of urgency indicator vectors, one per
// commodity (vector i marks the goods more urgent than good i).
struct HierarchyConsumer {
  double wealth;
  std::vector<NeedsHierarchy> hierarchies;
};

enum class CheckStatus { confirmed, vacuous, contradicted };

struct HierarchyCheck {
  std::size_t consumer;
  std::size_t urgent_good;  // declared more urgent
  std::size_t other_good;
  CheckStatus status;
  std::optional<std::size_t> scenario;  // witness for a contradiction
};

struct IncomparablePair {
  std::size_t consumer;
  std::size_t good_a;
  std::size_t good_b;
};

struct HierarchyConsistencyReport {
  std::vector<HierarchyCheck> checks;  // one per declared urgency relation
  std::vector<IncomparablePair> incomparable;  // undeclared pairs, vacuous both ways
  std::size_t contradiction_count = 0;

  bool consistent() const { return contradiction_count == 0; }
};

// Evaluates each consumer's unit demand for every good in every price
// scenario and checks that the declared urgency indicators are never
// contradicted by the behavioral urgency test.
HierarchyConsistencyReport consistency_with_hierarchy(
    std::span<const HierarchyConsumer> consumers,
    std::span<const PriceVector> scenarios);

// CSV ingestion: header row 'scenario,commodity,quantity' required (ids
// are free-form strings, so the header is what marks the first line as
// labels).  Scenario order is first appearance; every commodity must
// cover the identical scenario set.
std::vector<DemandProfile> profiles_from_csv(const io::CsvTable& table);

}  // namespace cmkt::relations
