#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cmkt/agents.hpp"

// Exact market schedules of a finite population.  Market supply at a
// price is the number of units whose cost is at or below it (a cumulative
// count of costs); market demand is the number of units valued at or
// above it (a complementary count of reservation prices).  Both are
// integer-valued monotone step functions; no interpolation happens here.

namespace cmkt {

struct Breakpoint {
  double price;
  std::int64_t quantity;  // schedule value at `price` under the side's convention
};

class StepSchedule {
 public:
  // Demand from a list of buyer reservation prices.  Values must be
  // finite; negative values can never be demanded at a price >= 0 and are
  // excluded from the breakpoints, so capacity is #{v_i >= 0}.
  static StepSchedule demand_from_values(std::vector<double> values);

  // Supply from a list of unit costs, all finite and >= 0.  Capacity is
  // the full list length.
  static StepSchedule supply_from_costs(std::vector<double> costs);

  // Rebuilds a schedule from serialized breakpoints (distinct ascending
  // prices, quantities strictly monotone in the side's direction).
  static StepSchedule from_breakpoints(Side side, const std::vector<Breakpoint>& breakpoints);

  Side side() const { return side_; }
  std::int64_t capacity() const { return static_cast<std::int64_t>(points_.size()); }

  // Schedule value at `price` (finite): demand counts reservation prices
  // >= price, supply counts costs <= price.  O(log m).
  std::int64_t evaluate(double price) const;

  // Underlying unit reservation prices / costs, ascending, with ties.
  const std::vector<double>& unit_prices() const { return points_; }

  // Distinct prices with the schedule value at each.
  std::vector<Breakpoint> breakpoints() const;

  std::string to_csv() const;   // columns: price,quantity
  std::string to_json() const;  // {"side","capacity","breakpoints":[...]}

 private:
  StepSchedule(Side side, std::vector<double> sorted_points);

  Side side_;
  std::vector<double> points_;  // sorted ascending
};

// Convenience verbs matching how the schedules are described.
StepSchedule build_demand(std::vector<double> values);
StepSchedule build_supply(std::vector<double> costs);

// Static competitive prediction of a pair of schedules.  Step functions
// generically cross on an interval of prices, so that is what is
// reported; `midpoint()` is a convenience convention, not a prediction.
struct EquilibriumResult {
  std::int64_t quantity = 0;
  double price_low = 0.0;   // clipped to >= 0
  double price_high = 0.0;  // may be +infinity when supply runs out above every bound
  bool degenerate = false;  // no positive-quantity crossing

  double midpoint() const { return 0.5 * (price_low + price_high); }
};

// Crossing quantity is the largest q such that the q-th highest value
// weakly covers the q-th lowest cost; the price interval is
// [max(c_(q), v_(q+1)), min(v_(q), c_(q+1))] with missing order
// statistics dropped and the lower end clipped to 0.
EquilibriumResult cross(const StepSchedule& demand, const StepSchedule& supply);

// Largest total gain from exchange achievable by any one-to-one matching
// of buyer values to seller costs: sum of (value - cost) over the
// crossing prefix of sorted values (descending) and costs (ascending).
Money max_surplus(std::vector<double> values, std::vector<double> costs);

}  // namespace cmkt
