#include "cmkt/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cmkt/io.hpp"
#include "json.hpp"

namespace cmkt {

namespace {

void require_finite_price(double p) {
  if (!std::isfinite(p)) {
    throw std::invalid_argument("schedule evaluated at a non-finite price");
  }
}

}  // namespace

StepSchedule::StepSchedule(Side side, std::vector<double> sorted_points)
    : side_(side), points_(std::move(sorted_points)) {}

StepSchedule StepSchedule::demand_from_values(std::vector<double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw std::invalid_argument("buyer value[" + std::to_string(i) + "] is not finite");
    }
  }
  // A negative reservation price never demands at p >= 0.
  std::erase_if(values, [](double v) { return v < 0.0; });
  std::sort(values.begin(), values.end());
  return StepSchedule(Side::demand, std::move(values));
}

StepSchedule StepSchedule::supply_from_costs(std::vector<double> costs) {
  for (std::size_t i = 0; i < costs.size(); ++i) {
    if (!std::isfinite(costs[i])) {
      throw std::invalid_argument("unit cost[" + std::to_string(i) + "] is not finite");
    }
    if (costs[i] < 0.0) {
      throw std::invalid_argument("unit cost[" + std::to_string(i) + "] is negative");
    }
  }
  std::sort(costs.begin(), costs.end());
  return StepSchedule(Side::supply, std::move(costs));
}

StepSchedule StepSchedule::from_breakpoints(Side side,
                                            const std::vector<Breakpoint>& breakpoints) {
  std::vector<double> points;
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    const auto& bp = breakpoints[i];
    if (!std::isfinite(bp.price) || bp.price < 0.0) {
      throw std::invalid_argument("breakpoint[" + std::to_string(i) +
                                  "] has an invalid price");
    }
    if (i > 0 && !(breakpoints[i - 1].price < bp.price)) {
      throw std::invalid_argument("breakpoint prices must be strictly increasing");
    }
  }
  const std::size_t m = breakpoints.size();
  for (std::size_t i = 0; i < m; ++i) {
    // Demand quantities count down toward 0 past the last breakpoint;
    // supply quantities count up from 0 below the first.
    std::int64_t mass;
    if (side == Side::demand) {
      const std::int64_t next = (i + 1 < m) ? breakpoints[i + 1].quantity : 0;
      mass = breakpoints[i].quantity - next;
    } else {
      const std::int64_t prev = (i > 0) ? breakpoints[i - 1].quantity : 0;
      mass = breakpoints[i].quantity - prev;
    }
    if (mass <= 0) {
      throw std::invalid_argument("breakpoint quantities are not strictly monotone for "
                                  "the declared side");
    }
    points.insert(points.end(), static_cast<std::size_t>(mass), breakpoints[i].price);
  }
  return StepSchedule(side, std::move(points));
}

std::int64_t StepSchedule::evaluate(double price) const {
  require_finite_price(price);
  if (side_ == Side::demand) {
    // #{v_i >= price}
    auto it = std::lower_bound(points_.begin(), points_.end(), price);
    return static_cast<std::int64_t>(points_.end() - it);
  }
  // #{c_j <= price}
  auto it = std::upper_bound(points_.begin(), points_.end(), price);
  return static_cast<std::int64_t>(it - points_.begin());
}

std::vector<Breakpoint> StepSchedule::breakpoints() const {
  std::vector<Breakpoint> result;
  const std::int64_t n = capacity();
  std::size_t i = 0;
  while (i < points_.size()) {
    std::size_t j = i;
    while (j < points_.size() && points_[j] == points_[i]) ++j;
    const double price = points_[i];
    const std::int64_t quantity = (side_ == Side::demand)
                                      ? n - static_cast<std::int64_t>(i)
                                      : static_cast<std::int64_t>(j);
    result.push_back({price, quantity});
    i = j;
  }
  return result;
}

std::string StepSchedule::to_csv() const {
  std::string out = "price,quantity\n";
  for (const auto& bp : breakpoints()) {
    out += io::format_double(bp.price);
    out += ',';
    out += io::format_int(bp.quantity);
    out += '\n';
  }
  return out;
}

std::string StepSchedule::to_json() const {
  nlohmann::ordered_json j;
  j["side"] = side_ == Side::demand ? "demand" : "supply";
  j["capacity"] = capacity();
  auto& bps = j["breakpoints"] = nlohmann::ordered_json::array();
  for (const auto& bp : breakpoints()) {
    bps.push_back({{"price", bp.price}, {"quantity", bp.quantity}});
  }
  return j.dump(2) + "\n";
}

StepSchedule build_demand(std::vector<double> values) {
  return StepSchedule::demand_from_values(std::move(values));
}

StepSchedule build_supply(std::vector<double> costs) {
  return StepSchedule::supply_from_costs(std::move(costs));
}

EquilibriumResult cross(const StepSchedule& demand, const StepSchedule& supply) {
  if (demand.side() != Side::demand || supply.side() != Side::supply) {
    throw std::invalid_argument("cross() expects a demand schedule and a supply schedule");
  }
  const auto& values = demand.unit_prices();  // ascending
  const auto& costs = supply.unit_prices();   // ascending
  const std::size_t nv = values.size();
  const std::size_t nc = costs.size();

  // v_(q) is non-increasing and c_(q) non-decreasing in q, so the first
  // failing prefix ends the feasible quantities.
  std::size_t q = 0;
  const std::size_t q_max = std::min(nv, nc);
  while (q < q_max && values[nv - 1 - q] >= costs[q]) ++q;

  constexpr double inf = std::numeric_limits<double>::infinity();
  double low = -inf;
  double high = inf;
  if (q >= 1) {
    low = std::max(low, costs[q - 1]);       // c_(q)
    high = std::min(high, values[nv - q]);   // v_(q)
  }
  if (q < nv) low = std::max(low, values[nv - 1 - q]);  // v_(q+1)
  if (q < nc) high = std::min(high, costs[q]);          // c_(q+1)
  low = std::max(low, 0.0);
  high = std::max(high, low);

  EquilibriumResult result;
  result.quantity = static_cast<std::int64_t>(q);
  result.price_low = low;
  result.price_high = high;
  result.degenerate = (q == 0);
  return result;
}

Money max_surplus(std::vector<double> values, std::vector<double> costs) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw std::invalid_argument("buyer value[" + std::to_string(i) + "] is not finite");
    }
  }
  for (std::size_t i = 0; i < costs.size(); ++i) {
    if (!std::isfinite(costs[i])) {
      throw std::invalid_argument("unit cost[" + std::to_string(i) + "] is not finite");
    }
  }
  std::sort(values.begin(), values.end(), std::greater<>());
  std::sort(costs.begin(), costs.end());
  Money total = 0.0;
  const std::size_t pairs = std::min(values.size(), costs.size());
  for (std::size_t k = 0; k < pairs && values[k] >= costs[k]; ++k) {
    total += values[k] - costs[k];
  }
  return total;
}

}  // namespace cmkt
