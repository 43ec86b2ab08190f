#include "cmkt/agents.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cmkt {

namespace {

void require_finite(double x, const char* what, std::size_t index) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument(std::string(what) + "[" + std::to_string(index) +
                                "] is not finite");
  }
}

void require_same_length(std::size_t lhs, const char* lhs_name, std::size_t rhs,
                         const char* rhs_name) {
  if (lhs != rhs) {
    throw std::invalid_argument(std::string(lhs_name) + " has " + std::to_string(lhs) +
                                " entries but " + rhs_name + " has " + std::to_string(rhs));
  }
}

}  // namespace

PriceVector::PriceVector(std::vector<double> prices) : prices_(std::move(prices)) {
  if (prices_.empty()) {
    throw std::invalid_argument("price vector must cover at least one commodity");
  }
  for (std::size_t k = 0; k < prices_.size(); ++k) {
    require_finite(prices_[k], "price", k);
    if (prices_[k] < 0.0) {
      throw std::invalid_argument("price[" + std::to_string(k) + "] is negative");
    }
  }
}

InputRecipe::InputRecipe(std::vector<double> coefficients)
    : coefficients_(std::move(coefficients)) {
  for (std::size_t k = 0; k < coefficients_.size(); ++k) {
    require_finite(coefficients_[k], "recipe coefficient", k);
    if (coefficients_[k] < 0.0) {
      throw std::invalid_argument("recipe coefficient[" + std::to_string(k) +
                                  "] is negative");
    }
  }
}

NeedsHierarchy::NeedsHierarchy(std::vector<int> indicators) {
  indicators_.reserve(indicators.size());
  for (std::size_t k = 0; k < indicators.size(); ++k) {
    if (indicators[k] != 0 && indicators[k] != 1) {
      throw std::invalid_argument("hierarchy indicator[" + std::to_string(k) +
                                  "] must be 0 or 1, got " + std::to_string(indicators[k]));
    }
    indicators_.push_back(static_cast<std::uint8_t>(indicators[k]));
  }
}

void NeedsHierarchy::require_focal_unmarked(std::size_t focal) const {
  if (focal >= indicators_.size()) {
    throw std::invalid_argument("focal index " + std::to_string(focal) +
                                " outside hierarchy of length " +
                                std::to_string(indicators_.size()));
  }
  if (indicators_[focal] != 0) {
    throw std::invalid_argument("a commodity cannot be more urgent than itself "
                                "(hierarchy indicator " +
                                std::to_string(focal) + " is 1)");
  }
}

SellerUnit SellerUnit::with_recipe(InputRecipe recipe) {
  SellerUnit unit;
  unit.recipe_ = std::move(recipe);
  return unit;
}

SellerUnit SellerUnit::with_cost(Money cost) {
  if (!std::isfinite(cost) || cost < 0.0) {
    throw std::invalid_argument("direct seller cost must be finite and >= 0");
  }
  SellerUnit unit;
  unit.direct_cost_ = cost;
  return unit;
}

Money unit_cost(const InputRecipe& recipe, const PriceVector& prices) {
  require_same_length(recipe.size(), "input recipe", prices.size(), "the price vector");
  Money total = 0.0;
  for (std::size_t k = 0; k < recipe.size(); ++k) {
    total += recipe[k] * prices[k];
  }
  return total;
}

Money valuation(Money wealth, const NeedsHierarchy& hierarchy, const PriceVector& prices) {
  require_same_length(hierarchy.size(), "needs hierarchy", prices.size(),
                      "the price vector");
  if (!std::isfinite(wealth) || wealth < 0.0) {
    throw std::invalid_argument("wealth must be finite and >= 0");
  }
  Money urgent = 0.0;
  for (std::size_t k = 0; k < hierarchy.size(); ++k) {
    if (hierarchy.marks(k)) urgent += prices[k];
  }
  return wealth - urgent;
}

bool unit_demand(Money valuation, Money price) { return valuation >= price; }

bool unit_supply(Money cost, Money price) { return cost <= price; }

Money seller_cost(const SellerUnit& unit, const PriceVector& prices) {
  return unit.has_recipe() ? unit_cost(unit.recipe(), prices) : unit.direct_cost();
}

}  // namespace cmkt
