#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

// Unit-level primitives of reservation-price markets.  A seller unit's
// minimum acceptable price is the money cost of producing it from its
// input recipe at current prices; a buyer unit's maximum acceptable price
// is the wealth left over once every more urgent need is paid for.  All
// comparisons at this layer are exact: tolerances belong to the smooth
// and statistical layers, where quantities stop being integers.

namespace cmkt {

using Money = double;

enum class Side { demand, supply };

// Per-commodity market prices for an n-commodity economy.  Entries are
// finite and non-negative; construction validates.
class PriceVector {
 public:
  explicit PriceVector(std::vector<double> prices);

  std::size_t size() const { return prices_.size(); }
  double operator[](std::size_t k) const { return prices_[k]; }
  std::span<const double> values() const { return prices_; }

 private:
  std::vector<double> prices_;
};

// Physical input quantities needed to produce one unit of output, one
// coefficient per commodity.  An all-zero recipe is a costless unit.
class InputRecipe {
 public:
  explicit InputRecipe(std::vector<double> coefficients);

  std::size_t size() const { return coefficients_.size(); }
  double operator[](std::size_t k) const { return coefficients_[k]; }
  std::span<const double> coefficients() const { return coefficients_; }

 private:
  std::vector<double> coefficients_;
};

// One consumer's urgency indicators relative to a commodity under study:
// entry k is 1 when commodity k is more urgent than the one under study,
// 0 otherwise.  The entry for the commodity itself must be 0; that check
// needs the focal index and is exposed separately.
class NeedsHierarchy {
 public:
  explicit NeedsHierarchy(std::vector<int> indicators);

  std::size_t size() const { return indicators_.size(); }
  bool marks(std::size_t k) const { return indicators_[k] != 0; }
  std::span<const std::uint8_t> indicators() const { return indicators_; }

  // Throws unless the indicator for `focal` is 0.
  void require_focal_unmarked(std::size_t focal) const;

 private:
  std::vector<std::uint8_t> indicators_;
};

struct BuyerUnit {
  Money wealth;  // finite, >= 0
  NeedsHierarchy hierarchy;
};

// A seller unit is specified either by an input recipe (cost derived from
// prices) or by a directly stated cost; the two forms are exclusive.
class SellerUnit {
 public:
  static SellerUnit with_recipe(InputRecipe recipe);
  static SellerUnit with_cost(Money cost);

  bool has_recipe() const { return recipe_.has_value(); }
  const InputRecipe& recipe() const { return *recipe_; }
  Money direct_cost() const { return *direct_cost_; }

 private:
  SellerUnit() = default;
  std::optional<InputRecipe> recipe_;
  std::optional<Money> direct_cost_;
};

// Money cost of one unit: the recipe/price dot product.  Throws
// std::invalid_argument on a length mismatch, naming both lengths.
Money unit_cost(const InputRecipe& recipe, const PriceVector& prices);

// A buyer's reservation price for one unit: wealth minus the cost of the
// more urgent needs, w - h.p.  May be negative; never clamped.
Money valuation(Money wealth, const NeedsHierarchy& hierarchy, const PriceVector& prices);

// Unit decisions.  Ties trade on both sides: a buyer takes a unit at
// v == p and a seller parts with one at c == p.
bool unit_demand(Money valuation, Money price);
bool unit_supply(Money cost, Money price);

// Cost of a seller unit in either form.
Money seller_cost(const SellerUnit& unit, const PriceVector& prices);

}  // namespace cmkt
