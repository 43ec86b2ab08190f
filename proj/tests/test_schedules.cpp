#include <cmath>
#include <limits>
#include <random>

#include "cmkt/schedules.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace cmkt;
using namespace cmkt::testing;

TEST_CASE("demand schedule counts values at or above the price") {
  const auto d = build_demand({10, 8, 6, 4});
  CHECK(d.evaluate(7) == count_ge({10, 8, 6, 4}, 7));
  CHECK(d.evaluate(7) == 2);
  CHECK(d.evaluate(0) == 4);
  CHECK(d.evaluate(10) == 1);
  CHECK(d.evaluate(10.0001) == 0);
  CHECK(d.capacity() == 4);
}

TEST_CASE("empty and tied demand populations") {
  CHECK(build_demand({}).evaluate(3.0) == 0);
  const auto tied = build_demand({5, 5, 5});
  CHECK(tied.evaluate(5) == 3);
  CHECK(tied.evaluate(5.01) == 0);
}

TEST_CASE("negative values never demand and drop out of capacity") {
  const auto d = build_demand({-3, 7, -0.5, 2});
  CHECK(d.capacity() == 2);
  CHECK(d.evaluate(0) == 2);
}

TEST_CASE("supply schedule counts costs at or below the price") {
  const auto s = build_supply({3, 5, 7, 9});
  CHECK(s.evaluate(6) == 2);
  CHECK(s.evaluate(2.99) == 0);
  CHECK(s.evaluate(1e9) == 4);
  CHECK(s.capacity() == 4);
  CHECK(build_supply({0, 0}).evaluate(0) == 2);
}

TEST_CASE("schedules reject invalid inputs with the offending index") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_WITH_AS(build_demand({1, nan}), "buyer value[1] is not finite",
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(build_supply({1, -2}), "unit cost[1] is negative",
                       std::invalid_argument);
  CHECK_THROWS_AS(build_demand({1}).evaluate(nan), std::invalid_argument);
}

TEST_CASE("schedule evaluation matches brute-force counting") {
  std::mt19937 gen(21);
  for (int trial = 0; trial < 300; ++trial) {
    std::uniform_int_distribution<std::size_t> size(0, 40);
    auto population = mixed_population(gen, size(gen));
    const auto d = build_demand(population);
    const auto s = build_supply(population);
    std::uniform_real_distribution<double> price(0.0, 110.0);
    for (int probe = 0; probe < 20; ++probe) {
      const double p = price(gen);
      CHECK(d.evaluate(p) == count_ge(population, p));
      CHECK(s.evaluate(p) == count_le(population, p));
    }
    // breakpoints themselves are the tie-mass points
    for (const auto& bp : d.breakpoints()) {
      CHECK(d.evaluate(bp.price) == bp.quantity);
      CHECK(bp.quantity == count_ge(population, bp.price));
    }
    for (const auto& bp : s.breakpoints()) {
      CHECK(s.evaluate(bp.price) == bp.quantity);
      CHECK(bp.quantity == count_le(population, bp.price));
    }
  }
}

TEST_CASE("schedules are monotone at and between all breakpoints") {
  std::mt19937 gen(22);
  std::uniform_int_distribution<std::size_t> size(1, 60);
  for (int trial = 0; trial < 500; ++trial) {
    auto population = mixed_population(gen, size(gen));
    const auto d = build_demand(population);
    const auto s = build_supply(population);
    double previous = -1.0;
    std::int64_t d_prev = d.capacity() + 1;
    std::int64_t s_prev = -1;
    for (const auto& bp : d.breakpoints()) {
      CHECK(bp.quantity < d_prev);
      d_prev = bp.quantity;
      CHECK(bp.price > previous);
      previous = bp.price;
    }
    for (const auto& bp : s.breakpoints()) {
      CHECK(bp.quantity > s_prev);
      s_prev = bp.quantity;
    }
    // conservation at the ends
    CHECK(d.evaluate(0.0) == d.capacity());
    CHECK(s.evaluate(std::numeric_limits<double>::max()) == s.capacity());
  }
}

TEST_CASE("crossing of the worked four-by-four market") {
  const auto result = cross(build_demand({10, 8, 6, 4}), build_supply({3, 5, 7, 9}));
  CHECK(result.quantity == 2);
  CHECK(result.price_low == 6.0);
  CHECK(result.price_high == 7.0);
  CHECK_FALSE(result.degenerate);
  CHECK(result.midpoint() == 6.5);
}

TEST_CASE("degenerate crossing and full-tie crossing") {
  const auto none = cross(build_demand({1}), build_supply({2}));
  CHECK(none.quantity == 0);
  CHECK(none.degenerate);
  CHECK(none.price_low == 1.0);
  CHECK(none.price_high == 2.0);

  const auto ties = cross(build_demand({5, 5}), build_supply({5, 5}));
  CHECK(ties.quantity == 2);
  CHECK(ties.price_low == 5.0);
  CHECK(ties.price_high == 5.0);
}

TEST_CASE("negative values never disturb the crossing") {
  const auto with_negatives =
      cross(build_demand({-5, 10, 8, 6, 4, -0.25}), build_supply({3, 5, 7, 9}));
  const auto clean = cross(build_demand({10, 8, 6, 4}), build_supply({3, 5, 7, 9}));
  CHECK(with_negatives.quantity == clean.quantity);
  CHECK(with_negatives.price_low == clean.price_low);
  CHECK(with_negatives.price_high == clean.price_high);
}

TEST_CASE("crossing of empty markets") {
  const auto no_demand = cross(build_demand({}), build_supply({3}));
  CHECK(no_demand.quantity == 0);
  CHECK(no_demand.price_low == 0.0);
  CHECK(no_demand.price_high == 3.0);

  const auto empty = cross(build_demand({}), build_supply({}));
  CHECK(empty.quantity == 0);
  CHECK(empty.price_low == 0.0);
  CHECK(std::isinf(empty.price_high));
}

TEST_CASE("crossing agrees with exhaustive search on random instances") {
  std::mt19937 gen(23);
  std::uniform_int_distribution<std::size_t> size(0, 12);
  std::uniform_int_distribution<int> coarse(0, 12);
  std::uniform_real_distribution<double> fine(0.0, 12.0);
  for (int trial = 0; trial < 1500; ++trial) {
    std::vector<double> values(size(gen));
    std::vector<double> costs(size(gen));
    const bool tie_heavy = trial % 2 == 0;
    for (auto& v : values) v = tie_heavy ? coarse(gen) : fine(gen);
    for (auto& c : costs) c = tie_heavy ? coarse(gen) : fine(gen);

    const auto expected = oracle_cross(values, costs);
    const auto actual = cross(build_demand(values), build_supply(costs));
    CHECK(actual.quantity == expected.quantity);
    CHECK(actual.price_low == doctest::Approx(expected.low).epsilon(1e-12));
    if (std::isinf(expected.high)) {
      CHECK(std::isinf(actual.price_high));
    } else {
      CHECK(actual.price_high == doctest::Approx(expected.high).epsilon(1e-12));
    }
  }
}

TEST_CASE("inside the crossing interval both schedules pass the quantity") {
  std::mt19937 gen(24);
  std::uniform_int_distribution<std::size_t> size(1, 30);
  for (int trial = 0; trial < 400; ++trial) {
    auto values = mixed_population(gen, size(gen));
    auto costs = mixed_population(gen, size(gen));
    for (auto& c : costs) c = std::fabs(c);
    const auto d = build_demand(values);
    const auto s = build_supply(costs);
    const auto r = cross(d, s);
    if (r.quantity == 0) continue;
    CHECK(r.price_low <= r.price_high);
    // closed endpoints: min(D, S) equals the crossing quantity
    CHECK(std::min(d.evaluate(r.price_low), s.evaluate(r.price_low)) == r.quantity);
    if (std::isfinite(r.price_high)) {
      CHECK(std::min(d.evaluate(r.price_high), s.evaluate(r.price_high)) == r.quantity);
      // strictly inside, both sides meet the quantity exactly
      if (r.price_low < r.price_high) {
        const double mid = 0.5 * (r.price_low + r.price_high);
        CHECK(d.evaluate(mid) == r.quantity);
        CHECK(s.evaluate(mid) == r.quantity);
      }
    }
  }
}

TEST_CASE("translating all values and costs shifts the interval exactly") {
  std::mt19937 gen(25);
  std::uniform_int_distribution<std::size_t> size(1, 20);
  std::uniform_real_distribution<double> shift(0.5, 40.0);
  for (int trial = 0; trial < 300; ++trial) {
    auto values = mixed_population(gen, size(gen));
    auto costs = mixed_population(gen, size(gen));
    const auto base = cross(build_demand(values), build_supply(costs));
    const double delta = shift(gen);
    auto shifted_values = values;
    auto shifted_costs = costs;
    for (auto& v : shifted_values) v += delta;
    for (auto& c : shifted_costs) c += delta;
    const auto moved = cross(build_demand(shifted_values), build_supply(shifted_costs));
    CHECK(moved.quantity == base.quantity);
    if (base.quantity > 0) {
      CHECK(moved.price_low == base.price_low + delta);
      if (std::isfinite(base.price_high)) {
        CHECK(moved.price_high == base.price_high + delta);
      }
    }
  }
}

TEST_CASE("max surplus of the worked examples") {
  CHECK(max_surplus({10, 8, 6, 4}, {3, 5, 7, 9}) == 10.0);
  CHECK(max_surplus({1}, {2}) == 0.0);
  CHECK(max_surplus({5, 5}, {5, 5}) == 0.0);
  CHECK(max_surplus({}, {}) == 0.0);
}

TEST_CASE("max surplus equals optimal matching by enumeration") {
  std::mt19937 gen(26);
  std::uniform_int_distribution<std::size_t> size(0, 6);
  std::uniform_real_distribution<double> money(0.0, 10.0);
  for (int trial = 0; trial < 800; ++trial) {
    std::vector<double> values(size(gen));
    std::vector<double> costs(size(gen));
    for (auto& v : values) v = money(gen);
    for (auto& c : costs) c = money(gen);
    CHECK(max_surplus(values, costs) ==
          doctest::Approx(oracle_max_surplus(values, costs)).epsilon(1e-12));
  }
}

TEST_CASE("breakpoint serialization round-trips") {
  std::mt19937 gen(27);
  std::uniform_int_distribution<std::size_t> size(1, 25);
  std::uniform_real_distribution<double> price(0.0, 50.0);
  for (int trial = 0; trial < 200; ++trial) {
    auto population = mixed_population(gen, size(gen));
    for (auto& x : population) x = std::fabs(x);
    for (Side side : {Side::demand, Side::supply}) {
      const auto original = side == Side::demand ? build_demand(population)
                                                 : build_supply(population);
      const auto rebuilt = StepSchedule::from_breakpoints(side, original.breakpoints());
      CHECK(rebuilt.capacity() == original.capacity());
      for (int probe = 0; probe < 30; ++probe) {
        const double p = price(gen);
        CHECK(rebuilt.evaluate(p) == original.evaluate(p));
      }
    }
  }
}

TEST_CASE("csv serialization lists breakpoints in order") {
  const auto s = build_supply({3, 5, 5, 9});
  CHECK(s.to_csv() == "price,quantity\n3,1\n5,3\n9,4\n");
}
