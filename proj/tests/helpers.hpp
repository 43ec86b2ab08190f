#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

// Independent oracles for the test suite: brute-force counting, exhaustive
// crossing search, optimal-matching enumeration, and a truncated series
// solver.  Nothing here shares code with the implementation paths it
// checks.

namespace cmkt::testing {

inline std::int64_t count_ge(const std::vector<double>& xs, double p) {
  std::int64_t n = 0;
  for (double x : xs) {
    if (x >= p) ++n;
  }
  return n;
}

inline std::int64_t count_gt(const std::vector<double>& xs, double p) {
  std::int64_t n = 0;
  for (double x : xs) {
    if (x > p) ++n;
  }
  return n;
}

inline std::int64_t count_le(const std::vector<double>& xs, double p) {
  std::int64_t n = 0;
  for (double x : xs) {
    if (x <= p) ++n;
  }
  return n;
}

inline std::int64_t count_lt(const std::vector<double>& xs, double p) {
  std::int64_t n = 0;
  for (double x : xs) {
    if (x < p) ++n;
  }
  return n;
}

struct OracleCrossing {
  std::int64_t quantity = 0;
  double low = 0.0;
  double high = std::numeric_limits<double>::infinity();
};

// Exhaustive crossing: scan every breakpoint, midpoint and boundary for
// the largest feasible min(D, S), then find the clearing-price set -- the
// prices at which q* trades serve every strictly-profitable buyer and
// seller (strict counts <= q* <= weak counts on both sides).
inline OracleCrossing oracle_cross(const std::vector<double>& values,
                                   const std::vector<double>& costs) {
  std::vector<double> points;
  points.push_back(0.0);
  for (double v : values) {
    if (v >= 0.0) points.push_back(v);
  }
  for (double c : costs) points.push_back(c);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  std::vector<double> candidates;
  for (std::size_t i = 0; i < points.size(); ++i) {
    candidates.push_back(points[i]);
    if (i + 1 < points.size()) {
      candidates.push_back(0.5 * (points[i] + points[i + 1]));
    }
  }
  candidates.push_back(points.back() + 1.0);

  OracleCrossing result;
  for (double p : candidates) {
    result.quantity =
        std::max(result.quantity, std::min(count_ge(values, p), count_le(costs, p)));
  }

  auto clearing = [&](double p) {
    return count_gt(values, p) <= result.quantity &&
           count_ge(values, p) >= result.quantity &&
           count_lt(costs, p) <= result.quantity &&
           count_le(costs, p) >= result.quantity;
  };

  bool found = false;
  for (double p : candidates) {
    if (!clearing(p)) continue;
    if (!found) {
      result.low = p;
      found = true;
    }
    result.high = p;
  }
  // An unbounded clearing region shows up as the synthetic top candidate
  // still clearing.
  if (found && result.high == points.back() + 1.0 && clearing(points.back() + 2.0)) {
    result.high = std::numeric_limits<double>::infinity();
  }
  return result;
}

// Optimal one-to-one matching by full enumeration; buyers may stay
// unmatched, so negative-surplus pairs are never forced.
inline double oracle_max_surplus(const std::vector<double>& values,
                                 const std::vector<double>& costs) {
  const std::size_t nb = values.size();
  const std::size_t ns = costs.size();
  if (ns > 16) throw std::invalid_argument("oracle_max_surplus: too many sellers");
  std::vector<std::vector<double>> memo(nb + 1,
                                        std::vector<double>(std::size_t{1} << ns, -1.0));
  std::vector<std::vector<bool>> known(nb + 1,
                                       std::vector<bool>(std::size_t{1} << ns, false));

  auto solve = [&](auto&& self, std::size_t buyer, std::size_t used) -> double {
    if (buyer == nb) return 0.0;
    if (known[buyer][used]) return memo[buyer][used];
    double best = self(self, buyer + 1, used);  // leave this buyer out
    for (std::size_t s = 0; s < ns; ++s) {
      if (used & (std::size_t{1} << s)) continue;
      best = std::max(best, values[buyer] - costs[s] +
                                self(self, buyer + 1, used | (std::size_t{1} << s)));
    }
    known[buyer][used] = true;
    memo[buyer][used] = best;
    return best;
  };
  return solve(solve, 0, 0);
}

// Truncated series solve of v = A^T v + l with plain loops; diverges loudly
// when the economy is not productive.
inline std::vector<double> oracle_neumann_labor_values(
    const std::vector<std::vector<double>>& inputs, const std::vector<double>& labor,
    double tol = 1e-14, std::size_t max_terms = 200000) {
  const std::size_t n = labor.size();
  std::vector<double> total = labor;
  std::vector<double> term = labor;
  for (std::size_t iter = 0; iter < max_terms; ++iter) {
    std::vector<double> next(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        next[j] += inputs[i][j] * term[i];  // (A^T term)_j
      }
    }
    double term_norm = 0.0;
    double total_norm = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      total[j] += next[j];
      term_norm += next[j] * next[j];
      total_norm += total[j] * total[j];
    }
    term = std::move(next);
    if (std::sqrt(term_norm) < tol * (1.0 + std::sqrt(total_norm))) {
      return total;
    }
  }
  throw std::runtime_error("series did not converge: economy looks non-productive");
}

// Exact sup-distance between the empirical complementary CDF of sorted
// samples and a model curve, by checking both one-sided limits at every
// sample point.  Naive on purpose.
template <typename Model>
double oracle_ks_ccdf(const std::vector<double>& sorted, Model&& model_ccdf) {
  const std::size_t n = sorted.size();
  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double g = model_ccdf(sorted[j]);
    const double hi = static_cast<double>(n - j) / static_cast<double>(n);
    const double lo = static_cast<double>(n - 1 - j) / static_cast<double>(n);
    worst = std::max(worst, std::fabs(g - hi));
    worst = std::max(worst, std::fabs(g - lo));
  }
  return worst;
}

// Mixed-population generator for the monotonicity sweeps: uniforms,
// exponentials and tie-heavy integer grids.
inline std::vector<double> mixed_population(std::mt19937& gen, std::size_t count) {
  std::vector<double> out(count);
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_real_distribution<double> uniform(0.0, 100.0);
  std::exponential_distribution<double> exponential(0.05);
  std::uniform_int_distribution<int> coarse(0, 20);
  switch (kind(gen)) {
    case 0:
      for (auto& x : out) x = uniform(gen);
      break;
    case 1:
      for (auto& x : out) x = exponential(gen);
      break;
    default:
      for (auto& x : out) x = static_cast<double>(coarse(gen));
      break;
  }
  return out;
}

}  // namespace cmkt::testing
