#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "cmkt/agents.hpp"

// Large-market (smooth) schedules: the continuum idealization in which the
// distribution of unit costs or reservation prices has a density on an
// interval.  The classic demand families live here -- the triangular
// schedule of a uniform value distribution and the pyramidal family whose
// power-2 member is its square -- together with slopes, curvature
// reporting, and deterministic inverse-CDF sampling used by the
// aggregation experiments.

namespace cmkt {

// Share of consumers valuing the good at or above price p when values are
// uniform on [v_min, v_max]: (v_max - p) / (v_max - v_min), clamped to 1
// below the support and 0 above it.
double triangular_ccdf(double p, double v_min, double v_max);

// Pyramidal demand share: the square of the triangular share on
// [0, v_max].  Strictly convex in p on the support.
double pyramidal_ccdf(double p, double v_max);

enum class SmoothFamily { uniform_triangular, pyramidal_power, custom_density };

class SmoothModel {
 public:
  // Uniform density on [low, high]; works for either side.
  static SmoothModel uniform(Side side, double low, double high, double capacity);

  // Demand on [0, v_max] with share ((v_max - p)/v_max)^power, power >= 1.
  // power 1 is the triangular schedule, power 2 the square pyramid.
  static SmoothModel pyramidal(double v_max, double capacity, double power = 2.0);

  // Arbitrary density, finite and non-negative on [low, high] and strictly
  // positive on the open interior.  The density is tabulated on `panels`
  // equal panels with a trapezoid cumulative that is exact for piecewise
  // linear densities; evaluation, slopes and quantiles all come from the
  // same table so they stay mutually consistent.
  static SmoothModel custom(Side side, double low, double high, double capacity,
                            std::function<double(double)> density,
                            std::size_t panels = 4096);

  Side side() const { return side_; }
  SmoothFamily family() const { return family_; }
  double low() const { return low_; }
  double high() const { return high_; }
  double capacity() const { return capacity_; }
  double power() const { return power_; }

  // Demand models: share valued >= p (1 below the support, 0 above).
  // Supply models: share costing <= p (0 below, 1 above).
  double fraction(double p) const;
  void fraction_batch(std::span<const double> prices, std::span<double> out) const;

  // Normalized density of the value/cost distribution; 0 outside the open
  // support.
  double density(double p) const;

  // u in [0, 1) -> value/cost by inverse CDF.
  double quantile(double u) const;

  // `count` i.i.d. draws, bit-reproducible: std::mt19937_64 seeded with
  // `seed`, 53-bit uniforms, inverse-CDF transform.
  std::vector<double> sample(std::size_t count, std::uint64_t seed) const;

 private:
  SmoothModel() = default;

  Side side_ = Side::demand;
  SmoothFamily family_ = SmoothFamily::uniform_triangular;
  double low_ = 0.0;
  double high_ = 1.0;
  double capacity_ = 1.0;
  double power_ = 1.0;

  // custom-density tabulation
  std::vector<double> node_density_;
  std::vector<double> cumulative_;  // unnormalized, node-aligned
  double total_mass_ = 0.0;
  double panel_width_ = 0.0;

  double table_cdf(double p) const;
  double table_quantile(double u) const;
  double table_density(double p) const;
};

// Quantity versions of the schedules: capacity x share.  Each checks the
// model side.
double model_demand(const SmoothModel& m, double p);
double model_supply(const SmoothModel& m, double p);

// dQ/dp of the model schedule: negative for demand, positive for supply,
// and 0 outside the open support, where the schedule is flat.
double slope(const SmoothModel& m, double p);

enum class Curvature { strictly_convex, convex, affine, not_convex };

inline bool is_convex(Curvature c) { return c != Curvature::not_convex; }

struct ConvexityReport {
  std::vector<double> grid;                // copy of the evaluation grid
  std::vector<double> second_differences;  // one per interior grid point
  double tolerance = 0.0;                  // 1e-9 x capacity
  Curvature verdict = Curvature::affine;
  std::optional<std::size_t> first_violation;  // interior index of first diff < -tolerance
};

// Plain second differences of the model schedule over a uniformly spaced
// grid.  Convex when none dips below -tolerance; affine when all stay
// within the tolerance band.
ConvexityReport convexity_report(const SmoothModel& m, std::span<const double> grid);

std::vector<double> sample_values(const SmoothModel& m, std::size_t count,
                                  std::uint64_t seed);

}  // namespace cmkt
