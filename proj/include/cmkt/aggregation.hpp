#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cmkt/rng.hpp"
#include "cmkt/smooth.hpp"

// Monte Carlo smoothing experiments: sample finite populations from a
// smooth model, build their exact step schedules, and measure how fast
// the normalized schedules converge to the model curve as the population
// grows -- plus the curvature that emerges (or fails to) in the large
// samples.  Replication seeds are derived, never sequential, so the work
// partitions across threads without coordination, and reports are
// assembled in (size, replication) order regardless of scheduling.

namespace cmkt {

struct ExperimentConfig {
  SmoothModel model;
  std::vector<std::size_t> sizes;   // strictly increasing, all >= 1
  std::size_t replications = 1;     // >= 1
  std::uint64_t base_seed = 0;
  std::vector<double> grid;         // sorted evaluation prices, >= 0

  void validate() const;  // throws std::invalid_argument
};

struct ReplicationStat {
  std::size_t size;
  std::size_t replication;
  double ks;  // sup over the grid of |empirical share - model share|
};

struct SizeSummary {
  std::size_t size;
  double mean_ks;
  double max_ks;
};

struct ConvergenceReport {
  std::vector<ReplicationStat> stats;  // ordered by (size, replication)
  std::vector<SizeSummary> summary;    // one row per size
};

// For every (size n, replication r): draw n values with seed
// derive_seed(base_seed, n, r), build the empirical step schedule, and
// record the sup-norm gap to the model over the evaluation grid.
// Deterministic given the config; replications may run concurrently.
ConvergenceReport run_convergence(const ExperimentConfig& cfg);

struct ConvexityEmergenceReport {
  std::size_t size = 0;        // population actually sampled (largest configured)
  std::size_t bins = 0;        // ceil(sqrt(size)) bins across the support
  double bin_width = 0.0;
  std::vector<double> grid;                // probe prices (config grid, uniform)
  std::vector<double> smoothed;            // bin-averaged empirical share at each probe
  std::vector<double> second_differences;  // plain second differences, interior probes
  std::vector<double> noise_bands;         // sampling-noise allowance per interior probe
  double tolerance = 1e-9;                 // deterministic floor of the band
  bool convex = false;   // no second difference below -max(tolerance, band)
  bool affine = false;   // all second differences within the band
  std::optional<std::size_t> first_violation;
};

// Samples the largest configured size once (replication 0 seed), averages
// the empirical demand share over bins of width support/sqrt(n), and
// takes second differences at the probe grid.  The probe spacing must be
// coarse enough for the curvature signal to clear sampling noise;
// adjacent-bin differences never do, whatever n is.
ConvexityEmergenceReport run_convexity_emergence(const ExperimentConfig& cfg);

}  // namespace cmkt
