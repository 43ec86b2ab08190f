#include "cmkt/aggregation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "cmkt/kernels.hpp"
#include "cmkt/schedules.hpp"

namespace cmkt {

void ExperimentConfig::validate() const {
  if (sizes.empty()) throw std::invalid_argument("experiment needs at least one size");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 1) throw std::invalid_argument("population sizes must be >= 1");
    if (i > 0 && sizes[i] <= sizes[i - 1]) {
      throw std::invalid_argument("population sizes must be strictly increasing");
    }
  }
  if (replications < 1) throw std::invalid_argument("replications must be >= 1");
  if (grid.empty()) throw std::invalid_argument("experiment needs an evaluation grid");
  const double margin = model.high() - model.low();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || grid[i] < 0.0) {
      throw std::invalid_argument("grid prices must be finite and >= 0");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw std::invalid_argument("grid must be strictly increasing");
    }
  }
  if (grid.back() > model.high() + margin) {
    throw std::invalid_argument("grid extends too far past the model support");
  }
}

namespace {

double grid_ks(const SmoothModel& model, const StepSchedule& schedule,
               const std::vector<double>& grid, std::vector<double>& empirical,
               std::vector<double>& model_share) {
  const double n = static_cast<double>(schedule.capacity() > 0 ? schedule.capacity() : 1);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    empirical[g] = static_cast<double>(schedule.evaluate(grid[g])) / n;
  }
  model.fraction_batch(grid, model_share);
  return kernels::max_abs_diff(empirical, model_share);
}

}  // namespace

ConvergenceReport run_convergence(const ExperimentConfig& cfg) {
  cfg.validate();

  const std::size_t total = cfg.sizes.size() * cfg.replications;
  std::vector<ReplicationStat> stats(total);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&]() {
    std::vector<double> empirical(cfg.grid.size());
    std::vector<double> model_share(cfg.grid.size());
    while (true) {
      const std::size_t task = next.fetch_add(1);
      if (task >= total) return;
      try {
        const std::size_t n = cfg.sizes[task / cfg.replications];
        const std::size_t r = task % cfg.replications;
        auto samples = cfg.model.sample(n, derive_seed(cfg.base_seed, n, r));
        const StepSchedule schedule = cfg.model.side() == Side::demand
                                          ? build_demand(std::move(samples))
                                          : build_supply(std::move(samples));
        stats[task] = {n, r, grid_ks(cfg.model, schedule, cfg.grid, empirical, model_share)};
      } catch (...) {
        std::scoped_lock lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  const std::size_t workers =
      std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), total);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  ConvergenceReport report;
  report.stats = std::move(stats);
  for (std::size_t s = 0; s < cfg.sizes.size(); ++s) {
    double sum = 0.0;
    double worst = 0.0;
    for (std::size_t r = 0; r < cfg.replications; ++r) {
      const double ks = report.stats[s * cfg.replications + r].ks;
      sum += ks;
      worst = std::max(worst, ks);
    }
    report.summary.push_back(
        {cfg.sizes[s], sum / static_cast<double>(cfg.replications), worst});
  }
  return report;
}

ConvexityEmergenceReport run_convexity_emergence(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.model.side() != Side::demand) {
    throw std::invalid_argument("convexity emergence is a demand-side experiment");
  }
  if (cfg.grid.size() < 3) {
    throw std::invalid_argument("convexity emergence needs at least 3 grid points");
  }
  const double step = cfg.grid[1] - cfg.grid[0];
  for (std::size_t i = 1; i < cfg.grid.size(); ++i) {
    if (std::fabs(cfg.grid[i] - cfg.grid[i - 1] - step) > 1e-9 * step) {
      throw std::invalid_argument("convexity emergence needs a uniformly spaced grid");
    }
  }
  const double low = cfg.model.low();
  const double high = cfg.model.high();
  if (cfg.grid.front() < low || cfg.grid.back() > high) {
    throw std::invalid_argument("convexity emergence grid must stay inside the support");
  }

  ConvexityEmergenceReport report;
  report.size = cfg.sizes.back();
  report.grid = cfg.grid;

  const std::size_t n = report.size;
  auto samples = cfg.model.sample(n, derive_seed(cfg.base_seed, n, 0));
  std::sort(samples.begin(), samples.end());

  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + samples[i];

  report.bins = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  report.bin_width = (high - low) / static_cast<double>(report.bins);

  // Exact average of the empirical share over a bin-width window centered
  // at the probe (clamped to the support): each sample contributes the
  // overlap of (-inf, x_i] with the window.  Centering matters -- a fixed
  // bin partition puts its centers off the probe grid and the offset error
  // swamps the curvature signal.
  auto window_average = [&](double p) {
    const double a = std::max(low, p - 0.5 * report.bin_width);
    const double b = std::min(high, p + 0.5 * report.bin_width);
    const double w = b - a;
    const auto lo = static_cast<std::size_t>(
        std::upper_bound(samples.begin(), samples.end(), a) - samples.begin());
    const auto hi = static_cast<std::size_t>(
        std::lower_bound(samples.begin(), samples.end(), b) - samples.begin());
    const double middle = (prefix[hi] - prefix[lo]) - a * static_cast<double>(hi - lo);
    const double top = w * static_cast<double>(n - hi);
    return (middle + top) / (static_cast<double>(n) * w);
  };

  report.smoothed.resize(cfg.grid.size());
  for (std::size_t g = 0; g < cfg.grid.size(); ++g) {
    report.smoothed[g] = window_average(cfg.grid[g]);
  }

  const auto count_between = [&](double a, double b) {
    return static_cast<double>(
        std::upper_bound(samples.begin(), samples.end(), b) -
        std::upper_bound(samples.begin(), samples.end(), a));
  };

  report.second_differences.resize(cfg.grid.size() - 2);
  report.noise_bands.resize(cfg.grid.size() - 2);
  bool convex = true;
  bool affine = true;
  for (std::size_t i = 1; i + 1 < cfg.grid.size(); ++i) {
    const double d =
        report.smoothed[i + 1] - 2.0 * report.smoothed[i] + report.smoothed[i - 1];
    report.second_differences[i - 1] = d;
    // Binomial-scale allowance for the two adjacent probe gaps; 5 sigma
    // keeps both false alarms and missed concavity negligible at the
    // sizes these experiments run.
    const double gap_counts =
        count_between(cfg.grid[i - 1], cfg.grid[i]) + count_between(cfg.grid[i], cfg.grid[i + 1]);
    const double band =
        std::max(report.tolerance, 5.0 * std::sqrt(gap_counts) / static_cast<double>(n));
    report.noise_bands[i - 1] = band;
    if (d < -band) {
      convex = false;
      if (!report.first_violation) report.first_violation = i - 1;
    }
    if (std::fabs(d) > band) affine = false;
  }
  report.convex = convex;
  report.affine = affine;
  return report;
}

}  // namespace cmkt
