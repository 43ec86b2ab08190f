#include "cmkt/smooth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "cmkt/kernels.hpp"
#include "cmkt/rng.hpp"

namespace cmkt {

namespace {

void require_support(double low, double high) {
  if (!std::isfinite(low) || !std::isfinite(high) || !(low < high) || low < 0.0) {
    throw std::invalid_argument("support must satisfy 0 <= low < high, both finite");
  }
}

void require_capacity(double capacity) {
  if (!std::isfinite(capacity) || !(capacity > 0.0)) {
    throw std::invalid_argument("capacity must be finite and > 0");
  }
}

}  // namespace

double triangular_ccdf(double p, double v_min, double v_max) {
  if (!(v_min < v_max)) {
    throw std::invalid_argument("triangular support requires v_min < v_max");
  }
  return kernels::detail::ramp_down_pow1(p, v_max, v_max - v_min, 1.0);
}

double pyramidal_ccdf(double p, double v_max) {
  if (!(v_max > 0.0)) {
    throw std::invalid_argument("pyramidal support requires v_max > 0");
  }
  return kernels::detail::ramp_down_pow1(p, v_max, v_max, 2.0);
}

SmoothModel SmoothModel::uniform(Side side, double low, double high, double capacity) {
  require_support(low, high);
  require_capacity(capacity);
  SmoothModel m;
  m.side_ = side;
  m.family_ = SmoothFamily::uniform_triangular;
  m.low_ = low;
  m.high_ = high;
  m.capacity_ = capacity;
  m.power_ = 1.0;
  return m;
}

SmoothModel SmoothModel::pyramidal(double v_max, double capacity, double power) {
  require_support(0.0, v_max);
  require_capacity(capacity);
  if (!(power >= 1.0) || !std::isfinite(power)) {
    throw std::invalid_argument("pyramidal power must be >= 1");
  }
  SmoothModel m;
  m.side_ = Side::demand;
  m.family_ = SmoothFamily::pyramidal_power;
  m.low_ = 0.0;
  m.high_ = v_max;
  m.capacity_ = capacity;
  m.power_ = power;
  return m;
}

SmoothModel SmoothModel::custom(Side side, double low, double high, double capacity,
                                std::function<double(double)> density,
                                std::size_t panels) {
  require_support(low, high);
  require_capacity(capacity);
  if (!density) throw std::invalid_argument("custom model needs a density evaluator");
  if (panels < 2) throw std::invalid_argument("custom model needs at least 2 panels");

  SmoothModel m;
  m.side_ = side;
  m.family_ = SmoothFamily::custom_density;
  m.low_ = low;
  m.high_ = high;
  m.capacity_ = capacity;
  m.panel_width_ = (high - low) / static_cast<double>(panels);

  m.node_density_.resize(panels + 1);
  for (std::size_t j = 0; j <= panels; ++j) {
    const double x = (j == panels) ? high : low + static_cast<double>(j) * m.panel_width_;
    const double d = density(x);
    if (!std::isfinite(d) || d < 0.0) {
      throw std::invalid_argument("density must be finite and >= 0 on the support");
    }
    if (j > 0 && j < panels && !(d > 0.0)) {
      throw std::invalid_argument("density must be strictly positive on the open support");
    }
    m.node_density_[j] = d;
  }

  m.cumulative_.resize(panels + 1);
  m.cumulative_[0] = 0.0;
  for (std::size_t j = 0; j < panels; ++j) {
    m.cumulative_[j + 1] = m.cumulative_[j] +
                           0.5 * (m.node_density_[j] + m.node_density_[j + 1]) *
                               m.panel_width_;
  }
  m.total_mass_ = m.cumulative_.back();
  if (!(m.total_mass_ > 0.0)) {
    throw std::invalid_argument("density integrates to zero over the support");
  }
  return m;
}

double SmoothModel::table_cdf(double p) const {
  if (p <= low_) return 0.0;
  if (p >= high_) return 1.0;
  const std::size_t panels = node_density_.size() - 1;
  auto j = static_cast<std::size_t>((p - low_) / panel_width_);
  if (j >= panels) j = panels - 1;
  const double x0 = low_ + static_cast<double>(j) * panel_width_;
  const double dx = p - x0;
  const double d0 = node_density_[j];
  const double rise = (node_density_[j + 1] - d0) / panel_width_;
  const double mass = cumulative_[j] + dx * (d0 + 0.5 * dx * rise);
  return mass / total_mass_;
}

double SmoothModel::table_density(double p) const {
  if (p <= low_ || p >= high_) return 0.0;
  const std::size_t panels = node_density_.size() - 1;
  auto j = static_cast<std::size_t>((p - low_) / panel_width_);
  if (j >= panels) j = panels - 1;
  const double x0 = low_ + static_cast<double>(j) * panel_width_;
  const double w = (p - x0) / panel_width_;
  return (node_density_[j] * (1.0 - w) + node_density_[j + 1] * w) / total_mass_;
}

double SmoothModel::table_quantile(double u) const {
  const double target = u * total_mass_;
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  std::size_t j = (it == cumulative_.begin())
                      ? 0
                      : static_cast<std::size_t>(it - cumulative_.begin()) - 1;
  const std::size_t panels = node_density_.size() - 1;
  if (j >= panels) j = panels - 1;
  const double t = target - cumulative_[j];
  if (t <= 0.0) return low_ + static_cast<double>(j) * panel_width_;
  const double d0 = node_density_[j];
  const double rise = (node_density_[j + 1] - d0) / panel_width_;
  // Solve 0.5*rise*dx^2 + d0*dx = t for dx in [0, panel_width]; the
  // denominator form stays stable as rise -> 0.
  const double disc = d0 * d0 + 2.0 * rise * t;
  const double denom = d0 + std::sqrt(std::max(disc, 0.0));
  double dx = (denom > 0.0) ? (2.0 * t / denom) : 0.0;
  if (dx > panel_width_) dx = panel_width_;
  return low_ + static_cast<double>(j) * panel_width_ + dx;
}

double SmoothModel::fraction(double p) const {
  switch (family_) {
    case SmoothFamily::uniform_triangular:
      return side_ == Side::demand
                 ? kernels::detail::ramp_down_pow1(p, high_, high_ - low_, 1.0)
                 : kernels::detail::ramp_up1(p, low_, high_ - low_);
    case SmoothFamily::pyramidal_power:
      return kernels::detail::ramp_down_pow1(p, high_, high_, power_);
    case SmoothFamily::custom_density: {
      const double cdf = table_cdf(p);
      return side_ == Side::demand ? 1.0 - cdf : cdf;
    }
  }
  return 0.0;
}

void SmoothModel::fraction_batch(std::span<const double> prices,
                                 std::span<double> out) const {
  if (prices.size() != out.size()) {
    throw std::invalid_argument("fraction_batch spans differ in length");
  }
  switch (family_) {
    case SmoothFamily::uniform_triangular:
      if (side_ == Side::demand) {
        kernels::ramp_down_pow(prices, out, high_, high_ - low_, 1.0);
      } else {
        kernels::ramp_up(prices, out, low_, high_ - low_);
      }
      return;
    case SmoothFamily::pyramidal_power:
      kernels::ramp_down_pow(prices, out, high_, high_, power_);
      return;
    case SmoothFamily::custom_density:
      for (std::size_t i = 0; i < prices.size(); ++i) out[i] = fraction(prices[i]);
      return;
  }
}

double SmoothModel::density(double p) const {
  if (p <= low_ || p >= high_) return 0.0;
  switch (family_) {
    case SmoothFamily::uniform_triangular:
      return 1.0 / (high_ - low_);
    case SmoothFamily::pyramidal_power: {
      const double t = (high_ - p) / high_;
      const double tail = power_ == 2.0 ? t : std::pow(t, power_ - 1.0);
      return (power_ / high_) * tail;
    }
    case SmoothFamily::custom_density:
      return table_density(p);
  }
  return 0.0;
}

double SmoothModel::quantile(double u) const {
  if (!(u >= 0.0) || !(u < 1.0)) {
    throw std::invalid_argument("quantile argument must lie in [0, 1)");
  }
  switch (family_) {
    case SmoothFamily::uniform_triangular:
      return kernels::detail::affine1(u, high_ - low_, low_);
    case SmoothFamily::pyramidal_power:
      // CDF is 1 - ((v_max - x)/v_max)^k, so x = v_max (1 - (1-u)^(1/k)).
      return kernels::detail::one_minus_pow1(1.0 - u, high_, 1.0 / power_);
    case SmoothFamily::custom_density:
      return table_quantile(u);
  }
  return low_;
}

std::vector<double> SmoothModel::sample(std::size_t count, std::uint64_t seed) const {
  std::mt19937_64 gen(seed);
  std::vector<double> u(count);
  for (auto& x : u) x = uniform01(gen);

  std::vector<double> draws(count);
  switch (family_) {
    case SmoothFamily::uniform_triangular:
      kernels::affine(u, draws, high_ - low_, low_);
      break;
    case SmoothFamily::pyramidal_power: {
      // s = 1 - u, then v_max (1 - s^(1/k)); power 1 and 2 vectorize.
      std::vector<double> s(count);
      kernels::affine(u, s, -1.0, 1.0);
      kernels::one_minus_pow(s, draws, high_, 1.0 / power_);
      break;
    }
    case SmoothFamily::custom_density:
      for (std::size_t i = 0; i < count; ++i) draws[i] = table_quantile(u[i]);
      break;
  }
  return draws;
}

double model_demand(const SmoothModel& m, double p) {
  if (m.side() != Side::demand) {
    throw std::invalid_argument("model_demand called on a supply-side model");
  }
  return m.capacity() * m.fraction(p);
}

double model_supply(const SmoothModel& m, double p) {
  if (m.side() != Side::supply) {
    throw std::invalid_argument("model_supply called on a demand-side model");
  }
  return m.capacity() * m.fraction(p);
}

double slope(const SmoothModel& m, double p) {
  if (p <= m.low() || p >= m.high()) return 0.0;
  const double d = m.capacity() * m.density(p);
  return m.side() == Side::demand ? -d : d;
}

ConvexityReport convexity_report(const SmoothModel& m, std::span<const double> grid) {
  if (grid.size() < 3) {
    throw std::invalid_argument("convexity report needs at least 3 grid points");
  }
  const double step = grid[1] - grid[0];
  if (!(step > 0.0)) throw std::invalid_argument("grid must be strictly increasing");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double gap = grid[i] - grid[i - 1];
    if (std::fabs(gap - step) > 1e-9 * step) {
      throw std::invalid_argument("convexity report needs a uniformly spaced grid");
    }
  }

  ConvexityReport report;
  report.grid.assign(grid.begin(), grid.end());
  report.tolerance = 1e-9 * m.capacity();

  std::vector<double> q(grid.size());
  m.fraction_batch(grid, q);
  for (auto& v : q) v *= m.capacity();

  report.second_differences.resize(grid.size() - 2);
  bool all_within = true;
  bool all_above_tol = true;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const double d = q[i + 1] - 2.0 * q[i] + q[i - 1];
    report.second_differences[i - 1] = d;
    if (std::fabs(d) > report.tolerance) all_within = false;
    if (!(d > report.tolerance)) all_above_tol = false;
    if (d < -report.tolerance && !report.first_violation) {
      report.first_violation = i - 1;
    }
  }
  if (all_within) {
    report.verdict = Curvature::affine;
  } else if (!report.first_violation) {
    report.verdict = all_above_tol ? Curvature::strictly_convex : Curvature::convex;
  } else {
    report.verdict = Curvature::not_convex;
  }
  return report;
}

std::vector<double> sample_values(const SmoothModel& m, std::size_t count,
                                  std::uint64_t seed) {
  return m.sample(count, seed);
}

}  // namespace cmkt
