#include <cmath>

#include "cmkt/kernels.hpp"

// Reference implementations.  Every loop body is the shared per-element
// helper from kernels.hpp, so these stay the ground truth the vector
// variants are checked against.

namespace cmkt::kernels::scalar {

void affine(std::span<const double> src, std::span<double> out, double width, double lo) {
  for (std::size_t i = 0; i < src.size(); ++i) {
    out[i] = detail::affine1(src[i], width, lo);
  }
}

void ramp_down_pow(std::span<const double> p, std::span<double> out, double high,
                   double width, double power) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    out[i] = detail::ramp_down_pow1(p[i], high, width, power);
  }
}

void ramp_up(std::span<const double> p, std::span<double> out, double low, double width) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    out[i] = detail::ramp_up1(p[i], low, width);
  }
}

void one_minus_pow(std::span<const double> src, std::span<double> out, double scale,
                   double inv_power) {
  for (std::size_t i = 0; i < src.size(); ++i) {
    out[i] = detail::one_minus_pow1(src[i], scale, inv_power);
  }
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double gap = std::fabs(a[i] - b[i]);
    if (gap > worst) worst = gap;
  }
  return worst;
}

double ks_ccdf(std::span<const double> g) {
  const std::size_t n = g.size();
  if (n == 0) return 0.0;
  const double dn = static_cast<double>(n);
  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double above = static_cast<double>(n - j) / dn;
    const double below = static_cast<double>(n - 1 - j) / dn;
    const double gap_hi = std::fabs(g[j] - above);
    const double gap_lo = std::fabs(g[j] - below);
    if (gap_hi > worst) worst = gap_hi;
    if (gap_lo > worst) worst = gap_lo;
  }
  return worst;
}

}  // namespace cmkt::kernels::scalar
