#pragma once

#include <cmath>
#include <span>
#include <string_view>

// Data-parallel inner loops behind the smooth-schedule and Monte Carlo
// machinery: batch (complementary) CDF evaluation, inverse-CDF transforms
// of uniform draws, and sup-norm statistics.  Each kernel has a scalar
// reference implementation and, on x86-64, an AVX2 variant selected at
// runtime.  The two variants are bit-identical by construction (same
// operations, same order, no FMA contraction), which the test suite
// checks, so callers never need to care which one ran.

namespace cmkt::kernels {

enum class Backend { scalar, avx2 };

Backend active_backend();
std::string_view backend_name();

// Test hook: force a specific backend.  Returns false (and leaves the
// dispatch untouched) if the CPU cannot run it.
bool force_backend(Backend b);
bool avx2_supported();

// Per-element definitions shared by the scalar loops and by single-point
// callers, so one price evaluated alone equals the same price evaluated
// inside a batch.
namespace detail {

// Descending ramp through [low, high] raised to `power`:
// clamp01((high - p) / width) ^ power.  power 1 and 2 are exact fast
// paths; anything else goes through std::pow.
inline double ramp_down_pow1(double p, double high, double width, double power) {
  double t = (high - p) / width;
  t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
  if (power == 1.0) return t;
  if (power == 2.0) return t * t;
  return std::pow(t, power);
}

// Ascending ramp: clamp01((p - low) / width).
inline double ramp_up1(double p, double low, double width) {
  double t = (p - low) / width;
  return t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
}

inline double affine1(double u, double width, double lo) { return lo + width * u; }

// scale * (1 - s^inv_power); inv_power 1 and 0.5 are exact fast paths.
inline double one_minus_pow1(double s, double scale, double inv_power) {
  double root;
  if (inv_power == 1.0) {
    root = s;
  } else if (inv_power == 0.5) {
    root = std::sqrt(s);
  } else {
    root = std::pow(s, inv_power);
  }
  return scale * (1.0 - root);
}

}  // namespace detail

// out[i] = lo + width * src[i]
void affine(std::span<const double> src, std::span<double> out, double width, double lo);

// out[i] = clamp01((high - p[i]) / width) ^ power
void ramp_down_pow(std::span<const double> p, std::span<double> out,
                   double high, double width, double power);

// out[i] = clamp01((p[i] - low) / width)
void ramp_up(std::span<const double> p, std::span<double> out, double low, double width);

// out[i] = scale * (1 - src[i] ^ inv_power)
void one_minus_pow(std::span<const double> src, std::span<double> out,
                   double scale, double inv_power);

// max_i |a[i] - b[i]|; 0 for empty input.
double max_abs_diff(std::span<const double> a, std::span<const double> b);

// Kolmogorov-Smirnov statistic between the empirical complementary CDF of
// n ascending sorted samples and a model complementary CDF already
// evaluated at those samples: the empirical curve takes values (n-j)/n and
// (n-1-j)/n on either side of sample j, so the sup over all prices is
// max_j max(|g[j] - (n-j)/n|, |g[j] - (n-1-j)/n|).
double ks_ccdf(std::span<const double> model_ccdf_at_sorted);

namespace scalar {
void affine(std::span<const double> src, std::span<double> out, double width, double lo);
void ramp_down_pow(std::span<const double> p, std::span<double> out,
                   double high, double width, double power);
void ramp_up(std::span<const double> p, std::span<double> out, double low, double width);
void one_minus_pow(std::span<const double> src, std::span<double> out,
                   double scale, double inv_power);
double max_abs_diff(std::span<const double> a, std::span<const double> b);
double ks_ccdf(std::span<const double> model_ccdf_at_sorted);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
void affine(std::span<const double> src, std::span<double> out, double width, double lo);
void ramp_down_pow(std::span<const double> p, std::span<double> out,
                   double high, double width, double power);
void ramp_up(std::span<const double> p, std::span<double> out, double low, double width);
void one_minus_pow(std::span<const double> src, std::span<double> out,
                   double scale, double inv_power);
double max_abs_diff(std::span<const double> a, std::span<const double> b);
double ks_ccdf(std::span<const double> model_ccdf_at_sorted);
}  // namespace avx2
#endif

}  // namespace cmkt::kernels
