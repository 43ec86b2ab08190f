#include <immintrin.h>

#include <cmath>

#include "cmkt/kernels.hpp"

// AVX2 variants.  Each loop performs exactly the operations of the scalar
// reference in the same order (sub, mul, div, sqrt, min/max -- all
// correctly rounded, no FMA), so results are bit-identical to the scalar
// backend and the dispatcher can pick either freely.

namespace cmkt::kernels::avx2 {

namespace {

inline double reduce_max(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d m = _mm_max_pd(lo, hi);
  __m128d shuffled = _mm_unpackhi_pd(m, m);
  m = _mm_max_sd(m, shuffled);
  return _mm_cvtsd_f64(m);
}

inline __m256d abs_pd(__m256d v) {
  const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  return _mm256_and_pd(v, mask);
}

inline __m256d clamp01(__m256d t) {
  t = _mm256_max_pd(t, _mm256_setzero_pd());
  return _mm256_min_pd(t, _mm256_set1_pd(1.0));
}

}  // namespace

void affine(std::span<const double> src, std::span<double> out, double width, double lo) {
  const __m256d w = _mm256_set1_pd(width);
  const __m256d l = _mm256_set1_pd(lo);
  std::size_t i = 0;
  for (; i + 4 <= src.size(); i += 4) {
    __m256d u = _mm256_loadu_pd(src.data() + i);
    _mm256_storeu_pd(out.data() + i, _mm256_add_pd(l, _mm256_mul_pd(w, u)));
  }
  for (; i < src.size(); ++i) {
    out[i] = detail::affine1(src[i], width, lo);
  }
}

void ramp_down_pow(std::span<const double> p, std::span<double> out, double high,
                   double width, double power) {
  if (power != 1.0 && power != 2.0) {
    scalar::ramp_down_pow(p, out, high, width, power);
    return;
  }
  const __m256d h = _mm256_set1_pd(high);
  const __m256d w = _mm256_set1_pd(width);
  std::size_t i = 0;
  for (; i + 4 <= p.size(); i += 4) {
    __m256d x = _mm256_loadu_pd(p.data() + i);
    __m256d t = clamp01(_mm256_div_pd(_mm256_sub_pd(h, x), w));
    if (power == 2.0) t = _mm256_mul_pd(t, t);
    _mm256_storeu_pd(out.data() + i, t);
  }
  for (; i < p.size(); ++i) {
    out[i] = detail::ramp_down_pow1(p[i], high, width, power);
  }
}

void ramp_up(std::span<const double> p, std::span<double> out, double low, double width) {
  const __m256d l = _mm256_set1_pd(low);
  const __m256d w = _mm256_set1_pd(width);
  std::size_t i = 0;
  for (; i + 4 <= p.size(); i += 4) {
    __m256d x = _mm256_loadu_pd(p.data() + i);
    __m256d t = clamp01(_mm256_div_pd(_mm256_sub_pd(x, l), w));
    _mm256_storeu_pd(out.data() + i, t);
  }
  for (; i < p.size(); ++i) {
    out[i] = detail::ramp_up1(p[i], low, width);
  }
}

void one_minus_pow(std::span<const double> src, std::span<double> out, double scale,
                   double inv_power) {
  if (inv_power != 1.0 && inv_power != 0.5) {
    scalar::one_minus_pow(src, out, scale, inv_power);
    return;
  }
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d sc = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + 4 <= src.size(); i += 4) {
    __m256d s = _mm256_loadu_pd(src.data() + i);
    __m256d root = (inv_power == 0.5) ? _mm256_sqrt_pd(s) : s;
    _mm256_storeu_pd(out.data() + i, _mm256_mul_pd(sc, _mm256_sub_pd(one, root)));
  }
  for (; i < src.size(); ++i) {
    out[i] = detail::one_minus_pow1(src[i], scale, inv_power);
  }
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  __m256d worst4 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= a.size(); i += 4) {
    __m256d x = _mm256_loadu_pd(a.data() + i);
    __m256d y = _mm256_loadu_pd(b.data() + i);
    worst4 = _mm256_max_pd(worst4, abs_pd(_mm256_sub_pd(x, y)));
  }
  double worst = reduce_max(worst4);
  for (; i < a.size(); ++i) {
    const double gap = std::fabs(a[i] - b[i]);
    if (gap > worst) worst = gap;
  }
  return worst;
}

double ks_ccdf(std::span<const double> g) {
  const std::size_t n = g.size();
  if (n == 0) return 0.0;
  const double dn = static_cast<double>(n);
  const __m256d dn4 = _mm256_set1_pd(dn);
  const __m256d dn_minus_1 = _mm256_set1_pd(dn - 1.0);
  // Index vector as doubles; counts stay exact integers well past any
  // population size this project samples.
  __m256d j4 = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
  const __m256d four = _mm256_set1_pd(4.0);
  __m256d worst4 = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d gj = _mm256_loadu_pd(g.data() + j);
    __m256d above = _mm256_div_pd(_mm256_sub_pd(dn4, j4), dn4);
    __m256d below = _mm256_div_pd(_mm256_sub_pd(dn_minus_1, j4), dn4);
    worst4 = _mm256_max_pd(worst4, abs_pd(_mm256_sub_pd(gj, above)));
    worst4 = _mm256_max_pd(worst4, abs_pd(_mm256_sub_pd(gj, below)));
    j4 = _mm256_add_pd(j4, four);
  }
  double worst = reduce_max(worst4);
  for (; j < n; ++j) {
    const double above = static_cast<double>(n - j) / dn;
    const double below = static_cast<double>(n - 1 - j) / dn;
    worst = std::max(worst, std::fabs(g[j] - above));
    worst = std::max(worst, std::fabs(g[j] - below));
  }
  return worst;
}

}  // namespace cmkt::kernels::avx2
