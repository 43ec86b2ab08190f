#include "cmkt/kernels.hpp"

namespace cmkt::kernels {

namespace {

struct DispatchTable {
  void (*affine)(std::span<const double>, std::span<double>, double, double);
  void (*ramp_down_pow)(std::span<const double>, std::span<double>, double, double, double);
  void (*ramp_up)(std::span<const double>, std::span<double>, double, double);
  void (*one_minus_pow)(std::span<const double>, std::span<double>, double, double);
  double (*max_abs_diff)(std::span<const double>, std::span<const double>);
  double (*ks_ccdf)(std::span<const double>);
  Backend backend;
};

constexpr DispatchTable kScalarTable = {
    &scalar::affine,   &scalar::ramp_down_pow, &scalar::ramp_up,
    &scalar::one_minus_pow, &scalar::max_abs_diff,  &scalar::ks_ccdf,
    Backend::scalar,
};

#if defined(__x86_64__) || defined(_M_X64)
constexpr DispatchTable kAvx2Table = {
    &avx2::affine,   &avx2::ramp_down_pow, &avx2::ramp_up,
    &avx2::one_minus_pow, &avx2::max_abs_diff,  &avx2::ks_ccdf,
    Backend::avx2,
};
#endif

bool detect_avx2() {
#if defined(__x86_64__) && defined(__GNUC__)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

const DispatchTable* select_table(Backend b) {
#if defined(__x86_64__) || defined(_M_X64)
  if (b == Backend::avx2) return &kAvx2Table;
#else
  (void)b;
#endif
  return &kScalarTable;
}

const DispatchTable*& active_table() {
  static const DispatchTable* table =
      select_table(detect_avx2() ? Backend::avx2 : Backend::scalar);
  return table;
}

}  // namespace

Backend active_backend() { return active_table()->backend; }

std::string_view backend_name() {
  return active_backend() == Backend::avx2 ? "avx2" : "scalar";
}

bool avx2_supported() { return detect_avx2(); }

bool force_backend(Backend b) {
  if (b == Backend::avx2 && !detect_avx2()) return false;
  active_table() = select_table(b);
  return true;
}

void affine(std::span<const double> src, std::span<double> out, double width, double lo) {
  active_table()->affine(src, out, width, lo);
}

void ramp_down_pow(std::span<const double> p, std::span<double> out, double high,
                   double width, double power) {
  active_table()->ramp_down_pow(p, out, high, width, power);
}

void ramp_up(std::span<const double> p, std::span<double> out, double low, double width) {
  active_table()->ramp_up(p, out, low, width);
}

void one_minus_pow(std::span<const double> src, std::span<double> out, double scale,
                   double inv_power) {
  active_table()->one_minus_pow(src, out, scale, inv_power);
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  return active_table()->max_abs_diff(a, b);
}

double ks_ccdf(std::span<const double> g) { return active_table()->ks_ccdf(g); }

}  // namespace cmkt::kernels
