#include <cmath>
#include <cstddef>

#include "kernel_polys.hpp"
#include "kernels_backend.hpp"

namespace scnsim::kernels::detail {
namespace {

// 4-lane blocked reduction; lane j picks up indices == j mod 4. The AVX2
// backend maps lanes to the same indices, so the association tree matches.
double sum_impl(const double* x, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t n4 = n & ~static_cast<std::size_t>(3);
  std::size_t i = 0;
  for (; i < n4; i += 4) {
    acc[0] += x[i];
    acc[1] += x[i + 1];
    acc[2] += x[i + 2];
    acc[3] += x[i + 3];
  }
  for (std::size_t j = 0; i + j < n; ++j) acc[j] += x[i + j];
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

double dot_impl(const double* x, const double* y, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t n4 = n & ~static_cast<std::size_t>(3);
  std::size_t i = 0;
  for (; i < n4; i += 4) {
    acc[0] = std::fma(x[i], y[i], acc[0]);
    acc[1] = std::fma(x[i + 1], y[i + 1], acc[1]);
    acc[2] = std::fma(x[i + 2], y[i + 2], acc[2]);
    acc[3] = std::fma(x[i + 3], y[i + 3], acc[3]);
  }
  for (std::size_t j = 0; i + j < n; ++j)
    acc[j] = std::fma(x[i + j], y[i + j], acc[j]);
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

void log2_impl(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = log2_core(x[i]);
}

void exp2_impl(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = exp2_core(x[i]);
}

void shannon_impl(const double* sinr, double* out, std::size_t n, double scale) {
  for (std::size_t i = 0; i < n; ++i) out[i] = shannon_core(sinr[i], scale);
}

void pathloss_impl(const double* d, double* out, std::size_t n, double a, double b) {
  double c0, c1;
  pathloss_constants(a, b, c0, c1);
  for (std::size_t i = 0; i < n; ++i) out[i] = pathloss_gain_core(d[i], c0, c1);
}

void exp_scaled_impl(const double* x, double* out, std::size_t n, double coeff) {
  for (std::size_t i = 0; i < n; ++i) out[i] = exp_scaled_core(x[i], coeff);
}

}  // namespace

const BackendVtable& scalar_vtable() {
  static const BackendVtable vt = {
      sum_impl,    dot_impl,      log2_impl,       exp2_impl,
      shannon_impl, pathloss_impl, exp_scaled_impl,
  };
  return vt;
}

}  // namespace scnsim::kernels::detail
