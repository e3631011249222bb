#include "scnsim/kernels.hpp"

#include "kernel_polys.hpp"
#include "kernels_backend.hpp"

namespace scnsim::kernels {
namespace {

Backend g_backend = Backend::Scalar;
bool g_initialized = false;
const detail::BackendVtable* g_vt = nullptr;

void ensure_init() {
  if (g_initialized) return;
  force_backend(cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar);
}

}  // namespace

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

void force_backend(Backend b) {
#if defined(__x86_64__) || defined(_M_X64)
  if (b == Backend::Avx2 && cpu_has_avx2()) {
    g_vt = &detail::avx2_vtable();
    g_backend = Backend::Avx2;
  } else {
    g_vt = &detail::scalar_vtable();
    g_backend = Backend::Scalar;
  }
#else
  (void)b;
  g_vt = &detail::scalar_vtable();
  g_backend = Backend::Scalar;
#endif
  g_initialized = true;
}

Backend active_backend() {
  ensure_init();
  return g_backend;
}

std::string_view backend_name() {
  ensure_init();
  return g_backend == Backend::Avx2 ? "avx2" : "scalar";
}

double reduce_sum(const double* x, std::size_t n) {
  ensure_init();
  return g_vt->reduce_sum(x, n);
}

double reduce_dot(const double* x, const double* y, std::size_t n) {
  ensure_init();
  return g_vt->reduce_dot(x, y, n);
}

void log2_batch(const double* x, double* out, std::size_t n) {
  ensure_init();
  g_vt->log2_batch(x, out, n);
}

void exp2_batch(const double* x, double* out, std::size_t n) {
  ensure_init();
  g_vt->exp2_batch(x, out, n);
}

void shannon_batch(const double* sinr, double* out, std::size_t n, double scale) {
  ensure_init();
  g_vt->shannon_batch(sinr, out, n, scale);
}

void pathloss_gain_batch(const double* dist_m, double* out, std::size_t n,
                         double a, double b) {
  ensure_init();
  g_vt->pathloss_gain_batch(dist_m, out, n, a, b);
}

void exp_scaled_batch(const double* x, double* out, std::size_t n, double coeff) {
  ensure_init();
  g_vt->exp_scaled_batch(x, out, n, coeff);
}

double log2_one(double x) { return detail::log2_core(x); }
double exp2_one(double x) { return detail::exp2_core(x); }

}  // namespace scnsim::kernels
