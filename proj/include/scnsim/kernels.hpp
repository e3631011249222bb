#pragma once

#include <cstddef>
#include <string_view>

namespace scnsim::kernels {

enum class Backend { Scalar, Avx2 };

/// Backend selected at runtime (CPUID probe on first use).
Backend active_backend();
/// Pin a backend explicitly; Avx2 on unsupported hardware falls back to Scalar.
void force_backend(Backend b);
bool cpu_has_avx2();
std::string_view backend_name();

// Reductions use a fixed 4-lane blocked accumulation order so that the
// scalar and AVX2 paths produce bit-identical results.
double reduce_sum(const double* x, std::size_t n);
double reduce_dot(const double* x, const double* y, std::size_t n);

// Elementwise kernels. Every backend evaluates the same fma polynomial in
// the same order; outputs are bit-identical across backends. Accuracy vs.
// libm is a few ulp (see tests).
void log2_batch(const double* x, double* out, std::size_t n);
void exp2_batch(const double* x, double* out, std::size_t n);

/// out[i] = scale * log2(1 + sinr[i])
void shannon_batch(const double* sinr, double* out, std::size_t n, double scale);

/// Log-distance propagation gain: out[i] = 10^(-(a + b*log10(d[i]/1000))/10),
/// d in meters. Caller clamps degenerate distances beforehand.
void pathloss_gain_batch(const double* dist_m, double* out, std::size_t n,
                         double a, double b);

/// out[i] = exp(coeff * x[i])
void exp_scaled_batch(const double* x, double* out, std::size_t n, double coeff);

// Single-value forms. Always evaluate the scalar reference path, so results
// match the batch kernels bit-for-bit regardless of the active backend.
double log2_one(double x);
double exp2_one(double x);

}  // namespace scnsim::kernels
