#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cstddef>
#include <cstdint>

#include "kernel_polys.hpp"
#include "kernels_backend.hpp"

// AVX2 mirror of the scalar reference cores. Operation order and rounding
// match kernel_polys.hpp exactly; equivalence tests assert bit equality.

namespace scnsim::kernels::detail {
namespace {

constexpr std::uint64_t kMantissaMask = 0x000fffffffffffffULL;
constexpr std::uint64_t kOneBits = 0x3ff0000000000000ULL;
constexpr std::uint64_t kInt64Magic = 0x4330000000000000ULL;  // 2^52

inline __m256d log2_vec(__m256d x) {
  const __m256i bits = _mm256_castpd_si256(x);
  // exponent field to double via the 2^52 magic-number trick
  const __m256i expfield = _mm256_srli_epi64(bits, 52);
  const __m256d magic = _mm256_castsi256_pd(_mm256_set1_epi64x(
      static_cast<long long>(kInt64Magic)));
  __m256d e = _mm256_sub_pd(
      _mm256_castsi256_pd(_mm256_or_si256(
          expfield, _mm256_set1_epi64x(static_cast<long long>(kInt64Magic)))),
      magic);
  e = _mm256_sub_pd(e, _mm256_set1_pd(1023.0));
  __m256d m = _mm256_castsi256_pd(_mm256_or_si256(
      _mm256_and_si256(bits,
                       _mm256_set1_epi64x(static_cast<long long>(kMantissaMask))),
      _mm256_set1_epi64x(static_cast<long long>(kOneBits))));
  const __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(kSqrt2), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
  e = _mm256_blendv_pd(e, _mm256_add_pd(e, _mm256_set1_pd(1.0)), big);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d s = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  const __m256d t = _mm256_mul_pd(s, s);
  __m256d p = _mm256_set1_pd(kLog2Poly[8]);
  p = _mm256_fmadd_pd(p, t, _mm256_set1_pd(kLog2Poly[7]));
  p = _mm256_fmadd_pd(p, t, _mm256_set1_pd(kLog2Poly[6]));
  p = _mm256_fmadd_pd(p, t, _mm256_set1_pd(kLog2Poly[5]));
  p = _mm256_fmadd_pd(p, t, _mm256_set1_pd(kLog2Poly[4]));
  p = _mm256_fmadd_pd(p, t, _mm256_set1_pd(kLog2Poly[3]));
  p = _mm256_fmadd_pd(p, t, _mm256_set1_pd(kLog2Poly[2]));
  p = _mm256_fmadd_pd(p, t, _mm256_set1_pd(kLog2Poly[1]));
  p = _mm256_fmadd_pd(p, t, _mm256_set1_pd(kLog2Poly[0]));
  return _mm256_fmadd_pd(s, p, e);
}

inline __m256d exp2_vec(__m256d y) {
  y = _mm256_max_pd(y, _mm256_set1_pd(kExp2Min));
  y = _mm256_min_pd(y, _mm256_set1_pd(kExp2Max));
  const __m256d k =
      _mm256_round_pd(y, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  const __m256d u = _mm256_mul_pd(_mm256_sub_pd(y, k), _mm256_set1_pd(kLn2));
  __m256d p = _mm256_set1_pd(kExpPoly[13]);
  p = _mm256_fmadd_pd(p, u, _mm256_set1_pd(kExpPoly[12]));
  p = _mm256_fmadd_pd(p, u, _mm256_set1_pd(kExpPoly[11]));
  p = _mm256_fmadd_pd(p, u, _mm256_set1_pd(kExpPoly[10]));
  p = _mm256_fmadd_pd(p, u, _mm256_set1_pd(kExpPoly[9]));
  p = _mm256_fmadd_pd(p, u, _mm256_set1_pd(kExpPoly[8]));
  p = _mm256_fmadd_pd(p, u, _mm256_set1_pd(kExpPoly[7]));
  p = _mm256_fmadd_pd(p, u, _mm256_set1_pd(kExpPoly[6]));
  p = _mm256_fmadd_pd(p, u, _mm256_set1_pd(kExpPoly[5]));
  p = _mm256_fmadd_pd(p, u, _mm256_set1_pd(kExpPoly[4]));
  p = _mm256_fmadd_pd(p, u, _mm256_set1_pd(kExpPoly[3]));
  p = _mm256_fmadd_pd(p, u, _mm256_set1_pd(kExpPoly[2]));
  p = _mm256_fmadd_pd(p, u, _mm256_set1_pd(kExpPoly[1]));
  p = _mm256_fmadd_pd(p, u, _mm256_set1_pd(kExpPoly[0]));
  const __m128i k32 = _mm256_cvtpd_epi32(k);
  const __m256i k64 = _mm256_cvtepi32_epi64(k32);
  const __m256i biased = _mm256_add_epi64(k64, _mm256_set1_epi64x(1023));
  const __m256d scale = _mm256_castsi256_pd(_mm256_slli_epi64(biased, 52));
  return _mm256_mul_pd(p, scale);
}

double sum_impl(const double* x, std::size_t n) {
  __m256d vacc = _mm256_setzero_pd();
  const std::size_t n4 = n & ~static_cast<std::size_t>(3);
  std::size_t i = 0;
  for (; i < n4; i += 4) vacc = _mm256_add_pd(vacc, _mm256_loadu_pd(x + i));
  alignas(32) double acc[4];
  _mm256_store_pd(acc, vacc);
  for (std::size_t j = 0; i + j < n; ++j) acc[j] += x[i + j];
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

double dot_impl(const double* x, const double* y, std::size_t n) {
  __m256d vacc = _mm256_setzero_pd();
  const std::size_t n4 = n & ~static_cast<std::size_t>(3);
  std::size_t i = 0;
  for (; i < n4; i += 4)
    vacc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), vacc);
  alignas(32) double acc[4];
  _mm256_store_pd(acc, vacc);
  for (std::size_t j = 0; i + j < n; ++j)
    acc[j] = std::fma(x[i + j], y[i + j], acc[j]);
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

void log2_impl(const double* x, double* out, std::size_t n) {
  const std::size_t n4 = n & ~static_cast<std::size_t>(3);
  std::size_t i = 0;
  for (; i < n4; i += 4)
    _mm256_storeu_pd(out + i, log2_vec(_mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = log2_core(x[i]);
}

void exp2_impl(const double* x, double* out, std::size_t n) {
  const std::size_t n4 = n & ~static_cast<std::size_t>(3);
  std::size_t i = 0;
  for (; i < n4; i += 4)
    _mm256_storeu_pd(out + i, exp2_vec(_mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = exp2_core(x[i]);
}

void shannon_impl(const double* sinr, double* out, std::size_t n, double scale) {
  const __m256d vscale = _mm256_set1_pd(scale);
  const __m256d one = _mm256_set1_pd(1.0);
  const std::size_t n4 = n & ~static_cast<std::size_t>(3);
  std::size_t i = 0;
  for (; i < n4; i += 4) {
    const __m256d v = _mm256_add_pd(one, _mm256_loadu_pd(sinr + i));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(vscale, log2_vec(v)));
  }
  for (; i < n; ++i) out[i] = shannon_core(sinr[i], scale);
}

void pathloss_impl(const double* d, double* out, std::size_t n, double a, double b) {
  double c0, c1;
  pathloss_constants(a, b, c0, c1);
  const __m256d vc0 = _mm256_set1_pd(c0);
  const __m256d vc1 = _mm256_set1_pd(c1);
  const std::size_t n4 = n & ~static_cast<std::size_t>(3);
  std::size_t i = 0;
  for (; i < n4; i += 4) {
    const __m256d lg = log2_vec(_mm256_loadu_pd(d + i));
    _mm256_storeu_pd(out + i, exp2_vec(_mm256_fmadd_pd(vc1, lg, vc0)));
  }
  for (; i < n; ++i) out[i] = pathloss_gain_core(d[i], c0, c1);
}

void exp_scaled_impl(const double* x, double* out, std::size_t n, double coeff) {
  const __m256d vcoeff = _mm256_set1_pd(coeff);
  const __m256d vlog2e = _mm256_set1_pd(kLog2E);
  const std::size_t n4 = n & ~static_cast<std::size_t>(3);
  std::size_t i = 0;
  for (; i < n4; i += 4) {
    const __m256d u = _mm256_mul_pd(vcoeff, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(out + i, exp2_vec(_mm256_mul_pd(u, vlog2e)));
  }
  for (; i < n; ++i) out[i] = exp_scaled_core(x[i], coeff);
}

}  // namespace

const BackendVtable& avx2_vtable() {
  static const BackendVtable vt = {
      sum_impl,    dot_impl,      log2_impl,       exp2_impl,
      shannon_impl, pathloss_impl, exp_scaled_impl,
  };
  return vt;
}

}  // namespace scnsim::kernels::detail

#endif  // x86_64
