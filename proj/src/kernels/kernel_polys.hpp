#pragma once

// Scalar polynomial cores for log2/exp2 shared by every backend. The vector
// backends must execute the same operations in the same order (explicit fma,
// no re-association) so that scalar and SIMD results agree bit-for-bit.
// Compile every kernel translation unit with -ffp-contract=off.

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

namespace scnsim::kernels::detail {

inline constexpr double kSqrt2 = 1.4142135623730951;
inline constexpr double kLn2 = 0.6931471805599453;
inline constexpr double kLog2E = 1.4426950408889634;
inline constexpr double kLog2Of10 = 3.3219280948873623;
inline constexpr double kLog2Of1000 = 9.965784284662087;

// atanh series for log2: x = 2^e * m, m in [sqrt(1/2), sqrt(2)),
// s = (m-1)/(m+1), log2(m) = s * poly(s*s). |s| <= 0.1716, so the s^17
// truncation error is ~4e-16; total error a few ulp.
inline constexpr double kLog2Poly[9] = {
    2.885390081777927,         // 2/ln2
    2.885390081777927 / 3.0,   //
    2.885390081777927 / 5.0,   //
    2.885390081777927 / 7.0,   //
    2.885390081777927 / 9.0,   //
    2.885390081777927 / 11.0,  //
    2.885390081777927 / 13.0,  //
    2.885390081777927 / 15.0,  //
    2.885390081777927 / 17.0,  //
};

// exp Taylor 1/k! for exp2 via 2^k * e^(r*ln2), |r*ln2| <= 0.3466. The u^13
// truncation error is below one ulp.
inline constexpr double kExpPoly[14] = {
    1.0,
    1.0,
    1.0 / 2,
    1.0 / 6,
    1.0 / 24,
    1.0 / 120,
    1.0 / 720,
    1.0 / 5040,
    1.0 / 40320,
    1.0 / 362880,
    1.0 / 3628800,
    1.0 / 39916800,
    1.0 / 479001600,
    1.0 / 6227020800.0,
};

// Inputs are clamped to the normal binary64 exponent range; the simulator
// never leaves it (gains above ~1e-307, exponents below ~1e+307).
inline constexpr double kExp2Min = -1020.0;
inline constexpr double kExp2Max = 1020.0;

inline double log2_core(double x) {
  const std::uint64_t bits = std::bit_cast<std::uint64_t>(x);
  std::int64_t e = static_cast<std::int64_t>(bits >> 52) - 1023;
  double m = std::bit_cast<double>((bits & 0x000fffffffffffffULL) |
                                   0x3ff0000000000000ULL);
  if (m > kSqrt2) {
    m = m * 0.5;
    e += 1;
  }
  const double s = (m - 1.0) / (m + 1.0);
  const double t = s * s;
  double p = kLog2Poly[8];
  p = std::fma(p, t, kLog2Poly[7]);
  p = std::fma(p, t, kLog2Poly[6]);
  p = std::fma(p, t, kLog2Poly[5]);
  p = std::fma(p, t, kLog2Poly[4]);
  p = std::fma(p, t, kLog2Poly[3]);
  p = std::fma(p, t, kLog2Poly[2]);
  p = std::fma(p, t, kLog2Poly[1]);
  p = std::fma(p, t, kLog2Poly[0]);
  return std::fma(s, p, static_cast<double>(e));
}

inline double exp2_core(double y) {
  y = y < kExp2Min ? kExp2Min : y;
  y = y > kExp2Max ? kExp2Max : y;
  const double k = std::nearbyint(y);
  const double u = (y - k) * kLn2;
  double p = kExpPoly[13];
  p = std::fma(p, u, kExpPoly[12]);
  p = std::fma(p, u, kExpPoly[11]);
  p = std::fma(p, u, kExpPoly[10]);
  p = std::fma(p, u, kExpPoly[9]);
  p = std::fma(p, u, kExpPoly[8]);
  p = std::fma(p, u, kExpPoly[7]);
  p = std::fma(p, u, kExpPoly[6]);
  p = std::fma(p, u, kExpPoly[5]);
  p = std::fma(p, u, kExpPoly[4]);
  p = std::fma(p, u, kExpPoly[3]);
  p = std::fma(p, u, kExpPoly[2]);
  p = std::fma(p, u, kExpPoly[1]);
  p = std::fma(p, u, kExpPoly[0]);
  const auto ik = static_cast<std::int64_t>(k);
  const double scale =
      std::bit_cast<double>(static_cast<std::uint64_t>(ik + 1023) << 52);
  return p * scale;
}

inline double shannon_core(double sinr, double scale) {
  return scale * log2_core(1.0 + sinr);
}

inline double pathloss_gain_core(double d, double c0, double c1) {
  return exp2_core(std::fma(c1, log2_core(d), c0));
}

inline double exp_scaled_core(double x, double coeff) {
  return exp2_core((coeff * x) * kLog2E);
}

// Precomputed constants for pathloss_gain_batch:
// y = c0 + c1*log2(d), c1 = -b/10, c0 = -a*log2(10)/10 + b*log2(1000)/10.
inline void pathloss_constants(double a, double b, double& c0, double& c1) {
  c1 = -b * 0.1;
  c0 = -a * (kLog2Of10 * 0.1) + b * (kLog2Of1000 * 0.1);
}

}  // namespace scnsim::kernels::detail
