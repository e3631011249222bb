#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "scnsim/kernels.hpp"

namespace k = scnsim::kernels;

namespace {

std::vector<double> random_values(std::size_t n, double lo, double hi,
                                  std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(gen);
  return v;
}

bool bits_equal(double a, double b) {
  return std::memcmp(&a, &b, sizeof(double)) == 0;
}

// Runs fn under both backends and checks bit equality of every output.
template <class Fn>
void check_backend_equivalence(Fn&& fn) {
  if (!k::cpu_has_avx2()) return;  // scalar-only host: nothing to compare
  k::force_backend(k::Backend::Scalar);
  const auto scalar = fn();
  k::force_backend(k::Backend::Avx2);
  const auto avx2 = fn();
  k::force_backend(k::Backend::Avx2);
  REQUIRE(scalar.size() == avx2.size());
  for (std::size_t i = 0; i < scalar.size(); ++i) {
    INFO("lane ", i);
    CHECK(bits_equal(scalar[i], avx2[i]));
  }
}

}  // namespace

TEST_CASE("log2 batch matches libm to a few ulp") {
  const auto x = random_values(4096, 1e-12, 1e12, 11);
  std::vector<double> out(x.size());
  k::log2_batch(x.data(), out.data(), x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double ref = std::log2(x[i]);
    const double tol = std::max(1e-13, 1e-13 * std::fabs(ref));
    CHECK(std::fabs(out[i] - ref) <= tol);
  }
}

TEST_CASE("log2 is exact on powers of two") {
  for (int e = -60; e <= 60; e += 7) {
    CHECK(k::log2_one(std::ldexp(1.0, e)) == static_cast<double>(e));
  }
  CHECK(k::log2_one(1.0) == 0.0);
}

TEST_CASE("exp2 batch matches libm to a few ulp") {
  const auto x = random_values(4096, -600.0, 600.0, 12);
  std::vector<double> out(x.size());
  k::exp2_batch(x.data(), out.data(), x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double ref = std::exp2(x[i]);
    CHECK(std::fabs(out[i] - ref) <= 4e-15 * ref);
  }
}

TEST_CASE("exp2 round trips log2") {
  const auto x = random_values(512, 1e-6, 1e6, 13);
  for (const double v : x) {
    CHECK(k::exp2_one(k::log2_one(v)) == doctest::Approx(v).epsilon(1e-12));
  }
}

TEST_CASE("shannon kernel equals scale*log2(1+x)") {
  const auto x = random_values(1000, 0.0, 1e6, 14);
  std::vector<double> out(x.size());
  k::shannon_batch(x.data(), out.data(), x.size(), 2.5e6);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double ref = 2.5e6 * std::log2(1.0 + x[i]);
    CHECK(out[i] == doctest::Approx(ref).epsilon(1e-12));
  }
  double zero = 0.0, r = -1.0;
  k::shannon_batch(&zero, &r, 1, 1e6);
  CHECK(r == 0.0);
}

TEST_CASE("pathloss gain kernel matches the closed form") {
  const auto d = random_values(1000, 1.0, 5000.0, 15);
  std::vector<double> out(d.size());
  const double a = 145.4, b = 37.5;
  k::pathloss_gain_batch(d.data(), out.data(), d.size(), a, b);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double pl = a + b * std::log10(d[i] / 1000.0);
    const double ref = std::pow(10.0, -pl / 10.0);
    CHECK(out[i] == doctest::Approx(ref).epsilon(1e-11));
  }
}

TEST_CASE("exp_scaled kernel matches exp(coeff*x)") {
  const auto x = random_values(1000, 0.0, 40000.0, 16);
  std::vector<double> out(x.size());
  const double coeff = -1.0 / 20000.0;
  k::exp_scaled_batch(x.data(), out.data(), x.size(), coeff);
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(out[i] == doctest::Approx(std::exp(coeff * x[i])).epsilon(1e-12));
  }
}

TEST_CASE("reductions agree with a naive sum within roundoff") {
  const auto x = random_values(1537, -10.0, 10.0, 17);
  const auto y = random_values(1537, -10.0, 10.0, 18);
  double naive_sum = 0.0, naive_dot = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    naive_sum += x[i];
    naive_dot += x[i] * y[i];
  }
  CHECK(k::reduce_sum(x.data(), x.size()) ==
        doctest::Approx(naive_sum).epsilon(1e-10));
  CHECK(k::reduce_dot(x.data(), y.data(), x.size()) ==
        doctest::Approx(naive_dot).epsilon(1e-10));
}

TEST_CASE("scalar and AVX2 backends are bit-identical") {
  for (const std::size_t n : {0UL, 1UL, 2UL, 3UL, 4UL, 5UL, 7UL, 8UL, 63UL,
                              64UL, 1000UL, 1023UL}) {
    const auto pos = random_values(n, 1e-9, 1e9, 100 + n);
    const auto any = random_values(n, -500.0, 500.0, 200 + n);
    const auto sinr = random_values(n, 0.0, 1e7, 300 + n);
    const auto dist = random_values(n, 1.0, 2000.0, 400 + n);

    check_backend_equivalence([&] {
      std::vector<double> out(n);
      k::log2_batch(pos.data(), out.data(), n);
      return out;
    });
    check_backend_equivalence([&] {
      std::vector<double> out(n);
      k::exp2_batch(any.data(), out.data(), n);
      return out;
    });
    check_backend_equivalence([&] {
      std::vector<double> out(n);
      k::shannon_batch(sinr.data(), out.data(), n, 8e5);
      return out;
    });
    check_backend_equivalence([&] {
      std::vector<double> out(n);
      k::pathloss_gain_batch(dist.data(), out.data(), n, 103.8, 20.9);
      return out;
    });
    check_backend_equivalence([&] {
      std::vector<double> out(n);
      k::exp_scaled_batch(any.data(), out.data(), n, 0.013);
      return out;
    });
    check_backend_equivalence([&] {
      return std::vector<double>{k::reduce_sum(any.data(), n)};
    });
    check_backend_equivalence([&] {
      return std::vector<double>{k::reduce_dot(any.data(), sinr.data(), n)};
    });
  }
}

TEST_CASE("single-value forms match batch results bit for bit") {
  const auto x = random_values(97, 1e-9, 1e9, 42);
  std::vector<double> out(x.size());
  k::log2_batch(x.data(), out.data(), x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    CHECK(bits_equal(out[i], k::log2_one(x[i])));
  const auto y = random_values(97, -500.0, 500.0, 43);
  k::exp2_batch(y.data(), out.data(), y.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    CHECK(bits_equal(out[i], k::exp2_one(y[i])));
}
