#pragma once

#include <cstdint>
#include <random>

namespace scnsim {

/// Stateless mixer used to derive independent stream seeds from a master
/// seed plus a stream tag.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) {
  return splitmix64(master ^ splitmix64(tag));
}

/// mt19937_64 with hand-rolled draws; avoids std::*_distribution so streams
/// are reproducible independent of the standard library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  /// Uniform in [0, 1).
  double u01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi) {
    const double span = static_cast<double>(hi - lo) + 1.0;
    return lo + static_cast<int>(u01() * span);
  }

  std::size_t uniform_index(std::size_t n) {
    return static_cast<std::size_t>(u01() * static_cast<double>(n));
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace scnsim
