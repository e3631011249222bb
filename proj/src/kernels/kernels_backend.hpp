#pragma once

#include <cstddef>

namespace scnsim::kernels::detail {

struct BackendVtable {
  double (*reduce_sum)(const double*, std::size_t);
  double (*reduce_dot)(const double*, const double*, std::size_t);
  void (*log2_batch)(const double*, double*, std::size_t);
  void (*exp2_batch)(const double*, double*, std::size_t);
  void (*shannon_batch)(const double*, double*, std::size_t, double);
  void (*pathloss_gain_batch)(const double*, double*, std::size_t, double, double);
  void (*exp_scaled_batch)(const double*, double*, std::size_t, double);
};

const BackendVtable& scalar_vtable();
#if defined(__x86_64__) || defined(_M_X64)
const BackendVtable& avx2_vtable();
#endif

}  // namespace scnsim::kernels::detail
