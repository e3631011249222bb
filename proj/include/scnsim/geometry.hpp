#pragma once

#include <cmath>

namespace scnsim {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline double sq_dist(Vec2 a, Vec2 b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

inline double dist(Vec2 a, Vec2 b) { return std::sqrt(sq_dist(a, b)); }

/// Euclidean distance floored at d_min; co-located nodes are treated as
/// d_min apart so path loss stays finite.
inline double clamped_dist(Vec2 a, Vec2 b, double d_min) {
  const double d = dist(a, b);
  return d < d_min ? d_min : d;
}

}  // namespace scnsim
