#pragma once

// Test-side oracles, independent of the production algorithms they check.

#include <random>
#include <vector>

#include "scnsim/social.hpp"

namespace scnsim_test {

// All shortest paths between u and v by depth-first enumeration; counts how
// many traverse each edge. Brute force against the sigma-product counting.
struct PathEnumerator {
  const scnsim::SocialGraph& g;
  long long total = 0;
  std::vector<std::vector<long long>> edge_count;

  explicit PathEnumerator(const scnsim::SocialGraph& graph, int u, int v)
      : g(graph),
        edge_count(static_cast<std::size_t>(graph.size()),
                   std::vector<long long>(static_cast<std::size_t>(graph.size()), 0)) {
    std::vector<int> dist(static_cast<std::size_t>(g.size()), -1);
    std::vector<int> queue{v};
    dist[static_cast<std::size_t>(v)] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int x = queue[head];
      for (const int y : g.neighbors(x))
        if (dist[static_cast<std::size_t>(y)] < 0) {
          dist[static_cast<std::size_t>(y)] = dist[static_cast<std::size_t>(x)] + 1;
          queue.push_back(y);
        }
    }
    if (dist[static_cast<std::size_t>(u)] < 0) return;
    std::vector<int> path{u};
    walk(u, v, dist, path);
  }

  void walk(int x, int v, const std::vector<int>& dist, std::vector<int>& path) {
    if (x == v) {
      ++total;
      for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        ++edge_count[static_cast<std::size_t>(path[i])]
                    [static_cast<std::size_t>(path[i + 1])];
        ++edge_count[static_cast<std::size_t>(path[i + 1])]
                    [static_cast<std::size_t>(path[i])];
      }
      return;
    }
    for (const int y : g.neighbors(x)) {
      if (dist[static_cast<std::size_t>(y)] !=
          dist[static_cast<std::size_t>(x)] - 1)
        continue;
      path.push_back(y);
      walk(y, v, dist, path);
      path.pop_back();
    }
  }
};

// Exact edge flow by explicit enumeration of every shortest path.
inline std::vector<std::vector<scnsim::Rational>> oracle_edge_flow(
    const scnsim::SocialGraph& g) {
  using scnsim::Rational;
  const int n = g.size();
  std::vector<std::vector<Rational>> flow(
      static_cast<std::size_t>(n),
      std::vector<Rational>(static_cast<std::size_t>(n)));
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      const PathEnumerator pe(g, u, v);
      if (pe.total == 0) continue;
      for (int a = 0; a < n; ++a)
        for (const int b : g.neighbors(a)) {
          if (a >= b) continue;
          const long long cnt = pe.edge_count[static_cast<std::size_t>(a)]
                                             [static_cast<std::size_t>(b)];
          if (cnt != 0) {
            flow[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] +=
                Rational(cnt, pe.total);
            flow[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] =
                flow[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
          }
        }
    }
  }
  return flow;
}

inline scnsim::SocialGraph random_graph(int n, double p, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  scnsim::SocialGraph g(n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (u(gen) < p) g.add_edge(a, b);
  return g;
}

}  // namespace scnsim_test
