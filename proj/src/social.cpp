#include "scnsim/social.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <istream>
#include <numeric>
#include <ostream>

#include "scnsim/errors.hpp"
#include "scnsim/rng.hpp"

namespace scnsim {

SocialGraph::SocialGraph(int n) : n_(n) {
  if (n < 1) throw DomainError("social graph needs at least one vertex");
  adj_.resize(static_cast<std::size_t>(n));
  adj_mat_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
}

void SocialGraph::add_edge(int u, int v) {
  if (u == v) throw DomainError("social graph: self loops are forbidden");
  if (u < 0 || v < 0 || u >= n_ || v >= n_)
    throw DomainError("social graph: vertex id out of range");
  if (has_edge(u, v)) return;
  adj_mat_[idx(u, v)] = adj_mat_[idx(v, u)] = 1;
  adj_[u].insert(std::upper_bound(adj_[u].begin(), adj_[u].end(), v), v);
  adj_[v].insert(std::upper_bound(adj_[v].begin(), adj_[v].end(), u), u);
  ++edges_;
}

SocialGraph SocialGraph::erdos_renyi(int n, double p, std::uint64_t seed) {
  if (p < 0.0 || p > 1.0) throw ConfigError("erdos_renyi: p must lie in [0,1]");
  SocialGraph g(n);
  Rng rng(seed);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.u01() < p) g.add_edge(u, v);
  return g;
}

SocialGraph SocialGraph::watts_strogatz(int n, int k, double rewire,
                                        std::uint64_t seed) {
  if (k < 0 || k % 2 != 0) throw ConfigError("watts_strogatz: k must be even");
  if (rewire < 0.0 || rewire > 1.0)
    throw ConfigError("watts_strogatz: rewire must lie in [0,1]");
  SocialGraph g(n);
  if (n <= 1) return g;
  if (k >= n - 1) {  // ring saturates into the complete graph
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
    return g;
  }
  Rng rng(seed);
  for (int j = 1; j <= k / 2; ++j)
    for (int u = 0; u < n; ++u) g.add_edge(u, (u + j) % n);
  for (int j = 1; j <= k / 2; ++j) {
    for (int u = 0; u < n; ++u) {
      if (rng.u01() >= rewire) continue;
      const int v = (u + j) % n;
      if (g.degree(u) >= n - 1) continue;  // saturated, nothing to rewire to
      int w = u;
      do {
        w = rng.uniform_int(0, n - 1);
      } while (w == u || g.has_edge(u, w));
      if (!g.has_edge(u, v)) continue;  // already rewired away earlier
      auto& au = g.adj_[u];
      auto& av = g.adj_[v];
      au.erase(std::lower_bound(au.begin(), au.end(), v));
      av.erase(std::lower_bound(av.begin(), av.end(), u));
      g.adj_mat_[g.idx(u, v)] = g.adj_mat_[g.idx(v, u)] = 0;
      --g.edges_;
      g.add_edge(u, w);
    }
  }
  return g;
}

SocialGraph SocialGraph::from_edge_list(int n, std::istream& in) {
  SocialGraph g(n);
  int u = 0, v = 0;
  while (in >> u >> v) g.add_edge(u, v);
  return g;
}

void SocialGraph::to_edge_list(std::ostream& out) const {
  for (int u = 0; u < n_; ++u)
    for (const int v : adj_[u])
      if (u < v) out << u << " " << v << "\n";
}

Eigen::MatrixXd raw_similarity(const SocialGraph& g) {
  const int n = g.size();
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      const auto& a = g.neighbors(u);
      const auto& b = g.neighbors(v);
      double sum = 0.0;
      std::size_t i = 0, j = 0;
      while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) {
          ++i;
        } else if (a[i] > b[j]) {
          ++j;
        } else {
          sum += 1.0 / static_cast<double>(g.degree(a[i]));
          ++i;
          ++j;
        }
      }
      q(u, v) = q(v, u) = sum;
    }
  }
  return q;
}

Eigen::MatrixXd normalize_saw(const Eigen::MatrixXd& q, bool symmetrize) {
  const Eigen::Index n = q.rows();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const double cmax = q.col(c).maxCoeff();
    if (cmax > 0.0) s.col(c) = q.col(c) / cmax;
  }
  if (symmetrize) s = ((s + s.transpose()) / 2.0).eval();
  return s;
}

namespace {

long long llgcd(long long a, long long b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b != 0) {
    const long long t = a % b;
    a = b;
    b = t;
  }
  return a == 0 ? 1 : a;
}

struct BfsResult {
  std::vector<int> dist;
  std::vector<long long> sigma;
  std::vector<int> order;               // nondecreasing distance
  std::vector<std::vector<int>> preds;  // shortest-path predecessors
};

BfsResult bfs_count(const SocialGraph& g, int s) {
  const int n = g.size();
  BfsResult r;
  r.dist.assign(static_cast<std::size_t>(n), -1);
  r.sigma.assign(static_cast<std::size_t>(n), 0);
  r.preds.assign(static_cast<std::size_t>(n), {});
  r.order.reserve(static_cast<std::size_t>(n));
  std::deque<int> queue;
  r.dist[static_cast<std::size_t>(s)] = 0;
  r.sigma[static_cast<std::size_t>(s)] = 1;
  queue.push_back(s);
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    r.order.push_back(v);
    for (const int w : g.neighbors(v)) {
      if (r.dist[static_cast<std::size_t>(w)] < 0) {
        r.dist[static_cast<std::size_t>(w)] = r.dist[static_cast<std::size_t>(v)] + 1;
        queue.push_back(w);
      }
      if (r.dist[static_cast<std::size_t>(w)] ==
          r.dist[static_cast<std::size_t>(v)] + 1) {
        r.sigma[static_cast<std::size_t>(w)] += r.sigma[static_cast<std::size_t>(v)];
        r.preds[static_cast<std::size_t>(w)].push_back(v);
      }
    }
  }
  return r;
}

}  // namespace

Eigen::MatrixXd edge_flow(const SocialGraph& g) {
  const int n = g.size();
  Eigen::MatrixXd flow = Eigen::MatrixXd::Zero(n, n);
  std::vector<double> delta(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    const BfsResult r = bfs_count(g, s);
    std::fill(delta.begin(), delta.end(), 0.0);
    for (auto it = r.order.rbegin(); it != r.order.rend(); ++it) {
      const int w = *it;
      for (const int v : r.preds[static_cast<std::size_t>(w)]) {
        const double c = static_cast<double>(r.sigma[static_cast<std::size_t>(v)]) /
                         static_cast<double>(r.sigma[static_cast<std::size_t>(w)]) *
                         (1.0 + delta[static_cast<std::size_t>(w)]);
        flow(v, w) += c;
        flow(w, v) += c;
        delta[static_cast<std::size_t>(v)] += c;
      }
    }
  }
  // every unordered pair was counted from both endpoints
  return flow / 2.0;
}

Rational::Rational(long long n, long long d) : num(n), den(d) {
  if (den == 0) throw DomainError("rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long long g = llgcd(num, den);
  num /= g;
  den /= g;
}

Rational& Rational::operator+=(const Rational& o) {
  const long long g = llgcd(den, o.den);
  const long long n = num * (o.den / g) + o.num * (den / g);
  const long long d = den / g * o.den;
  *this = Rational(n, d);
  return *this;
}

std::vector<std::vector<Rational>> edge_flow_exact(const SocialGraph& g) {
  const int n = g.size();
  if (n > 16)
    throw OracleSizeError("edge_flow_exact: graph too large (max 16 vertices)");
  std::vector<BfsResult> from(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s)
    from[static_cast<std::size_t>(s)] = bfs_count(g, s);
  std::vector<std::vector<Rational>> flow(
      static_cast<std::size_t>(n),
      std::vector<Rational>(static_cast<std::size_t>(n)));
  for (int u = 0; u < n; ++u) {
    const auto& fu = from[static_cast<std::size_t>(u)];
    for (int v = u + 1; v < n; ++v) {
      if (fu.dist[static_cast<std::size_t>(v)] < 0) continue;  // disconnected
      const auto& fv = from[static_cast<std::size_t>(v)];
      const long long total = fu.sigma[static_cast<std::size_t>(v)];
      for (int a = 0; a < n; ++a) {
        for (const int b : g.neighbors(a)) {
          if (a >= b) continue;
          long long through = 0;
          if (fu.dist[static_cast<std::size_t>(a)] >= 0 &&
              fv.dist[static_cast<std::size_t>(b)] >= 0 &&
              fu.dist[static_cast<std::size_t>(a)] + 1 +
                      fv.dist[static_cast<std::size_t>(b)] ==
                  fu.dist[static_cast<std::size_t>(v)])
            through += fu.sigma[static_cast<std::size_t>(a)] *
                       fv.sigma[static_cast<std::size_t>(b)];
          if (fu.dist[static_cast<std::size_t>(b)] >= 0 &&
              fv.dist[static_cast<std::size_t>(a)] >= 0 &&
              fu.dist[static_cast<std::size_t>(b)] + 1 +
                      fv.dist[static_cast<std::size_t>(a)] ==
                  fu.dist[static_cast<std::size_t>(v)])
            through += fu.sigma[static_cast<std::size_t>(b)] *
                       fv.sigma[static_cast<std::size_t>(a)];
          if (through != 0) {
            auto& cell = flow[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
            cell += Rational(through, total);
            flow[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = cell;
          }
        }
      }
    }
  }
  return flow;
}

Eigen::MatrixXd edge_betweenness(const SocialGraph& g, BetweennessNorm norm) {
  const int n = g.size();
  if (n < 2) return Eigen::MatrixXd::Zero(n, n);
  const double divisor =
      norm == BetweennessNorm::SquaredCount
          ? static_cast<double>(n - 1) * static_cast<double>(n - 1)
          : static_cast<double>(n) * static_cast<double>(n - 1);
  return edge_flow(g) / divisor;
}

Eigen::MatrixXd social_distance(const Eigen::MatrixXd& s,
                                const Eigen::MatrixXd& a, double alpha,
                                double beta) {
  if (alpha < 0.0 || beta < 0.0 || std::abs(alpha + beta - 1.0) > 1e-12)
    throw ConfigError(
        "social_distance: require alpha,beta >= 0 and alpha+beta == 1");
  return alpha * s + beta * a;
}

Eigen::MatrixXd pairwise_distances(std::span<const Vec2> pos, double d_min) {
  const Eigen::Index n = static_cast<Eigen::Index>(pos.size());
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d(i, i) = d_min;
    for (Eigen::Index j = i + 1; j < n; ++j)
      d(i, j) = d(j, i) = clamped_dist(pos[static_cast<std::size_t>(i)],
                                       pos[static_cast<std::size_t>(j)], d_min);
  }
  return d;
}

Eigen::MatrixXd weighted_cost(const Eigen::MatrixXd& w,
                              const Eigen::MatrixXd& dist, double eps) {
  Eigen::MatrixXd x = eps * w.cwiseQuotient(dist);
  x.diagonal().setZero();
  return x;
}

Election rank_candidates(const Eigen::MatrixXd& x,
                         std::span<const int> candidates) {
  std::vector<int> ids(candidates.begin(), candidates.end());
  std::vector<double> scores(ids.size(), 0.0);
  for (std::size_t c = 0; c < ids.size(); ++c)
    for (const int other : ids)
      if (other != ids[c]) scores[c] += x(other, ids[c]);
  std::vector<std::size_t> idx(ids.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t p, std::size_t q) {
    if (scores[p] != scores[q]) return scores[p] > scores[q];
    return ids[p] < ids[q];
  });
  Election out;
  for (const std::size_t k : idx) {
    out.ranked.push_back(ids[k]);
    out.scores.push_back(scores[k]);
  }
  return out;
}

std::vector<int> ImportantSet::all() const {
  std::vector<int> v;
  for (const auto& per : elected_per_scbs)
    v.insert(v.end(), per.begin(), per.end());
  std::sort(v.begin(), v.end());
  return v;
}

bool ImportantSet::is_important(int ue) const {
  for (const auto& per : elected_per_scbs)
    for (const int i : per)
      if (i == ue) return true;
  return false;
}

ImportantSet elect_important_set(const Eigen::MatrixXd& x,
                                 const NetworkTopology& topo,
                                 std::span<const int> anchors, int per_scbs) {
  const int n_scbs = topo.n_scbs();
  ImportantSet set;
  set.ranked_per_scbs.resize(static_cast<std::size_t>(n_scbs));
  set.elected_per_scbs.resize(static_cast<std::size_t>(n_scbs));
  std::vector<char> taken(static_cast<std::size_t>(topo.n_ues()), 0);
  for (int n = 0; n < n_scbs; ++n) {
    std::vector<int> candidates;
    for (int m = 0; m < topo.n_ues(); ++m)
      if (anchors[static_cast<std::size_t>(m)] == n &&
          dist(topo.scbs_pos[static_cast<std::size_t>(n)],
               topo.ue_pos[static_cast<std::size_t>(m)]) <= topo.scbs_radius_m)
        candidates.push_back(m);
    const Election e = rank_candidates(x, candidates);
    set.ranked_per_scbs[static_cast<std::size_t>(n)] = e.ranked;
    auto& elected = set.elected_per_scbs[static_cast<std::size_t>(n)];
    for (const int ue : e.ranked) {
      if (static_cast<int>(elected.size()) >= per_scbs) break;
      if (taken[static_cast<std::size_t>(ue)]) continue;
      taken[static_cast<std::size_t>(ue)] = 1;
      elected.push_back(ue);
    }
  }
  return set;
}

bool d2d_link_exists(int m, int i, const SocialGraph& g,
                     const NetworkTopology& topo) {
  if (m == i) return false;
  return g.has_edge(m, i) &&
         dist(topo.ue_pos[static_cast<std::size_t>(m)],
              topo.ue_pos[static_cast<std::size_t>(i)]) <= topo.d2d_radius_m;
}

SocialMatrices build_social_matrices(const SocialGraph& g,
                                     const NetworkTopology& topo,
                                     const ScenarioConfig& cfg) {
  SocialMatrices sm;
  sm.alpha = cfg.alpha;
  sm.beta = cfg.beta;
  sm.epsilon = cfg.epsilon;
  sm.q = raw_similarity(g);
  sm.s = normalize_saw(sm.q);
  sm.a = edge_betweenness(g, cfg.betweenness_norm);
  sm.w = social_distance(sm.s, sm.a, cfg.alpha, cfg.beta);
  const Eigen::MatrixXd d = pairwise_distances(topo.ue_pos, topo.min_distance_m);
  sm.x = weighted_cost(sm.w, d, cfg.epsilon);
  return sm;
}

void write_matrix_csv(const Eigen::MatrixXd& m, std::ostream& out) {
  char buf[40];
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.9g", m(r, c));
      out << (c == 0 ? "" : ",") << buf;
    }
    out << "\n";
  }
}

}  // namespace scnsim
