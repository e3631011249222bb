#include "scnsim/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "scnsim/errors.hpp"
#include "scnsim/kernels.hpp"
#include "scnsim/rng.hpp"

namespace scnsim {

Eigen::MatrixXd scbs_link_mask(const NetworkTopology& topo, double upsilon_d) {
  const int n = topo.n_scbs();
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (dist(topo.scbs_pos[static_cast<std::size_t>(i)],
               topo.scbs_pos[static_cast<std::size_t>(j)]) <= upsilon_d)
        f(i, j) = f(j, i) = 1.0;
  return f;
}

Eigen::MatrixXd distance_similarity(const NetworkTopology& topo,
                                    double upsilon_d, double sigma_d) {
  if (sigma_d <= 0) throw DomainError("distance_similarity: sigma_d must be > 0");
  const int n = topo.n_scbs();
  // gather in-range squared distances, exponentiate in one batch
  std::vector<double> sq;
  std::vector<std::pair<int, int>> at;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d2 = sq_dist(topo.scbs_pos[static_cast<std::size_t>(i)],
                                topo.scbs_pos[static_cast<std::size_t>(j)]);
      if (std::sqrt(d2) <= upsilon_d) {
        sq.push_back(d2);
        at.emplace_back(i, j);
      }
    }
  }
  std::vector<double> val(sq.size());
  kernels::exp_scaled_batch(sq.data(), val.data(), sq.size(),
                            -1.0 / (2.0 * sigma_d * sigma_d));
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < at.size(); ++k)
    d(at[k].first, at[k].second) = d(at[k].second, at[k].first) = val[k];
  return d;
}

Eigen::MatrixXd load_dissimilarity(const Eigen::VectorXd& loads, double sigma_l) {
  if (sigma_l <= 0) throw DomainError("load_dissimilarity: sigma_l must be > 0");
  const Eigen::Index n = loads.size();
  std::vector<double> sq;
  sq.reserve(static_cast<std::size_t>(n * n));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double diff = loads[i] - loads[j];
      sq.push_back(diff * diff);
    }
  std::vector<double> val(sq.size());
  kernels::exp_scaled_batch(sq.data(), val.data(), sq.size(),
                            +1.0 / (2.0 * sigma_l * sigma_l));
  Eigen::MatrixXd l(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      l(i, j) = val[static_cast<std::size_t>(i * n + j)];
  l.diagonal().setOnes();
  return l;
}

Eigen::MatrixXd joint_affinity(const Eigen::MatrixXd& d,
                               const Eigen::MatrixXd& l, double omega,
                               const Eigen::MatrixXd& link_mask) {
  if (omega < 0.0 || omega > 1.0)
    throw DomainError("joint_affinity: omega must lie in [0,1]");
  const Eigen::Index n = d.rows();
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j || link_mask(i, j) == 0.0) continue;
      y(i, j) = std::pow(d(i, j), omega) * std::pow(l(i, j), 1.0 - omega);
    }
  }
  return y;
}

void ClusterPartition::check_invariants() const {
  const int n = static_cast<int>(cluster_of_scbs.size());
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    if (clusters[c].empty()) throw DomainError("partition: empty cluster");
    for (const int s : clusters[c]) {
      if (s < 0 || s >= n) throw DomainError("partition: SCBS id out of range");
      if (seen[static_cast<std::size_t>(s)])
        throw DomainError("partition: clusters overlap");
      seen[static_cast<std::size_t>(s)] = 1;
      if (cluster_of_scbs[static_cast<std::size_t>(s)] != static_cast<int>(c))
        throw DomainError("partition: assignment map inconsistent");
    }
  }
  for (const char s : seen)
    if (!s) throw DomainError("partition: SCBS not covered");
}

namespace {

struct KmeansResult {
  std::vector<int> label;
  double inertia = std::numeric_limits<double>::infinity();
};

KmeansResult kmeans(const Eigen::MatrixXd& pts, int k, Rng& rng, int restarts,
                    int iters) {
  const int n = static_cast<int>(pts.rows());
  KmeansResult best;
  for (int restart = 0; restart < restarts; ++restart) {
    // k-means++ seeding
    Eigen::MatrixXd centers(k, pts.cols());
    std::vector<double> d2(static_cast<std::size_t>(n),
                           std::numeric_limits<double>::infinity());
    const int first = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(n)));
    centers.row(0) = pts.row(first);
    for (int c = 1; c < k; ++c) {
      double total = 0.0;
      for (int i = 0; i < n; ++i) {
        const double d = (pts.row(i) - centers.row(c - 1)).squaredNorm();
        d2[static_cast<std::size_t>(i)] =
            std::min(d2[static_cast<std::size_t>(i)], d);
        total += d2[static_cast<std::size_t>(i)];
      }
      int pick = 0;
      if (total > 0.0) {
        const double target = rng.u01() * total;
        double acc = 0.0;
        pick = n - 1;
        for (int i = 0; i < n; ++i) {
          acc += d2[static_cast<std::size_t>(i)];
          if (acc >= target) {
            pick = i;
            break;
          }
        }
      } else {
        pick = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(n)));
      }
      centers.row(c) = pts.row(pick);
    }
    std::vector<int> label(static_cast<std::size_t>(n), 0);
    for (int it = 0; it < iters; ++it) {
      bool changed = false;
      for (int i = 0; i < n; ++i) {
        int bestc = 0;
        double bestd = (pts.row(i) - centers.row(0)).squaredNorm();
        for (int c = 1; c < k; ++c) {
          const double d = (pts.row(i) - centers.row(c)).squaredNorm();
          if (d < bestd) {
            bestd = d;
            bestc = c;
          }
        }
        if (label[static_cast<std::size_t>(i)] != bestc) {
          label[static_cast<std::size_t>(i)] = bestc;
          changed = true;
        }
      }
      centers.setZero();
      std::vector<int> count(static_cast<std::size_t>(k), 0);
      for (int i = 0; i < n; ++i) {
        centers.row(label[static_cast<std::size_t>(i)]) += pts.row(i);
        ++count[static_cast<std::size_t>(label[static_cast<std::size_t>(i)])];
      }
      for (int c = 0; c < k; ++c) {
        if (count[static_cast<std::size_t>(c)] > 0) {
          centers.row(c) /= static_cast<double>(count[static_cast<std::size_t>(c)]);
        } else {
          // adopt the point farthest from its centroid
          int far = 0;
          double fard = -1.0;
          for (int i = 0; i < n; ++i) {
            const double d =
                (pts.row(i) - centers.row(label[static_cast<std::size_t>(i)]))
                    .squaredNorm();
            if (d > fard) {
              fard = d;
              far = i;
            }
          }
          centers.row(c) = pts.row(far);
          label[static_cast<std::size_t>(far)] = c;
          changed = true;
        }
      }
      if (!changed) break;
    }
    double inertia = 0.0;
    for (int i = 0; i < n; ++i)
      inertia +=
          (pts.row(i) - centers.row(label[static_cast<std::size_t>(i)])).squaredNorm();
    if (inertia < best.inertia) {
      best.inertia = inertia;
      best.label = label;
    }
  }
  return best;
}

// Canonical cluster numbering: order clusters by their smallest member.
ClusterPartition finalize(int n, const std::vector<std::vector<int>>& groups,
                          int chosen_k, bool empty_window) {
  std::vector<std::vector<int>> sorted = groups;
  for (auto& g : sorted) std::sort(g.begin(), g.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  ClusterPartition part;
  part.clusters = std::move(sorted);
  part.cluster_of_scbs.assign(static_cast<std::size_t>(n), -1);
  for (std::size_t c = 0; c < part.clusters.size(); ++c)
    for (const int s : part.clusters[c])
      part.cluster_of_scbs[static_cast<std::size_t>(s)] = static_cast<int>(c);
  part.chosen_k = chosen_k;
  part.empty_gap_window = empty_window;
  part.check_invariants();
  return part;
}

}  // namespace

ClusterPartition spectral_cluster(const Eigen::MatrixXd& y, int k_min,
                                  int k_max, std::uint64_t seed) {
  const int n = static_cast<int>(y.rows());
  if (n < 1) throw DomainError("spectral_cluster: empty affinity matrix");
  if (k_min < 1 || k_max < k_min)
    throw DomainError("spectral_cluster: need 1 <= k_min <= k_max");

  std::vector<std::vector<int>> groups;
  if (n == 1 || n < k_min) {
    std::vector<int> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 0);
    groups.push_back(all);
    return finalize(n, groups, 1, false);
  }

  // peel isolated SCBSs: H^(-1/2) is singular on zero-degree rows
  const Eigen::VectorXd degree = y.rowwise().sum();
  std::vector<int> active;
  for (int i = 0; i < n; ++i) {
    if (degree[i] > 0.0) active.push_back(i);
    else groups.push_back({i});
  }

  const int r = static_cast<int>(active.size());
  if (r == 0) return finalize(n, groups, 0, false);
  if (r == 1) {
    groups.push_back({active[0]});
    return finalize(n, groups, 1, false);
  }

  Eigen::MatrixXd yr(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) yr(i, j) = y(active[static_cast<std::size_t>(i)],
                                             active[static_cast<std::size_t>(j)]);
  Eigen::VectorXd dr = yr.rowwise().sum();
  Eigen::VectorXd dinv_sqrt(r);
  for (int i = 0; i < r; ++i) dinv_sqrt[i] = 1.0 / std::sqrt(dr[i]);
  // Z_norm = I - H^(-1/2) Y H^(-1/2)
  Eigen::MatrixXd znorm =
      Eigen::MatrixXd::Identity(r, r) -
      dinv_sqrt.asDiagonal() * yr * dinv_sqrt.asDiagonal();
  znorm = ((znorm + znorm.transpose()) / 2.0).eval();  // symmetry guard

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(znorm);
  if (eig.info() != Eigen::Success)
    throw DomainError("spectral_cluster: eigensolver failed");
  const Eigen::VectorXd& lambda = eig.eigenvalues();  // ascending

  // eigengap over the window [k_min, k_max-1] (1-indexed eigenvalues).
  // k_min/k_max count total clusters, so peeled singletons shift the window.
  const int peeled = static_cast<int>(groups.size());
  const int lo = std::max(1, k_min - peeled);
  const int hi = std::min(k_max - peeled - 1, r - 1);
  int k = std::min(lo, r);
  bool empty_window = true;
  double best_gap = -1.0;
  for (int i = lo; i <= hi; ++i) {
    empty_window = false;
    const double gap = lambda[i] - lambda[i - 1];
    if (gap > best_gap) {
      best_gap = gap;
      k = i;
    }
  }

  if (k >= r) {
    for (const int s : active) groups.push_back({s});
    return finalize(n, groups, k, empty_window);
  }
  if (k <= 1) {
    groups.push_back(active);
    return finalize(n, groups, k, empty_window);
  }

  Eigen::MatrixXd embed = eig.eigenvectors().leftCols(k);
  for (int i = 0; i < r; ++i) {
    const double norm = embed.row(i).norm();
    if (norm > 1e-300) embed.row(i) /= norm;
  }
  Rng rng(seed);
  const KmeansResult km = kmeans(embed, k, rng, /*restarts=*/20, /*iters=*/100);
  std::vector<std::vector<int>> buckets(static_cast<std::size_t>(k));
  for (int i = 0; i < r; ++i)
    buckets[static_cast<std::size_t>(km.label[static_cast<std::size_t>(i)])]
        .push_back(active[static_cast<std::size_t>(i)]);
  for (auto& b : buckets)
    if (!b.empty()) groups.push_back(std::move(b));
  return finalize(n, groups, k, empty_window);
}

void assign_ue_clusters(ClusterPartition& part, std::span<const int> anchors) {
  part.cluster_of_ue.resize(anchors.size());
  part.ue_members.assign(part.clusters.size(), {});
  for (std::size_t m = 0; m < anchors.size(); ++m) {
    const int c = part.cluster_of_scbs[static_cast<std::size_t>(anchors[m])];
    part.cluster_of_ue[m] = c;
    part.ue_members[static_cast<std::size_t>(c)].push_back(static_cast<int>(m));
  }
}

}  // namespace scnsim
