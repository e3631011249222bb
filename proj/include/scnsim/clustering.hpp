#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "scnsim/topology.hpp"

namespace scnsim {

/// Coordination link indicator f between SCBS pairs: 1 when the pair is
/// within the neighborhood radius, 0 otherwise (and on the diagonal).
Eigen::MatrixXd scbs_link_mask(const NetworkTopology& topo, double upsilon_d);

/// Gaussian distance similarity with hard cutoff at upsilon_d. Zero diagonal.
Eigen::MatrixXd distance_similarity(const NetworkTopology& topo,
                                    double upsilon_d, double sigma_d);

/// Gaussian load dissimilarity: exp(+(rho1-rho2)^2 / (2 sigma_l^2)), so
/// unequal loads score higher. Computed for every pair; the link mask is
/// applied when building the joint affinity.
Eigen::MatrixXd load_dissimilarity(const Eigen::VectorXd& loads, double sigma_l);

/// Elementwise d^omega * l^(1-omega), zeroed where the link mask is 0.
Eigen::MatrixXd joint_affinity(const Eigen::MatrixXd& d,
                               const Eigen::MatrixXd& l, double omega,
                               const Eigen::MatrixXd& link_mask);

struct ClusterPartition {
  std::vector<int> cluster_of_scbs;        // SCBS id -> cluster id
  std::vector<std::vector<int>> clusters;  // disjoint non-empty cover
  std::vector<int> cluster_of_ue;          // filled by assign_ue_clusters
  std::vector<std::vector<int>> ue_members;
  int chosen_k = 0;          // eigengap selection outcome
  bool empty_gap_window = false;  // fell back to k_min

  int k() const { return static_cast<int>(clusters.size()); }
  /// Throws DomainError unless clusters are non-empty, disjoint and cover
  /// all SCBSs.
  void check_invariants() const;
};

/// Normalized-Laplacian spectral clustering with eigengap model selection.
/// Isolated SCBSs (zero affinity degree) become singleton clusters before
/// the eigensolve. Deterministic for a fixed seed.
ClusterPartition spectral_cluster(const Eigen::MatrixXd& y, int k_min,
                                  int k_max, std::uint64_t seed);

/// Attaches every UE to the cluster of its anchor SCBS.
void assign_ue_clusters(ClusterPartition& part, std::span<const int> anchors);

}  // namespace scnsim
