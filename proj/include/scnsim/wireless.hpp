#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "scnsim/topology.hpp"

namespace scnsim {

// Serving-node handles. 0..N-1 address SCBSs; N+u addresses UE u acting as
// a D2D anchor. -1 marks an unassociated UE (only during construction).
constexpr int kUnassigned = -1;

/// Network-wide association vector: UE id -> SN handle.
using Association = std::vector<int>;
inline int sn_from_scbs(int n) { return n; }
inline int sn_from_anchor_ue(int ue, int n_scbs) { return n_scbs + ue; }
inline bool sn_is_scbs(int sn, int n_scbs) { return sn >= 0 && sn < n_scbs; }
inline int sn_anchor_ue(int sn, int n_scbs) { return sn - n_scbs; }

/// Serving relations derived from a UE->SN vector: exactly the matching
/// state the rate formulas depend on.
struct ServiceState {
  std::vector<std::vector<int>> served_by_scbs;  // L_n: cellular UEs + anchors
  std::vector<std::vector<int>> members_of;      // M_i indexed by anchor UE id
  std::vector<char> anchor_active;               // |M_i| >= 1
  std::vector<int> sn_of_ue;

  static ServiceState build(std::span<const int> sn_of_ue, int n_scbs);
};

/// Channel gain tables bound to one topology, plus the frame-split Shannon
/// rate formulas evaluated against a ServiceState.
class RateModel {
 public:
  RateModel(const NetworkTopology& topo, const ChannelModel& chan,
            bool power_split = false);

  // Static link quantities.
  double rssi_dbm(int scbs, int ue) const;
  int max_rssi_anchor(int ue) const;  // ties broken by lowest SCBS id
  std::vector<int> anchors() const;
  double scbs_ue_gain(int n, int m) const { return scbs_ue_gain_(n, m); }
  double ue_ue_gain(int i, int m) const { return ue_ue_gain_(i, m); }

  // Matching-dependent rates, bits/s.
  double cellular_rate(int n, int ue, const ServiceState& st) const;
  /// Same link with the interference sum removed (load reference rate).
  double cellular_rate_max(int n, int ue, const ServiceState& st) const;
  /// min over members of the anchor's broadcast link; DomainError when the
  /// anchor has no members.
  double broadcast_rate(int anchor_ue, const ServiceState& st) const;
  /// min(first hop SCBS->anchor, anchor broadcast). Preconditions checked.
  double d2d_end_to_end_rate(int n, int anchor_ue, int member,
                             const ServiceState& st) const;
  /// Rate the UE actually receives under this association.
  double per_ue_rate(int ue, const ServiceState& st) const;

  /// Normalized SCBS load, clamped to [0,1].
  double scbs_load(int n, const ServiceState& st) const;
  /// Arithmetic mean load of a cluster's SCBSs; DomainError when empty.
  double cluster_load(std::span<const int> scbs_ids, const ServiceState& st) const;

  const NetworkTopology& topology() const { return *topo_; }
  int n_scbs() const { return n_scbs_; }
  int n_ues() const { return n_ues_; }
  double tau0() const { return tau0_; }
  /// Baselines that use a single time slot set this to 1.
  void set_tau0(double tau0) { tau0_ = tau0; }

 private:
  double cellular_interference_mw(int n, int ue, const ServiceState& st) const;
  double d2d_interference_mw(int anchor_ue, int member,
                             const ServiceState& st) const;

  const NetworkTopology* topo_;
  int n_scbs_ = 0;
  int n_ues_ = 0;
  bool power_split_ = false;
  double tau0_ = 0.84;
  double bandwidth_ = 0.0;
  double noise_mw_per_hz_ = 0.0;
  Eigen::VectorXd scbs_power_mw_;
  Eigen::VectorXd ue_power_mw_;
  Eigen::MatrixXd scbs_ue_gain_;       // N x M (column-contiguous per UE)
  Eigen::MatrixXd ue_ue_gain_;         // M x M, D2D coefficients
  Eigen::MatrixXd scbs_ue_pl_db_;      // cellular path loss, for RSSI
  Eigen::VectorXd total_scbs_rx_mw_;   // per UE: sum_n p_n * g_{n,m}
};

/// Full per-link rate matrices under one association; a debugging/export
/// artifact.
struct LinkRateTable {
  Eigen::MatrixXd rate_scbs_ue;        // N x M; entry for the serving SCBS
  Eigen::VectorXd rate_broadcast;      // per anchor UE (0 when inactive)
  Eigen::MatrixXd rate_d2d_end_to_end; // N x M; entry for actual members

  static LinkRateTable build(const RateModel& model, const ServiceState& st);
};

}  // namespace scnsim
