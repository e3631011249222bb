#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "scnsim/clustering.hpp"
#include "scnsim/rng.hpp"
#include "scnsim/social.hpp"
#include "scnsim/wireless.hpp"

namespace scnsim {

/// One cluster of the matching game: players and their feasible serving
/// nodes. Anchor UEs are pinned to their serving SCBS; regular UEs may sit
/// on any cluster SCBS or any cluster anchor they have a D2D link to.
struct ClusterInstance {
  int cluster_id = 0;
  int n_scbs_total = 0;
  std::vector<int> scbs;     // N_c
  std::vector<int> ues;      // M_c, ascending (includes anchor UEs)
  std::vector<int> anchors;  // elected anchor UEs inside this cluster
  std::vector<int> sn_handles;                // P_c as SN handles
  std::vector<std::vector<int>> candidate_sns;  // aligned with ues
  std::vector<char> is_anchor;                  // aligned with ues
  std::vector<int> movable;                     // non-anchor UEs

  int ue_local(int ue) const;  // -1 when outside the cluster
  int sn_local(int sn) const;
  bool candidate_allowed(int ue, int sn) const;

  static ClusterInstance build(int cluster_id, const ClusterPartition& part,
                               const SocialGraph& graph,
                               const NetworkTopology& topo,
                               const ImportantSet& important,
                               std::span<const int> anchors_rssi);

 private:
  std::vector<int> ue_local_;  // global UE id -> index into ues
  std::vector<int> sn_local_;  // SN handle -> index into sn_handles
};

/// Every UE (anchor UEs included) on its max-RSSI SCBS.
Association initial_association(std::span<const int> anchors_rssi);

/// Throws DomainError when a cluster UE sits on a non-candidate SN.
void check_matching_valid(const ClusterInstance& c, const Association& assoc);

/// Utilities of one cluster under one association snapshot.
struct ClusterEval {
  double welfare = 0.0;
  std::vector<double> ue_utility;  // aligned with instance.ues
  std::vector<double> sn_utility;  // aligned with instance.sn_handles
};

/// Binds the rate model and social matrices; evaluates cluster utilities.
/// Pure with respect to the association (safe to share read-only).
class MatchingEvaluator {
 public:
  MatchingEvaluator(const RateModel& model, const SocialMatrices& social,
                    const SocialGraph& graph);

  ClusterEval evaluate(const ClusterInstance& c, const Association& assoc) const;
  double welfare(const ClusterInstance& c, const Association& assoc) const;

  /// Utility of one UE under the association (any current role).
  double ue_utility(int ue, const Association& assoc) const;

  /// Sum of every UE's utility network-wide.
  double total_welfare(const Association& assoc) const;

  const RateModel& rate_model() const { return *model_; }
  const SocialGraph& graph() const { return *graph_; }
  const SocialMatrices& social() const { return *social_; }

 private:
  double ue_utility_with_state(int ue, const ServiceState& st) const;
  const RateModel* model_;
  const SocialMatrices* social_;
  const SocialGraph* graph_;
};

/// Strict preference of a UE between two serving nodes, utilities evaluated
/// on the two hypothetical associations with everything else held fixed.
bool prefers(const MatchingEvaluator& ev, const ClusterInstance& c, int ue,
             int sn_a, int sn_b, const Association& base);

/// eta^{m1<->m2}: the two UEs exchange serving nodes; everything else is
/// untouched. Same-SN pairs come back unchanged.
Association apply_swap(const Association& assoc, int m1, int m2);

enum class SwapReject {
  None,
  SameUe,
  AnchorImmovable,
  OutsideCluster,
  TargetInfeasible,
};
SwapReject swap_feasibility(const ClusterInstance& c, const Association& assoc,
                            int m1, int m2);

/// Probability of adopting a candidate configuration. The welfare delta is
/// normalized by |scale| (the running best welfare) before the logistic.
double accept_probability(double gamma_old, double gamma_new, double theta,
                          double scale, PtSign sign);

/// Definition of an approved swap: all four affected players (both UEs and
/// both serving nodes) weakly improve and at least one strictly improves.
bool swap_approved(const ClusterInstance& c, const ClusterEval& before,
                   const ClusterEval& after, int m1, int m2, int sn1, int sn2);

struct AnnealSchedule {
  int count_max = 200;
  bool allow_moves = true;
  PtSign pt_sign = PtSign::Prose;
};

struct TraceRow {
  int run = 0;
  int t = 0;
  int cluster = 0;
  int count = 0;
  double gamma_current = 0.0;
  double gamma_best = 0.0;
  int accepted = 0;
  long proposal_count = 0;
};

struct ApprovedSwapStats {
  long accepted = 0;    // accepted swaps meeting the four-player approval test
  long violations = 0;  // approved swaps that failed to raise the welfare
};

struct ClusterRunResult {
  Association best;        // full association with this cluster's best overlay
  double gamma_best = 0.0;
  long proposals = 0;      // annealing proposals evaluated
  long polish_evals = 0;   // greedy-phase evaluations
  long accepted = 0;
  bool best_changed = false;
  ApprovedSwapStats approved;
  std::vector<TraceRow> trace;
};

/// One annealing pass (count = 1..count_max, temperature 1 - count/count_max)
/// followed by a greedy improvement phase that runs until no feasible swap or
/// move raises the cluster welfare. Returns the best-welfare association
/// encountered. Deterministic for a fixed RNG state.
ClusterRunResult run_cluster_matching(const MatchingEvaluator& ev,
                                      const ClusterInstance& c,
                                      const Association& initial,
                                      const AnnealSchedule& schedule, Rng& rng,
                                      int t_index);

struct StabilityResult {
  bool stable = true;
  int witness_m1 = -1;
  int witness_m2 = -1;
};

/// Exhaustive scan over feasible UE pair swaps; unstable when some swap is
/// approved by all four affected players.
StabilityResult is_pairwise_stable(const MatchingEvaluator& ev,
                                   const ClusterInstance& c,
                                   const Association& assoc);

struct OracleResult {
  Association best;
  double welfare = 0.0;
  long evaluated = 0;
};

/// Exhaustive welfare maximum over all feasible cluster assignments.
/// OracleSizeError when |M_c| > 8 or |P_c| > 4.
OracleResult brute_force_optimum(const MatchingEvaluator& ev,
                                 const ClusterInstance& c,
                                 const Association& context);

/// Sum of per-cluster welfare over every cluster.
double network_welfare(const MatchingEvaluator& ev,
                       std::span<const ClusterInstance> clusters,
                       const Association& assoc);

}  // namespace scnsim
