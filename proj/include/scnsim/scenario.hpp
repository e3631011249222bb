#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scnsim/config.hpp"
#include "scnsim/matching.hpp"
#include "scnsim/social.hpp"
#include "scnsim/topology.hpp"
#include "scnsim/wireless.hpp"

namespace scnsim {

/// One generated deployment: geometry, channel, social graph and the
/// max-RSSI anchor of every UE.
struct Scenario {
  NetworkTopology topology;
  ChannelModel channel;
  SocialGraph social = SocialGraph(1);
  std::vector<int> anchors;
};

/// SCBSs uniform over the area with a minimum inter-site distance
/// (rejection sampling), UEs per cell, social graph from the configured
/// model. Same seed, same scenario.
Scenario generate_scenario(const ScenarioConfig& cfg, std::uint64_t seed);

/// Association plus the per-UE achieved rates of one approach on one run.
struct ApproachOutcome {
  Association assoc;
  std::vector<double> ue_rates;
  double sum_rate = 0.0;
  double welfare = 0.0;
  int iterations = 1;
  long proposals = 0;
  long polish_evals = 0;
  long accepted = 0;
  int cluster_count = 0;
  double mean_cluster_size = 0.0;
  std::vector<int> same_content_sizes;  // |M_i| + 1 per active anchor
  long fallback_assignments = 0;        // random baseline: no in-range SN
  ApprovedSwapStats approved;
};

/// Every UE on its strongest SCBS, no D2D, whole frame on the cellular slot.
ApproachOutcome baseline_max_rssi(const Scenario& sc, const ScenarioConfig& cfg);

/// Anchor UEs drawn uniformly per SCBS; every other UE uniformly on some
/// in-range SN (coverage-radius SCBS or D2D-radius anchor), nearest SCBS as
/// fallback.
ApproachOutcome baseline_random(const Scenario& sc, const ScenarioConfig& cfg,
                                Rng& rng);

/// Hand-written tiny instance for the exhaustive oracle CLI.
struct OracleInstance {
  NetworkTopology topology;
  ChannelModel channel;
  SocialGraph social = SocialGraph(1);
  std::vector<int> important;          // anchor UE ids
  std::optional<Association> matching; // optional explicit association
};

OracleInstance load_oracle_instance(const std::string& path);

}  // namespace scnsim
