#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "scnsim/matching.hpp"
#include "scnsim/metrics.hpp"
#include "scnsim/scenario.hpp"

namespace scnsim {

/// One run's scenario taken through social computation, anchor election and
/// clustering. Holds the cross-referencing objects at stable addresses.
class Pipeline {
 public:
  Pipeline(const ScenarioConfig& cfg, std::uint64_t seed);
  Pipeline(const Pipeline&) = delete;
  Pipeline& operator=(const Pipeline&) = delete;

  const Scenario& scenario() const { return sc_; }
  const RateModel& model() const { return model_; }
  const SocialMatrices& matrices() const { return matrices_; }
  const ImportantSet& important() const { return important_; }
  const ClusterPartition& partition() const { return partition_; }
  const std::vector<ClusterInstance>& instances() const { return instances_; }
  const MatchingEvaluator& evaluator() const { return evaluator_; }
  Association initial() const;

  /// Phases III-V: per-cluster swap matching against a frozen snapshot of the
  /// other clusters, resynchronized every outer step, until no cluster
  /// improves or t_max is reached.
  ApproachOutcome run_matching(std::uint64_t matching_seed,
                               std::vector<TraceRow>* trace_sink) const;

 private:
  ScenarioConfig cfg_;
  Scenario sc_;
  RateModel model_;
  SocialMatrices matrices_;
  ImportantSet important_;
  ClusterPartition partition_;
  std::vector<ClusterInstance> instances_;
  MatchingEvaluator evaluator_;
};

struct PartitionRecord {
  int run = 0;
  std::vector<std::vector<int>> clusters;
  std::vector<int> cluster_of_ue;
};

struct ExperimentResult {
  ScenarioConfig config;
  std::vector<MetricsReport> reports;  // proposed, max-rssi, random (selected)
  std::vector<TraceRow> trace;         // proposed-approach traces, all runs
  std::vector<PartitionRecord> partitions;
};

/// Full Monte-Carlo experiment: `runs` independent seeded scenarios, the
/// selected approaches on each, aggregated metrics.
ExperimentResult run_experiment(const ScenarioConfig& cfg);

}  // namespace scnsim
