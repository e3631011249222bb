#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace scnsim {

/// Everything recorded about one (run, approach) execution.
struct RunRecord {
  int run = 0;
  std::uint64_t seed = 0;
  double sum_rate_bps = 0.0;
  double welfare = 0.0;
  int iterations = 1;
  long proposals = 0;
  long polish_evals = 0;
  long accepted = 0;
  int cluster_count = 0;
  double mean_cluster_size = 0.0;
  double mean_same_content = 0.0;  // mean group size |M_i|+1, 0 without D2D
  double xi_max = 0.0;             // worst-case messaging bound, diagnostic
  long approved_swaps = 0;         // accepted swaps passing the approval test
  long approved_swap_violations = 0;
  long fallback_assignments = 0;
  std::vector<double> ue_rates;
};

struct MetricsReport {
  std::string approach;
  int runs = 0;
  double avg_sum_rate = 0.0;
  double p5 = 0.0, p50 = 0.0, p95 = 0.0;
  double avg_iterations = 0.0;
  double avg_clusters = 0.0;
  double avg_cluster_size = 0.0;
  double avg_same_content = 0.0;
  long total_proposals = 0;
  double xi_max = 0.0;  // max over runs
  long approved_swaps = 0;
  long approved_swap_violations = 0;
  std::vector<double> ue_rate_samples;  // pooled over runs, run-major order
  std::vector<RunRecord> per_run;
};

/// Linear interpolation between closest ranks on an unsorted sample set.
/// q in [0, 100]. DomainError when samples are empty.
double percentile(std::vector<double> samples, double q);

/// Aggregates per-run records; DomainError when empty.
MetricsReport compute_metrics(const std::string& approach,
                              std::vector<RunRecord> runs);

/// Worst-case number of association proposal messages per cluster given
/// M_c UEs, phi_s satisfied UEs per round, phi_c total matched capacity.
/// DomainError when phi_s < 1.
double overhead_bound(int m_c, int phi_s, int phi_c);

}  // namespace scnsim
