#include "scnsim/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "scnsim/errors.hpp"

namespace scnsim {

double percentile(std::vector<double> samples, double q) {
  if (samples.empty()) throw DomainError("percentile: no samples");
  if (q < 0.0 || q > 100.0) throw DomainError("percentile: q out of [0,100]");
  std::sort(samples.begin(), samples.end());
  const double pos = q / 100.0 * static_cast<double>(samples.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= samples.size()) return samples.back();
  const double frac = pos - static_cast<double>(lo);
  return samples[lo] * (1.0 - frac) + samples[lo + 1] * frac;
}

MetricsReport compute_metrics(const std::string& approach,
                              std::vector<RunRecord> runs) {
  if (runs.empty()) throw DomainError("compute_metrics: no runs");
  MetricsReport r;
  r.approach = approach;
  r.runs = static_cast<int>(runs.size());
  for (const RunRecord& rec : runs) {
    r.avg_sum_rate += rec.sum_rate_bps;
    r.avg_iterations += rec.iterations;
    r.avg_clusters += rec.cluster_count;
    r.avg_cluster_size += rec.mean_cluster_size;
    r.avg_same_content += rec.mean_same_content;
    r.total_proposals += rec.proposals;
    r.xi_max = std::max(r.xi_max, rec.xi_max);
    r.approved_swaps += rec.approved_swaps;
    r.approved_swap_violations += rec.approved_swap_violations;
    r.ue_rate_samples.insert(r.ue_rate_samples.end(), rec.ue_rates.begin(),
                             rec.ue_rates.end());
  }
  const double n = static_cast<double>(runs.size());
  r.avg_sum_rate /= n;
  r.avg_iterations /= n;
  r.avg_clusters /= n;
  r.avg_cluster_size /= n;
  r.avg_same_content /= n;
  r.p5 = percentile(r.ue_rate_samples, 5.0);
  r.p50 = percentile(r.ue_rate_samples, 50.0);
  r.p95 = percentile(r.ue_rate_samples, 95.0);
  r.per_run = std::move(runs);
  return r;
}

double overhead_bound(int m_c, int phi_s, int phi_c) {
  if (phi_s < 1) throw DomainError("overhead_bound: phi_s must be >= 1");
  if (m_c <= phi_c) {
    return static_cast<double>(m_c) * (static_cast<double>(m_c) + phi_s) /
           (2.0 * static_cast<double>(phi_s));
  }
  double xi = 0.0;
  for (int t = 1; t <= phi_c; ++t)
    xi += static_cast<double>(m_c) - static_cast<double>(phi_s) * t;
  return xi;
}

}  // namespace scnsim
