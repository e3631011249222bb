#include "scnsim/experiment.hpp"

#include <algorithm>
#include <cmath>

#include "scnsim/errors.hpp"
#include "scnsim/kernels.hpp"

namespace scnsim {

namespace {
constexpr std::uint64_t kMatchingTag = 0x6d617463;
constexpr std::uint64_t kRandomTag = 0x726e6462;

std::vector<double> anchor_loads(const RateModel& model,
                                 std::span<const int> anchors) {
  Association assoc(anchors.size());
  for (std::size_t m = 0; m < anchors.size(); ++m)
    assoc[m] = sn_from_scbs(anchors[m]);
  const ServiceState st = ServiceState::build(assoc, model.n_scbs());
  std::vector<double> loads(static_cast<std::size_t>(model.n_scbs()));
  for (int n = 0; n < model.n_scbs(); ++n)
    loads[static_cast<std::size_t>(n)] = model.scbs_load(n, st);
  return loads;
}

}  // namespace

Pipeline::Pipeline(const ScenarioConfig& cfg, std::uint64_t seed)
    : cfg_(cfg),
      sc_(generate_scenario(cfg, seed)),
      model_(sc_.topology, sc_.channel, cfg.power_split),
      matrices_(build_social_matrices(sc_.social, sc_.topology, cfg)),
      important_(elect_important_set(matrices_.x, sc_.topology, sc_.anchors,
                                     cfg.important_per_scbs)),
      partition_([&] {
        // Cluster loads come from the anchor association (the state the
        // network is in before any matching happens).
        const std::vector<double> loads = anchor_loads(model_, sc_.anchors);
        Eigen::VectorXd rho =
            Eigen::Map<const Eigen::VectorXd>(loads.data(),
                                              static_cast<Eigen::Index>(loads.size()));
        const Eigen::MatrixXd mask = scbs_link_mask(sc_.topology, cfg.upsilon_d_m);
        const Eigen::MatrixXd d =
            distance_similarity(sc_.topology, cfg.upsilon_d_m, cfg.sigma_d);
        const Eigen::MatrixXd l = load_dissimilarity(rho, cfg.sigma_l);
        const Eigen::MatrixXd y = joint_affinity(d, l, cfg.omega, mask);
        ClusterPartition part = spectral_cluster(
            y, cfg.k_min, cfg.k_max_effective(), derive_seed(seed, 0x636c7573));
        assign_ue_clusters(part, sc_.anchors);
        return part;
      }()),
      instances_([&] {
        std::vector<ClusterInstance> v;
        for (int c = 0; c < partition_.k(); ++c)
          v.push_back(ClusterInstance::build(c, partition_, sc_.social,
                                             sc_.topology, important_,
                                             sc_.anchors));
        return v;
      }()),
      evaluator_(model_, matrices_, sc_.social) {}

Association Pipeline::initial() const {
  return initial_association(sc_.anchors);
}

ApproachOutcome Pipeline::run_matching(std::uint64_t matching_seed,
                                       std::vector<TraceRow>* trace_sink) const {
  ApproachOutcome out;
  Association assoc = initial();
  AnnealSchedule schedule;
  schedule.count_max = cfg_.count_max;
  schedule.allow_moves = cfg_.allow_moves;
  schedule.pt_sign = cfg_.pt_sign;

  int t_used = 0;
  for (int t = 1; t <= cfg_.t_max; ++t) {
    t_used = t;
    const Association snapshot = assoc;
    bool improved = false;
    for (const ClusterInstance& c : instances_) {
      Rng crng(derive_seed(matching_seed,
                           static_cast<std::uint64_t>(t) * 1000003ULL +
                               static_cast<std::uint64_t>(c.cluster_id)));
      ClusterRunResult res =
          run_cluster_matching(evaluator_, c, snapshot, schedule, crng, t);
      for (const int ue : c.ues)
        assoc[static_cast<std::size_t>(ue)] =
            res.best[static_cast<std::size_t>(ue)];
      improved = improved || res.best_changed;
      out.proposals += res.proposals;
      out.polish_evals += res.polish_evals;
      out.accepted += res.accepted;
      out.approved.accepted += res.approved.accepted;
      out.approved.violations += res.approved.violations;
      if (trace_sink)
        trace_sink->insert(trace_sink->end(), res.trace.begin(), res.trace.end());
    }
    if (!improved) break;
  }
  out.iterations = t_used;

  out.assoc = assoc;
  const ServiceState st = ServiceState::build(assoc, sc_.topology.n_scbs());
  out.ue_rates.resize(static_cast<std::size_t>(sc_.topology.n_ues()));
  for (int ue = 0; ue < sc_.topology.n_ues(); ++ue)
    out.ue_rates[static_cast<std::size_t>(ue)] = model_.per_ue_rate(ue, st);
  out.sum_rate = kernels::reduce_sum(out.ue_rates.data(), out.ue_rates.size());
  out.welfare = 0.0;
  for (const ClusterInstance& c : instances_)
    out.welfare += evaluator_.welfare(c, assoc);
  out.cluster_count = partition_.k();
  double size_sum = 0.0;
  for (const auto& cl : partition_.clusters) size_sum += static_cast<double>(cl.size());
  out.mean_cluster_size = size_sum / static_cast<double>(partition_.k());
  for (int ue = 0; ue < sc_.topology.n_ues(); ++ue)
    if (st.anchor_active[static_cast<std::size_t>(ue)])
      out.same_content_sizes.push_back(
          static_cast<int>(st.members_of[static_cast<std::size_t>(ue)].size()) + 1);
  return out;
}

namespace {

RunRecord to_record(int run, std::uint64_t seed, const ApproachOutcome& o) {
  RunRecord r;
  r.run = run;
  r.seed = seed;
  r.sum_rate_bps = o.sum_rate;
  r.welfare = o.welfare;
  r.iterations = o.iterations;
  r.proposals = o.proposals;
  r.polish_evals = o.polish_evals;
  r.accepted = o.accepted;
  r.cluster_count = o.cluster_count;
  r.mean_cluster_size = o.mean_cluster_size;
  if (!o.same_content_sizes.empty()) {
    double s = 0.0;
    for (const int v : o.same_content_sizes) s += v;
    r.mean_same_content = s / static_cast<double>(o.same_content_sizes.size());
  }
  r.approved_swaps = o.approved.accepted;
  r.approved_swap_violations = o.approved.violations;
  r.fallback_assignments = o.fallback_assignments;
  r.ue_rates = o.ue_rates;
  return r;
}

}  // namespace

ExperimentResult run_experiment(const ScenarioConfig& cfg) {
  cfg.validate();
  switch (cfg.kernel_isa) {
    case KernelIsa::Scalar: kernels::force_backend(kernels::Backend::Scalar); break;
    case KernelIsa::Avx2: kernels::force_backend(kernels::Backend::Avx2); break;
    case KernelIsa::Auto:
      kernels::force_backend(kernels::cpu_has_avx2() ? kernels::Backend::Avx2
                                                     : kernels::Backend::Scalar);
      break;
  }

  const bool want_proposed =
      cfg.approach == Approach::All || cfg.approach == Approach::Proposed;
  const bool want_maxrssi =
      cfg.approach == Approach::All || cfg.approach == Approach::MaxRssi;
  const bool want_random =
      cfg.approach == Approach::All || cfg.approach == Approach::Random;

  ExperimentResult result;
  result.config = cfg;
  std::vector<RunRecord> proposed_runs, maxrssi_runs, random_runs;

  for (int run = 0; run < cfg.runs; ++run) {
    const std::uint64_t run_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(run));
    const Pipeline p(cfg, run_seed);

    PartitionRecord pr;
    pr.run = run;
    pr.clusters = p.partition().clusters;
    pr.cluster_of_ue = p.partition().cluster_of_ue;
    result.partitions.push_back(std::move(pr));

    if (want_proposed) {
      std::vector<TraceRow> rows;
      ApproachOutcome o = p.run_matching(derive_seed(run_seed, kMatchingTag), &rows);
      for (TraceRow& row : rows) row.run = run;
      result.trace.insert(result.trace.end(), rows.begin(), rows.end());
      double xi = 0.0;
      for (const ClusterInstance& c : p.instances()) {
        const int mc = static_cast<int>(c.ues.size());
        xi = std::max(xi, overhead_bound(mc, 1, mc));
      }
      RunRecord rec = to_record(run, run_seed, o);
      rec.xi_max = xi;
      proposed_runs.push_back(std::move(rec));
    }
    if (want_maxrssi) {
      ApproachOutcome o = baseline_max_rssi(p.scenario(), cfg);
      o.welfare = o.sum_rate;  // no D2D: utilities reduce to plain rates
      o.cluster_count = p.partition().k();
      o.mean_cluster_size =
          static_cast<double>(cfg.n_scbs) / static_cast<double>(p.partition().k());
      maxrssi_runs.push_back(to_record(run, run_seed, o));
    }
    if (want_random) {
      Rng rng(derive_seed(run_seed, kRandomTag));
      ApproachOutcome o = baseline_random(p.scenario(), cfg, rng);
      {
        RateModel rnd_model(p.scenario().topology, p.scenario().channel,
                            cfg.power_split);
        const MatchingEvaluator ev(rnd_model, p.matrices(), p.scenario().social);
        o.welfare = ev.total_welfare(o.assoc);
      }
      o.cluster_count = p.partition().k();
      o.mean_cluster_size =
          static_cast<double>(cfg.n_scbs) / static_cast<double>(p.partition().k());
      random_runs.push_back(to_record(run, run_seed, o));
    }
  }

  if (want_proposed)
    result.reports.push_back(compute_metrics("proposed", std::move(proposed_runs)));
  if (want_maxrssi)
    result.reports.push_back(compute_metrics("max-rssi", std::move(maxrssi_runs)));
  if (want_random)
    result.reports.push_back(compute_metrics("random", std::move(random_runs)));
  return result;
}

}  // namespace scnsim
