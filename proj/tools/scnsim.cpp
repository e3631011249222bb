// Command-line front end: simulate | validate | oracle.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "scnsim/errors.hpp"
#include "scnsim/exporters.hpp"
#include "scnsim/experiment.hpp"
#include "scnsim/kernels.hpp"
#include "scnsim/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitOracleSize = 3;
constexpr int kExitIo = 4;

void print_report(const scnsim::MetricsReport& r) {
  std::printf("%-9s runs=%d  avg_sum_rate=%.4g bps  p5=%.4g  p50=%.4g  p95=%.4g"
              "  iters=%.2f  clusters=%.2f  same_content=%.2f\n",
              r.approach.c_str(), r.runs, r.avg_sum_rate, r.p5, r.p50, r.p95,
              r.avg_iterations, r.avg_clusters, r.avg_same_content);
}

int run_simulate(const scnsim::ScenarioConfig& cfg, const std::string& out_dir) {
  const scnsim::ExperimentResult result = scnsim::run_experiment(cfg);
  scnsim::export_results(result, out_dir);
  std::printf("kernel backend: %s\n",
              std::string(scnsim::kernels::backend_name()).c_str());
  for (const auto& rep : result.reports) print_report(rep);
  std::printf("results written to %s\n", out_dir.c_str());
  return kExitOk;
}

int run_oracle(const std::string& instance_path) {
  using namespace scnsim;
  const OracleInstance inst = load_oracle_instance(instance_path);
  const NetworkTopology& topo = inst.topology;
  const RateModel model(topo, inst.channel, false);
  const std::vector<int> anchors = model.anchors();

  ScenarioConfig defaults;
  const SocialMatrices matrices =
      build_social_matrices(inst.social, topo, defaults);

  ImportantSet important;
  important.ranked_per_scbs.resize(static_cast<std::size_t>(topo.n_scbs()));
  important.elected_per_scbs.resize(static_cast<std::size_t>(topo.n_scbs()));
  for (const int i : inst.important)
    important.elected_per_scbs[static_cast<std::size_t>(
        anchors[static_cast<std::size_t>(i)])].push_back(i);

  ClusterPartition part;  // single cluster spanning the whole instance
  part.clusters.push_back({});
  for (int n = 0; n < topo.n_scbs(); ++n) part.clusters[0].push_back(n);
  part.cluster_of_scbs.assign(static_cast<std::size_t>(topo.n_scbs()), 0);
  assign_ue_clusters(part, anchors);

  const ClusterInstance cluster = ClusterInstance::build(
      0, part, inst.social, topo, important, anchors);
  const MatchingEvaluator ev(model, matrices, inst.social);

  Association start = inst.matching
                          ? *inst.matching
                          : initial_association(anchors);
  check_matching_valid(cluster, start);

  const OracleResult opt = brute_force_optimum(ev, cluster, start);
  std::printf("instance: %d SCBSs, %d UEs, %zu anchor UE(s)\n", topo.n_scbs(),
              topo.n_ues(), inst.important.size());
  std::printf("assignments evaluated: %ld\n", opt.evaluated);
  std::printf("optimal welfare: %.9g\n", opt.welfare);
  std::printf("optimal association:");
  for (int ue = 0; ue < topo.n_ues(); ++ue)
    std::printf(" %d->%d", ue, opt.best[static_cast<std::size_t>(ue)]);
  std::printf("\n");

  const StabilityResult opt_stab = is_pairwise_stable(ev, cluster, opt.best);
  std::printf("optimum pairwise stable: %s\n", opt_stab.stable ? "yes" : "no");
  if (inst.matching) {
    const double w = ev.welfare(cluster, *inst.matching);
    const StabilityResult s = is_pairwise_stable(ev, cluster, *inst.matching);
    std::printf("given matching welfare: %.9g (%.2f%% of optimum)\n", w,
                opt.welfare > 0 ? 100.0 * w / opt.welfare : 0.0);
    if (s.stable) {
      std::printf("given matching pairwise stable: yes\n");
    } else {
      std::printf("given matching pairwise stable: no (witness swap: %d <-> %d)\n",
                  s.witness_m1, s.witness_m2);
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Social-aware user association simulator for D2D small cells"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::string instance_path;

  int opt_scbs = 0, opt_ues = 0, opt_runs = 0, opt_tmax = 0, opt_countmax = 0;
  std::uint64_t opt_seed = 0;
  double opt_omega = 0.0;
  std::string opt_approach, opt_pt_sign;
  bool opt_allow_moves = false, opt_no_moves = false;

  CLI::App* sim = app.add_subcommand("simulate", "run the experiment and export results");
  sim->add_option("--config", config_path, "config file (key = value per line)");
  auto* o_scbs = sim->add_option("--scbs", opt_scbs, "number of SCBSs");
  auto* o_ues = sim->add_option("--ues-per-scbs", opt_ues, "UEs per SCBS");
  auto* o_seed = sim->add_option("--seed", opt_seed, "master seed");
  auto* o_runs = sim->add_option("--runs", opt_runs, "independent runs");
  auto* o_appr = sim->add_option("--approach", opt_approach,
                                 "proposed|max-rssi|random|all");
  sim->add_option("--out", out_dir, "output directory");
  auto* o_tmax = sim->add_option("--t-max", opt_tmax, "outer iterations");
  auto* o_cmax = sim->add_option("--count-max", opt_countmax, "swap iterations per cluster");
  auto* o_omega = sim->add_option("--omega", opt_omega, "distance/load similarity blend");
  auto* o_pt = sim->add_option("--pt-sign", opt_pt_sign, "prose|paper-literal");
  auto* o_moves = sim->add_flag("--allow-moves", opt_allow_moves,
                                "allow single-UE moves besides pair swaps");
  auto* o_nomoves = sim->add_flag("--no-moves", opt_no_moves,
                                  "restrict the search to pair swaps");

  CLI::App* val = app.add_subcommand("validate", "check a config file and exit");
  val->add_option("--config", config_path, "config file")->required();

  CLI::App* orc = app.add_subcommand("oracle",
                                     "exhaustive optimum + stability scan on a tiny instance");
  orc->add_option("--instance", instance_path, "instance JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    scnsim::ScenarioConfig cfg;
    if (!config_path.empty()) cfg = scnsim::ScenarioConfig::from_file(config_path);

    if (sim->parsed()) {
      if (o_scbs->count()) cfg.n_scbs = opt_scbs;
      if (o_ues->count()) cfg.ues_per_scbs = opt_ues;
      if (o_seed->count()) cfg.seed = opt_seed;
      if (o_runs->count()) cfg.runs = opt_runs;
      if (o_appr->count()) cfg.approach = scnsim::approach_from_string(opt_approach);
      if (o_tmax->count()) cfg.t_max = opt_tmax;
      if (o_cmax->count()) cfg.count_max = opt_countmax;
      if (o_omega->count()) cfg.omega = opt_omega;
      if (o_pt->count()) {
        if (opt_pt_sign == "prose") cfg.pt_sign = scnsim::PtSign::Prose;
        else if (opt_pt_sign == "paper-literal") cfg.pt_sign = scnsim::PtSign::Literal;
        else throw scnsim::ConfigError("--pt-sign must be prose or paper-literal");
      }
      if (o_moves->count()) cfg.allow_moves = true;
      if (o_nomoves->count()) cfg.allow_moves = false;
      cfg.validate();
      return run_simulate(cfg, out_dir);
    }
    if (val->parsed()) {
      cfg.validate();
      std::printf("config OK: %d SCBSs, %d UEs, %d run(s)\n", cfg.n_scbs,
                  cfg.total_ues(), cfg.runs);
      return kExitOk;
    }
    if (orc->parsed()) return run_oracle(instance_path);
  } catch (const scnsim::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const scnsim::OracleSizeError& e) {
    std::fprintf(stderr, "oracle refusal: %s\n", e.what());
    return kExitOracleSize;
  } catch (const scnsim::IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return kExitOk;
}
