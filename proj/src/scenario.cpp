#include "scnsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "json.hpp"
#include "scnsim/errors.hpp"
#include "scnsim/kernels.hpp"

namespace scnsim {

namespace {

constexpr std::uint64_t kPlacementTag = 0x706c6163;  // stream tags
constexpr std::uint64_t kSocialTag = 0x736f6369;

Vec2 sample_in_disc(Rng& rng, Vec2 center, double radius) {
  const double r = radius * std::sqrt(rng.u01());
  const double ang = 2.0 * std::numbers::pi * rng.u01();
  return {center.x + r * std::cos(ang), center.y + r * std::sin(ang)};
}

}  // namespace

Scenario generate_scenario(const ScenarioConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Scenario sc;
  NetworkTopology& topo = sc.topology;
  topo.bandwidth_hz = cfg.bandwidth_hz;
  topo.noise_psd_dbm_hz = cfg.noise_psd_dbm_hz;
  topo.scbs_radius_m = cfg.scbs_radius_m;
  topo.d2d_radius_m = cfg.d2d_radius_m;
  topo.tau0_fraction = cfg.tau0_fraction;
  topo.area_side_m = cfg.area_side_m;
  topo.min_distance_m = cfg.min_distance_m;

  Rng place(derive_seed(seed, kPlacementTag));
  const double side = cfg.area_side_m;

  // SCBS placement with a minimum inter-site distance
  constexpr int kMaxAttempts = 20000;
  for (int n = 0; n < cfg.n_scbs; ++n) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
      const Vec2 p{place.u01() * side, place.u01() * side};
      bool ok = true;
      for (const Vec2& q : topo.scbs_pos)
        if (dist(p, q) < cfg.inter_site_min_m) {
          ok = false;
          break;
        }
      if (ok) {
        topo.scbs_pos.push_back(p);
        placed = true;
      }
    }
    if (!placed)
      throw ConfigError(
          "SCBS placement infeasible after bounded attempts; increase "
          "area_side_m or reduce inter_site_min_m/n_scbs");
  }
  topo.scbs_tx_power_dbm.assign(static_cast<std::size_t>(cfg.n_scbs),
                                cfg.scbs_tx_power_dbm);

  // UE placement
  const int total = cfg.total_ues();
  topo.ue_pos.reserve(static_cast<std::size_t>(total));
  if (cfg.ue_placement == UePlacement::PerCellDisc) {
    for (int n = 0; n < cfg.n_scbs; ++n) {
      for (int k = 0; k < cfg.ues_per_scbs; ++k) {
        Vec2 p;
        int tries = 0;
        do {
          p = sample_in_disc(place, topo.scbs_pos[static_cast<std::size_t>(n)],
                             cfg.scbs_radius_m);
          ++tries;
        } while ((p.x < 0 || p.x > side || p.y < 0 || p.y > side) &&
                 tries < 1000);
        p.x = std::clamp(p.x, 0.0, side);
        p.y = std::clamp(p.y, 0.0, side);
        topo.ue_pos.push_back(p);
      }
    }
  } else {
    for (int k = 0; k < total; ++k)
      topo.ue_pos.push_back({place.u01() * side, place.u01() * side});
  }
  topo.ue_tx_power_dbm.assign(static_cast<std::size_t>(total),
                              cfg.ue_tx_power_dbm);
  topo.check_invariants();

  sc.channel = ChannelModel::from_config(cfg);

  Rng social_rng(derive_seed(seed, kSocialTag));
  if (cfg.social_model == SocialModel::ErdosRenyi) {
    sc.social = SocialGraph::erdos_renyi(total, cfg.social_p, social_rng.next());
  } else {
    sc.social = SocialGraph::watts_strogatz(total, cfg.social_k,
                                            cfg.social_rewire, social_rng.next());
  }

  const RateModel model(topo, sc.channel, cfg.power_split);
  sc.anchors = model.anchors();
  return sc;
}

namespace {

void fill_rates(const RateModel& model, const ServiceState& st,
                ApproachOutcome& out) {
  const int m = model.n_ues();
  out.ue_rates.resize(static_cast<std::size_t>(m));
  for (int ue = 0; ue < m; ++ue)
    out.ue_rates[static_cast<std::size_t>(ue)] = model.per_ue_rate(ue, st);
  out.sum_rate = kernels::reduce_sum(out.ue_rates.data(), out.ue_rates.size());
  for (int ue = 0; ue < m; ++ue)
    if (st.anchor_active[static_cast<std::size_t>(ue)])
      out.same_content_sizes.push_back(
          static_cast<int>(st.members_of[static_cast<std::size_t>(ue)].size()) + 1);
}

}  // namespace

ApproachOutcome baseline_max_rssi(const Scenario& sc, const ScenarioConfig& cfg) {
  RateModel model(sc.topology, sc.channel, cfg.power_split);
  model.set_tau0(1.0);  // single time slot: the whole frame is cellular
  ApproachOutcome out;
  const int m = sc.topology.n_ues();
  out.assoc.resize(static_cast<std::size_t>(m));
  for (int ue = 0; ue < m; ++ue)
    out.assoc[static_cast<std::size_t>(ue)] =
        sn_from_scbs(sc.anchors[static_cast<std::size_t>(ue)]);
  const ServiceState st = ServiceState::build(out.assoc, sc.topology.n_scbs());
  fill_rates(model, st, out);
  return out;
}

ApproachOutcome baseline_random(const Scenario& sc, const ScenarioConfig& cfg,
                                Rng& rng) {
  const NetworkTopology& topo = sc.topology;
  const int n_scbs = topo.n_scbs();
  const int m = topo.n_ues();
  RateModel model(topo, sc.channel, cfg.power_split);
  ApproachOutcome out;
  out.assoc.assign(static_cast<std::size_t>(m), kUnassigned);

  // anchor UEs drawn uniformly from each SCBS's in-coverage anchored pool
  std::vector<int> important;
  std::vector<char> is_important(static_cast<std::size_t>(m), 0);
  for (int n = 0; n < n_scbs; ++n) {
    std::vector<int> pool;
    for (int ue = 0; ue < m; ++ue)
      if (sc.anchors[static_cast<std::size_t>(ue)] == n &&
          dist(topo.scbs_pos[static_cast<std::size_t>(n)],
               topo.ue_pos[static_cast<std::size_t>(ue)]) <= topo.scbs_radius_m)
        pool.push_back(ue);
    for (int k = 0; k < cfg.important_per_scbs && !pool.empty(); ++k) {
      const std::size_t pick = rng.uniform_index(pool.size());
      const int ue = pool[pick];
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
      important.push_back(ue);
      is_important[static_cast<std::size_t>(ue)] = 1;
      out.assoc[static_cast<std::size_t>(ue)] =
          sn_from_scbs(sc.anchors[static_cast<std::size_t>(ue)]);
    }
  }

  for (int ue = 0; ue < m; ++ue) {
    if (is_important[static_cast<std::size_t>(ue)]) continue;
    std::vector<int> candidates;
    for (int n = 0; n < n_scbs; ++n)
      if (topo.scbs_ue_distance(n, ue) <= topo.scbs_radius_m)
        candidates.push_back(sn_from_scbs(n));
    for (const int i : important)
      if (dist(topo.ue_pos[static_cast<std::size_t>(ue)],
               topo.ue_pos[static_cast<std::size_t>(i)]) <= topo.d2d_radius_m)
        candidates.push_back(sn_from_anchor_ue(i, n_scbs));
    if (candidates.empty()) {
      // out of everyone's range: fall back to the nearest SCBS
      int best = 0;
      double best_d = topo.scbs_ue_distance(0, ue);
      for (int n = 1; n < n_scbs; ++n) {
        const double d = topo.scbs_ue_distance(n, ue);
        if (d < best_d) {
          best_d = d;
          best = n;
        }
      }
      out.assoc[static_cast<std::size_t>(ue)] = sn_from_scbs(best);
      ++out.fallback_assignments;
      continue;
    }
    out.assoc[static_cast<std::size_t>(ue)] =
        candidates[rng.uniform_index(candidates.size())];
  }

  const ServiceState st = ServiceState::build(out.assoc, n_scbs);
  fill_rates(model, st, out);
  return out;
}

namespace {

double json_num(const nlohmann::json& j, const char* key, double fallback) {
  return j.contains(key) ? j.at(key).get<double>() : fallback;
}

}  // namespace

OracleInstance load_oracle_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open instance file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw IoError("instance file parse failure: " + std::string(e.what()));
  }

  OracleInstance inst;
  NetworkTopology& topo = inst.topology;
  const ScenarioConfig defaults;
  topo.bandwidth_hz = json_num(j, "bandwidth_hz", defaults.bandwidth_hz);
  topo.noise_psd_dbm_hz = json_num(j, "noise_psd_dbm_hz", defaults.noise_psd_dbm_hz);
  topo.scbs_radius_m = json_num(j, "scbs_radius_m", defaults.scbs_radius_m);
  topo.d2d_radius_m = json_num(j, "d2d_radius_m", defaults.d2d_radius_m);
  topo.tau0_fraction = json_num(j, "tau0_fraction", defaults.tau0_fraction);
  topo.area_side_m = json_num(j, "area_side_m", defaults.area_side_m);
  topo.min_distance_m = json_num(j, "min_distance_m", defaults.min_distance_m);

  if (!j.contains("scbs") || !j.contains("ues"))
    throw ConfigError("instance file: 'scbs' and 'ues' arrays are required");
  for (const auto& s : j.at("scbs")) {
    topo.scbs_pos.push_back({s.at("x").get<double>(), s.at("y").get<double>()});
    topo.scbs_tx_power_dbm.push_back(
        json_num(s, "power_dbm", defaults.scbs_tx_power_dbm));
  }
  for (const auto& u : j.at("ues")) {
    topo.ue_pos.push_back({u.at("x").get<double>(), u.at("y").get<double>()});
    topo.ue_tx_power_dbm.push_back(
        json_num(u, "power_dbm", defaults.ue_tx_power_dbm));
  }
  topo.check_invariants();

  inst.channel = ChannelModel::from_config(defaults);
  if (j.contains("pathloss")) {
    const auto& pl = j.at("pathloss");
    inst.channel.cellular = {json_num(pl, "cellular_a", defaults.cellular_pathloss_a),
                             json_num(pl, "cellular_b", defaults.cellular_pathloss_b)};
    inst.channel.d2d_nlos = {json_num(pl, "d2d_a", defaults.d2d_nlos_a),
                             json_num(pl, "d2d_b", defaults.d2d_nlos_b)};
  }

  inst.social = SocialGraph(topo.n_ues());
  if (j.contains("edges"))
    for (const auto& e : j.at("edges"))
      inst.social.add_edge(e.at(0).get<int>(), e.at(1).get<int>());

  if (j.contains("important"))
    for (const auto& i : j.at("important")) inst.important.push_back(i.get<int>());
  for (const int i : inst.important)
    if (i < 0 || i >= topo.n_ues())
      throw ConfigError("instance file: important UE id out of range");

  if (j.contains("matching")) {
    Association assoc(static_cast<std::size_t>(topo.n_ues()), kUnassigned);
    for (const auto& [key, value] : j.at("matching").items()) {
      const int ue = std::stoi(key);
      if (ue < 0 || ue >= topo.n_ues())
        throw ConfigError("instance file: matching UE id out of range");
      assoc[static_cast<std::size_t>(ue)] = value.get<int>();
    }
    inst.matching = std::move(assoc);
  }
  return inst;
}

}  // namespace scnsim
