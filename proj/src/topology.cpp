#include "scnsim/topology.hpp"

#include <cmath>

#include "scnsim/errors.hpp"
#include "scnsim/kernels.hpp"

namespace scnsim {

void NetworkTopology::check_invariants() const {
  if (scbs_pos.size() != scbs_tx_power_dbm.size() ||
      ue_pos.size() != ue_tx_power_dbm.size())
    throw DomainError("topology: power vectors must match node counts");
  if (bandwidth_hz <= 0) throw DomainError("topology: bandwidth must be > 0");
  if (scbs_radius_m <= 0 || d2d_radius_m <= 0)
    throw DomainError("topology: radii must be > 0");
  if (!(tau0_fraction > 0.0 && tau0_fraction < 1.0))
    throw DomainError("topology: tau0_fraction must lie in (0,1)");
  auto inside = [&](Vec2 p) {
    return p.x >= 0.0 && p.x <= area_side_m && p.y >= 0.0 && p.y <= area_side_m;
  };
  for (const Vec2& p : scbs_pos)
    if (!inside(p)) throw DomainError("topology: SCBS outside area");
  for (const Vec2& p : ue_pos)
    if (!inside(p)) throw DomainError("topology: UE outside area");
}

ChannelModel ChannelModel::from_config(const ScenarioConfig& cfg) {
  ChannelModel m;
  m.cellular = {cfg.cellular_pathloss_a, cfg.cellular_pathloss_b};
  m.d2d_los = {cfg.d2d_los_a, cfg.d2d_los_b};
  m.d2d_nlos = {cfg.d2d_nlos_a, cfg.d2d_nlos_b};
  m.d2d_rule = cfg.d2d_los_rule;
  m.d2d_los_threshold_m = cfg.d2d_los_threshold_m;
  return m;
}

PathLossCoeff ChannelModel::coeff(LinkKind k) const {
  switch (k) {
    case LinkKind::Cellular: return cellular;
    case LinkKind::D2dLos: return d2d_los;
    default: return d2d_nlos;
  }
}

LinkKind ChannelModel::d2d_kind(double distance_m) const {
  switch (d2d_rule) {
    case D2dLosRule::AlwaysLos: return LinkKind::D2dLos;
    case D2dLosRule::AlwaysNlos: return LinkKind::D2dNlos;
    default:
      return distance_m <= d2d_los_threshold_m ? LinkKind::D2dLos
                                               : LinkKind::D2dNlos;
  }
}

double ChannelModel::path_loss_db(double distance_m, LinkKind k) const {
  if (!(distance_m > 0.0))
    throw DomainError("path_loss: distance must be > 0 (co-located nodes?)");
  const PathLossCoeff c = coeff(k);
  return c.a + c.b * std::log10(distance_m / 1000.0);
}

double link_gain(double distance_m, PathLossCoeff c) {
  double g;
  kernels::pathloss_gain_batch(&distance_m, &g, 1, c.a, c.b);
  return g;
}

}  // namespace scnsim
