#pragma once

#include <vector>

#include "scnsim/config.hpp"
#include "scnsim/geometry.hpp"

namespace scnsim {

/// Node geometry and radio constants of one scenario instance.
struct NetworkTopology {
  std::vector<Vec2> scbs_pos;
  std::vector<Vec2> ue_pos;
  std::vector<double> scbs_tx_power_dbm;  // per SCBS
  std::vector<double> ue_tx_power_dbm;    // per UE
  double bandwidth_hz = 5e6;
  double noise_psd_dbm_hz = -174.0;
  double scbs_radius_m = 50.0;
  double d2d_radius_m = 20.0;
  double tau0_fraction = 0.84;
  double area_side_m = 500.0;
  double min_distance_m = 1.0;

  int n_scbs() const { return static_cast<int>(scbs_pos.size()); }
  int n_ues() const { return static_cast<int>(ue_pos.size()); }

  double scbs_ue_distance(int n, int m) const {
    return clamped_dist(scbs_pos[n], ue_pos[m], min_distance_m);
  }
  double ue_ue_distance(int a, int b) const {
    return clamped_dist(ue_pos[a], ue_pos[b], min_distance_m);
  }

  /// Throws DomainError if positions fall outside the area or constants are
  /// degenerate.
  void check_invariants() const;
};

enum class LinkKind { Cellular, D2dLos, D2dNlos };

struct PathLossCoeff {
  double a = 0.0;
  double b = 0.0;
};

/// Log-distance path loss a + b*log10(d_km) per link family.
struct ChannelModel {
  PathLossCoeff cellular{145.4, 37.5};
  PathLossCoeff d2d_los{103.8, 20.9};
  PathLossCoeff d2d_nlos{145.4, 37.5};
  D2dLosRule d2d_rule = D2dLosRule::AlwaysNlos;
  double d2d_los_threshold_m = 0.0;

  static ChannelModel from_config(const ScenarioConfig& cfg);

  PathLossCoeff coeff(LinkKind k) const;
  /// Which D2D family applies at this distance under the configured rule.
  LinkKind d2d_kind(double distance_m) const;
  /// Throws DomainError for d <= 0 (degenerate co-located nodes; callers
  /// clamp to min_distance_m first).
  double path_loss_db(double distance_m, LinkKind k) const;
};

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

/// Linear channel gain for one link; same arithmetic as the batch gain
/// kernel, so table entries and single lookups agree bit-for-bit.
double link_gain(double distance_m, PathLossCoeff c);

}  // namespace scnsim
