#pragma once

#include <cstdint>
#include <string>

namespace scnsim {

enum class D2dLosRule { AlwaysLos, AlwaysNlos, Threshold };
enum class SocialModel { ErdosRenyi, WattsStrogatz };
// Divisor applied to raw edge-betweenness flow: SquaredCount = (M-1)^2,
// PairCount = M(M-1).
enum class BetweennessNorm { SquaredCount, PairCount };
// Orientation of the swap-acceptance logistic. Prose: a welfare-improving
// swap is accepted with probability > 1/2. Literal: the inverted form.
enum class PtSign { Prose, Literal };
enum class UePlacement { PerCellDisc, UniformArea };
enum class KernelIsa { Auto, Scalar, Avx2 };
enum class Approach { Proposed, MaxRssi, Random, All };

/// Every tunable of the simulator, parsed from a flat `key = value` file.
/// Unknown keys are errors. Serialization round-trips bit-exactly.
struct ScenarioConfig {
  // deployment
  int n_scbs = 8;
  int ues_per_scbs = 10;
  double area_side_m = 500.0;
  double inter_site_min_m = 40.0;
  double scbs_radius_m = 50.0;
  double d2d_radius_m = 20.0;
  UePlacement ue_placement = UePlacement::PerCellDisc;
  double min_distance_m = 1.0;

  // radio
  double scbs_tx_power_dbm = 23.0;
  double ue_tx_power_dbm = 15.0;
  double bandwidth_hz = 5e6;
  double noise_psd_dbm_hz = -174.0;
  double tau0_fraction = 0.84;
  bool power_split = false;
  double cellular_pathloss_a = 145.4;
  double cellular_pathloss_b = 37.5;
  double d2d_los_a = 103.8;
  double d2d_los_b = 20.9;
  double d2d_nlos_a = 145.4;
  double d2d_nlos_b = 37.5;
  D2dLosRule d2d_los_rule = D2dLosRule::AlwaysNlos;
  double d2d_los_threshold_m = 0.0;

  // social model
  double alpha = 0.5;
  double beta = 0.5;
  double epsilon = 1.0;
  SocialModel social_model = SocialModel::WattsStrogatz;
  double social_p = 0.5;
  int social_k = 10;
  double social_rewire = 0.1;
  int important_per_scbs = 1;
  BetweennessNorm betweenness_norm = BetweennessNorm::SquaredCount;

  // clustering
  double upsilon_d_m = 200.0;
  double sigma_d = 100.0;
  double sigma_l = 1.0;
  double omega = 0.5;
  int k_min = 2;
  int k_max = 0;  // 0 = automatic: ceil(N/2 + 1)

  // matching
  int t_max = 10;
  int count_max = 200;
  PtSign pt_sign = PtSign::Prose;
  bool allow_moves = true;

  // harness
  std::uint64_t seed = 1;
  int runs = 1;
  Approach approach = Approach::All;
  KernelIsa kernel_isa = KernelIsa::Auto;

  int total_ues() const { return n_scbs * ues_per_scbs; }
  int k_max_effective() const;
  double tau1_fraction() const { return 1.0 - tau0_fraction; }

  /// Throws ConfigError when any invariant fails.
  void validate() const;

  /// Typed assignment from a key/value pair; unknown key throws ConfigError.
  void set(const std::string& key, const std::string& value);

  static ScenarioConfig from_file(const std::string& path);
  static ScenarioConfig from_string(const std::string& text);
  /// Flat `key = value` form, one key per line, fixed order.
  std::string to_string() const;
};

std::string to_string(Approach a);
Approach approach_from_string(const std::string& s);

}  // namespace scnsim
