#include "scnsim/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "scnsim/errors.hpp"

namespace scnsim {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw ConfigError("trailing characters");
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': invalid number '" + v + "'");
  }
}

int parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long d = std::stol(v, &pos);
    if (pos != v.size()) throw ConfigError("trailing characters");
    return static_cast<int>(d);
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': invalid integer '" + v + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const unsigned long long d = std::stoull(v, &pos);
    if (pos != v.size()) throw ConfigError("trailing characters");
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': invalid integer '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  throw ConfigError("config key '" + key + "': invalid boolean '" + v + "'");
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const char* to_str(D2dLosRule r) {
  switch (r) {
    case D2dLosRule::AlwaysLos: return "always-los";
    case D2dLosRule::AlwaysNlos: return "always-nlos";
    default: return "threshold";
  }
}
const char* to_str(SocialModel m) {
  return m == SocialModel::ErdosRenyi ? "erdos-renyi" : "watts-strogatz";
}
const char* to_str(BetweennessNorm n) {
  return n == BetweennessNorm::SquaredCount ? "squared-count" : "pair-count";
}
const char* to_str(PtSign s) {
  return s == PtSign::Prose ? "prose" : "paper-literal";
}
const char* to_str(UePlacement p) {
  return p == UePlacement::PerCellDisc ? "per-cell-disc" : "uniform-area";
}
const char* to_str(KernelIsa k) {
  switch (k) {
    case KernelIsa::Auto: return "auto";
    case KernelIsa::Scalar: return "scalar";
    default: return "avx2";
  }
}

}  // namespace

std::string to_string(Approach a) {
  switch (a) {
    case Approach::Proposed: return "proposed";
    case Approach::MaxRssi: return "max-rssi";
    case Approach::Random: return "random";
    default: return "all";
  }
}

Approach approach_from_string(const std::string& s) {
  if (s == "proposed") return Approach::Proposed;
  if (s == "max-rssi") return Approach::MaxRssi;
  if (s == "random") return Approach::Random;
  if (s == "all") return Approach::All;
  throw ConfigError("unknown approach '" + s + "'");
}

int ScenarioConfig::k_max_effective() const {
  if (k_max > 0) return k_max;
  return static_cast<int>(std::ceil(n_scbs / 2.0 + 1.0));
}

void ScenarioConfig::set(const std::string& key, const std::string& value) {
  if (key == "n_scbs") n_scbs = parse_int(key, value);
  else if (key == "ues_per_scbs") ues_per_scbs = parse_int(key, value);
  else if (key == "area_side_m") area_side_m = parse_double(key, value);
  else if (key == "inter_site_min_m") inter_site_min_m = parse_double(key, value);
  else if (key == "scbs_radius_m") scbs_radius_m = parse_double(key, value);
  else if (key == "d2d_radius_m") d2d_radius_m = parse_double(key, value);
  else if (key == "ue_placement") {
    if (value == "per-cell-disc") ue_placement = UePlacement::PerCellDisc;
    else if (value == "uniform-area") ue_placement = UePlacement::UniformArea;
    else throw ConfigError("config key 'ue_placement': unknown value '" + value + "'");
  }
  else if (key == "min_distance_m") min_distance_m = parse_double(key, value);
  else if (key == "scbs_tx_power_dbm") scbs_tx_power_dbm = parse_double(key, value);
  else if (key == "ue_tx_power_dbm") ue_tx_power_dbm = parse_double(key, value);
  else if (key == "bandwidth_hz") bandwidth_hz = parse_double(key, value);
  else if (key == "noise_psd_dbm_hz") noise_psd_dbm_hz = parse_double(key, value);
  else if (key == "tau0_fraction") tau0_fraction = parse_double(key, value);
  else if (key == "power_split") power_split = parse_bool(key, value);
  else if (key == "cellular_pathloss_a") cellular_pathloss_a = parse_double(key, value);
  else if (key == "cellular_pathloss_b") cellular_pathloss_b = parse_double(key, value);
  else if (key == "d2d_los_a") d2d_los_a = parse_double(key, value);
  else if (key == "d2d_los_b") d2d_los_b = parse_double(key, value);
  else if (key == "d2d_nlos_a") d2d_nlos_a = parse_double(key, value);
  else if (key == "d2d_nlos_b") d2d_nlos_b = parse_double(key, value);
  else if (key == "d2d_los_rule") {
    if (value == "always-los") d2d_los_rule = D2dLosRule::AlwaysLos;
    else if (value == "always-nlos") d2d_los_rule = D2dLosRule::AlwaysNlos;
    else if (value == "threshold") d2d_los_rule = D2dLosRule::Threshold;
    else throw ConfigError("config key 'd2d_los_rule': unknown value '" + value + "'");
  }
  else if (key == "d2d_los_threshold_m") d2d_los_threshold_m = parse_double(key, value);
  else if (key == "alpha") alpha = parse_double(key, value);
  else if (key == "beta") beta = parse_double(key, value);
  else if (key == "epsilon") epsilon = parse_double(key, value);
  else if (key == "social_model") {
    if (value == "erdos-renyi") social_model = SocialModel::ErdosRenyi;
    else if (value == "watts-strogatz") social_model = SocialModel::WattsStrogatz;
    else throw ConfigError("config key 'social_model': unknown value '" + value + "'");
  }
  else if (key == "social_p") social_p = parse_double(key, value);
  else if (key == "social_k") social_k = parse_int(key, value);
  else if (key == "social_rewire") social_rewire = parse_double(key, value);
  else if (key == "important_per_scbs") important_per_scbs = parse_int(key, value);
  else if (key == "betweenness_norm") {
    if (value == "squared-count") betweenness_norm = BetweennessNorm::SquaredCount;
    else if (value == "pair-count") betweenness_norm = BetweennessNorm::PairCount;
    else throw ConfigError("config key 'betweenness_norm': unknown value '" + value + "'");
  }
  else if (key == "upsilon_d_m") upsilon_d_m = parse_double(key, value);
  else if (key == "sigma_d") sigma_d = parse_double(key, value);
  else if (key == "sigma_l") sigma_l = parse_double(key, value);
  else if (key == "omega") omega = parse_double(key, value);
  else if (key == "k_min") k_min = parse_int(key, value);
  else if (key == "k_max") k_max = parse_int(key, value);
  else if (key == "t_max") t_max = parse_int(key, value);
  else if (key == "count_max") count_max = parse_int(key, value);
  else if (key == "pt_sign") {
    if (value == "prose") pt_sign = PtSign::Prose;
    else if (value == "paper-literal") pt_sign = PtSign::Literal;
    else throw ConfigError("config key 'pt_sign': unknown value '" + value + "'");
  }
  else if (key == "allow_moves") allow_moves = parse_bool(key, value);
  else if (key == "seed") seed = parse_u64(key, value);
  else if (key == "runs") runs = parse_int(key, value);
  else if (key == "approach") approach = approach_from_string(value);
  else if (key == "kernel_isa") {
    if (value == "auto") kernel_isa = KernelIsa::Auto;
    else if (value == "scalar") kernel_isa = KernelIsa::Scalar;
    else if (value == "avx2") kernel_isa = KernelIsa::Avx2;
    else throw ConfigError("config key 'kernel_isa': unknown value '" + value + "'");
  }
  else throw ConfigError("unknown config key '" + key + "'");
}

void ScenarioConfig::validate() const {
  if (n_scbs < 1) throw ConfigError("n_scbs must be >= 1");
  if (ues_per_scbs < 1) throw ConfigError("ues_per_scbs must be >= 1");
  if (area_side_m <= 0) throw ConfigError("area_side_m must be > 0");
  if (inter_site_min_m < 0) throw ConfigError("inter_site_min_m must be >= 0");
  if (scbs_radius_m <= 0 || d2d_radius_m <= 0)
    throw ConfigError("transmission radii must be > 0");
  if (min_distance_m <= 0) throw ConfigError("min_distance_m must be > 0");
  if (bandwidth_hz <= 0) throw ConfigError("bandwidth_hz must be > 0");
  if (!(tau0_fraction > 0.0 && tau0_fraction < 1.0))
    throw ConfigError("tau0_fraction must lie in (0,1)");
  if (std::abs(alpha + beta - 1.0) > 1e-12)
    throw ConfigError("alpha + beta must equal 1");
  if (alpha < 0 || beta < 0) throw ConfigError("alpha and beta must be >= 0");
  if (epsilon <= 0) throw ConfigError("epsilon must be > 0");
  if (social_p < 0 || social_p > 1)
    throw ConfigError("social_p must lie in [0,1]");
  if (social_k < 0 || social_k % 2 != 0)
    throw ConfigError("social_k must be even and >= 0");
  if (social_rewire < 0 || social_rewire > 1)
    throw ConfigError("social_rewire must lie in [0,1]");
  if (important_per_scbs < 0)
    throw ConfigError("important_per_scbs must be >= 0");
  if (upsilon_d_m <= 0) throw ConfigError("upsilon_d_m must be > 0");
  if (sigma_d <= 0 || sigma_l <= 0)
    throw ConfigError("sigma_d and sigma_l must be > 0");
  if (omega < 0 || omega > 1) throw ConfigError("omega must lie in [0,1]");
  if (k_min < 1) throw ConfigError("k_min must be >= 1");
  if (k_max != 0 && k_max < k_min)
    throw ConfigError("k_max must be 0 (auto) or >= k_min");
  if (t_max < 1 || count_max < 1)
    throw ConfigError("t_max and count_max must be >= 1");
  if (runs < 1) throw ConfigError("runs must be >= 1");
  if (d2d_los_rule == D2dLosRule::Threshold && d2d_los_threshold_m <= 0)
    throw ConfigError("d2d_los_threshold_m must be > 0 for the threshold rule");
}

ScenarioConfig ScenarioConfig::from_string(const std::string& text) {
  ScenarioConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    cfg.set(key, value);
  }
  return cfg;
}

ScenarioConfig ScenarioConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str());
}

std::string ScenarioConfig::to_string() const {
  std::ostringstream o;
  o << "n_scbs = " << n_scbs << "\n";
  o << "ues_per_scbs = " << ues_per_scbs << "\n";
  o << "area_side_m = " << fmt_double(area_side_m) << "\n";
  o << "inter_site_min_m = " << fmt_double(inter_site_min_m) << "\n";
  o << "scbs_radius_m = " << fmt_double(scbs_radius_m) << "\n";
  o << "d2d_radius_m = " << fmt_double(d2d_radius_m) << "\n";
  o << "ue_placement = " << to_str(ue_placement) << "\n";
  o << "min_distance_m = " << fmt_double(min_distance_m) << "\n";
  o << "scbs_tx_power_dbm = " << fmt_double(scbs_tx_power_dbm) << "\n";
  o << "ue_tx_power_dbm = " << fmt_double(ue_tx_power_dbm) << "\n";
  o << "bandwidth_hz = " << fmt_double(bandwidth_hz) << "\n";
  o << "noise_psd_dbm_hz = " << fmt_double(noise_psd_dbm_hz) << "\n";
  o << "tau0_fraction = " << fmt_double(tau0_fraction) << "\n";
  o << "power_split = " << (power_split ? "true" : "false") << "\n";
  o << "cellular_pathloss_a = " << fmt_double(cellular_pathloss_a) << "\n";
  o << "cellular_pathloss_b = " << fmt_double(cellular_pathloss_b) << "\n";
  o << "d2d_los_a = " << fmt_double(d2d_los_a) << "\n";
  o << "d2d_los_b = " << fmt_double(d2d_los_b) << "\n";
  o << "d2d_nlos_a = " << fmt_double(d2d_nlos_a) << "\n";
  o << "d2d_nlos_b = " << fmt_double(d2d_nlos_b) << "\n";
  o << "d2d_los_rule = " << to_str(d2d_los_rule) << "\n";
  o << "d2d_los_threshold_m = " << fmt_double(d2d_los_threshold_m) << "\n";
  o << "alpha = " << fmt_double(alpha) << "\n";
  o << "beta = " << fmt_double(beta) << "\n";
  o << "epsilon = " << fmt_double(epsilon) << "\n";
  o << "social_model = " << to_str(social_model) << "\n";
  o << "social_p = " << fmt_double(social_p) << "\n";
  o << "social_k = " << social_k << "\n";
  o << "social_rewire = " << fmt_double(social_rewire) << "\n";
  o << "important_per_scbs = " << important_per_scbs << "\n";
  o << "betweenness_norm = " << to_str(betweenness_norm) << "\n";
  o << "upsilon_d_m = " << fmt_double(upsilon_d_m) << "\n";
  o << "sigma_d = " << fmt_double(sigma_d) << "\n";
  o << "sigma_l = " << fmt_double(sigma_l) << "\n";
  o << "omega = " << fmt_double(omega) << "\n";
  o << "k_min = " << k_min << "\n";
  o << "k_max = " << k_max << "\n";
  o << "t_max = " << t_max << "\n";
  o << "count_max = " << count_max << "\n";
  o << "pt_sign = " << to_str(pt_sign) << "\n";
  o << "allow_moves = " << (allow_moves ? "true" : "false") << "\n";
  o << "seed = " << seed << "\n";
  o << "runs = " << runs << "\n";
  o << "approach = " << scnsim::to_string(approach) << "\n";
  o << "kernel_isa = " << to_str(kernel_isa) << "\n";
  return o.str();
}

}  // namespace scnsim
