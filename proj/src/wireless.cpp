#include "scnsim/wireless.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "scnsim/errors.hpp"
#include "scnsim/kernels.hpp"

namespace scnsim {

ServiceState ServiceState::build(std::span<const int> sn_of_ue, int n_scbs) {
  ServiceState st;
  const int m = static_cast<int>(sn_of_ue.size());
  st.sn_of_ue.assign(sn_of_ue.begin(), sn_of_ue.end());
  st.served_by_scbs.assign(n_scbs, {});
  st.members_of.assign(m, {});
  st.anchor_active.assign(m, 0);
  for (int ue = 0; ue < m; ++ue) {
    const int sn = sn_of_ue[ue];
    if (sn == kUnassigned) continue;
    if (sn_is_scbs(sn, n_scbs)) {
      st.served_by_scbs[sn].push_back(ue);
    } else {
      st.members_of[sn_anchor_ue(sn, n_scbs)].push_back(ue);
    }
  }
  for (int ue = 0; ue < m; ++ue)
    st.anchor_active[ue] = st.members_of[ue].empty() ? 0 : 1;
  return st;
}

RateModel::RateModel(const NetworkTopology& topo, const ChannelModel& chan,
                     bool power_split)
    : topo_(&topo),
      n_scbs_(topo.n_scbs()),
      n_ues_(topo.n_ues()),
      power_split_(power_split),
      tau0_(topo.tau0_fraction),
      bandwidth_(topo.bandwidth_hz),
      noise_mw_per_hz_(dbm_to_mw(topo.noise_psd_dbm_hz)) {
  scbs_power_mw_.resize(n_scbs_);
  for (int n = 0; n < n_scbs_; ++n)
    scbs_power_mw_[n] = dbm_to_mw(topo.scbs_tx_power_dbm[n]);
  ue_power_mw_.resize(n_ues_);
  for (int u = 0; u < n_ues_; ++u)
    ue_power_mw_[u] = dbm_to_mw(topo.ue_tx_power_dbm[u]);

  // Cellular gain and path-loss tables.
  Eigen::MatrixXd d(n_scbs_, n_ues_);
  for (int m = 0; m < n_ues_; ++m)
    for (int n = 0; n < n_scbs_; ++n) d(n, m) = topo.scbs_ue_distance(n, m);
  scbs_ue_gain_.resize(n_scbs_, n_ues_);
  kernels::pathloss_gain_batch(d.data(), scbs_ue_gain_.data(),
                               static_cast<std::size_t>(d.size()),
                               chan.cellular.a, chan.cellular.b);
  scbs_ue_pl_db_.resize(n_scbs_, n_ues_);
  for (int m = 0; m < n_ues_; ++m)
    for (int n = 0; n < n_scbs_; ++n)
      scbs_ue_pl_db_(n, m) =
          chan.cellular.a + chan.cellular.b * std::log10(d(n, m) / 1000.0);

  // UE-to-UE gains under the configured LOS rule.
  Eigen::MatrixXd dd(n_ues_, n_ues_);
  for (int b = 0; b < n_ues_; ++b)
    for (int a = 0; a < n_ues_; ++a)
      dd(a, b) = a == b ? topo.min_distance_m : topo.ue_ue_distance(a, b);
  ue_ue_gain_.resize(n_ues_, n_ues_);
  if (chan.d2d_rule == D2dLosRule::Threshold) {
    Eigen::MatrixXd los(n_ues_, n_ues_), nlos(n_ues_, n_ues_);
    kernels::pathloss_gain_batch(dd.data(), los.data(),
                                 static_cast<std::size_t>(dd.size()),
                                 chan.d2d_los.a, chan.d2d_los.b);
    kernels::pathloss_gain_batch(dd.data(), nlos.data(),
                                 static_cast<std::size_t>(dd.size()),
                                 chan.d2d_nlos.a, chan.d2d_nlos.b);
    for (Eigen::Index i = 0; i < dd.size(); ++i)
      ue_ue_gain_.data()[i] = dd.data()[i] <= chan.d2d_los_threshold_m
                                  ? los.data()[i]
                                  : nlos.data()[i];
  } else {
    const PathLossCoeff c = chan.coeff(chan.d2d_kind(0.0));
    kernels::pathloss_gain_batch(dd.data(), ue_ue_gain_.data(),
                                 static_cast<std::size_t>(dd.size()), c.a, c.b);
  }
  ue_ue_gain_.diagonal().setZero();

  total_scbs_rx_mw_.resize(n_ues_);
  for (int m = 0; m < n_ues_; ++m)
    total_scbs_rx_mw_[m] = kernels::reduce_dot(
        scbs_power_mw_.data(), scbs_ue_gain_.col(m).data(),
        static_cast<std::size_t>(n_scbs_));
}

double RateModel::rssi_dbm(int scbs, int ue) const {
  return topo_->scbs_tx_power_dbm[scbs] - scbs_ue_pl_db_(scbs, ue);
}

int RateModel::max_rssi_anchor(int ue) const {
  int best = 0;
  double best_rssi = rssi_dbm(0, ue);
  for (int n = 1; n < n_scbs_; ++n) {
    const double r = rssi_dbm(n, ue);
    if (r > best_rssi) {
      best = n;
      best_rssi = r;
    }
  }
  return best;
}

std::vector<int> RateModel::anchors() const {
  std::vector<int> a(static_cast<std::size_t>(n_ues_));
  for (int m = 0; m < n_ues_; ++m) a[static_cast<std::size_t>(m)] = max_rssi_anchor(m);
  return a;
}

double RateModel::cellular_interference_mw(int n, int ue,
                                           const ServiceState& st) const {
  if (!power_split_) {
    const double own = scbs_power_mw_[n] * scbs_ue_gain_(n, ue);
    const double intf = total_scbs_rx_mw_[ue] - own;
    return intf > 0.0 ? intf : 0.0;
  }
  double intf = 0.0;
  for (int k = 0; k < n_scbs_; ++k) {
    if (k == n) continue;
    const std::size_t load = st.served_by_scbs[k].size();
    if (load == 0) continue;
    intf += scbs_power_mw_[k] / static_cast<double>(load) * scbs_ue_gain_(k, ue);
  }
  return intf;
}

double RateModel::cellular_rate(int n, int ue, const ServiceState& st) const {
  const std::size_t load = st.served_by_scbs[n].size();
  if (load == 0)
    throw DomainError("cellular_rate: SCBS serves no UEs under this matching");
  const double subband = bandwidth_ / static_cast<double>(load);
  const double power =
      power_split_ ? scbs_power_mw_[n] / static_cast<double>(load)
                   : scbs_power_mw_[n];
  const double signal = power * scbs_ue_gain_(n, ue);
  const double denom =
      noise_mw_per_hz_ * subband + cellular_interference_mw(n, ue, st);
  return tau0_ * subband * kernels::log2_one(1.0 + signal / denom);
}

double RateModel::cellular_rate_max(int n, int ue, const ServiceState& st) const {
  const std::size_t load = st.served_by_scbs[n].size();
  if (load == 0)
    throw DomainError("cellular_rate_max: SCBS serves no UEs under this matching");
  const double subband = bandwidth_ / static_cast<double>(load);
  const double power =
      power_split_ ? scbs_power_mw_[n] / static_cast<double>(load)
                   : scbs_power_mw_[n];
  const double signal = power * scbs_ue_gain_(n, ue);
  return tau0_ * subband * kernels::log2_one(1.0 + signal / (noise_mw_per_hz_ * subband));
}

double RateModel::d2d_interference_mw(int anchor_ue, int member,
                                      const ServiceState& st) const {
  double intf = 0.0;
  for (int i = 0; i < n_ues_; ++i) {
    if (i == anchor_ue || !st.anchor_active[i]) continue;
    intf += ue_power_mw_[i] * ue_ue_gain_(i, member);
  }
  return intf;
}

double RateModel::broadcast_rate(int anchor_ue, const ServiceState& st) const {
  const auto& members = st.members_of[anchor_ue];
  if (members.empty())
    throw DomainError("broadcast_rate: anchor UE has no members");
  const double tau1 = 1.0 - tau0_;
  const double noise = noise_mw_per_hz_ * bandwidth_;
  std::array<double, 64> sinr_buf;
  std::vector<double> sinr_heap;
  double* sinr = sinr_buf.data();
  if (members.size() > sinr_buf.size()) {
    sinr_heap.resize(members.size());
    sinr = sinr_heap.data();
  }
  for (std::size_t k = 0; k < members.size(); ++k) {
    const int m = members[k];
    const double signal = ue_power_mw_[anchor_ue] * ue_ue_gain_(anchor_ue, m);
    sinr[k] = signal / (noise + d2d_interference_mw(anchor_ue, m, st));
  }
  std::array<double, 64> rate_buf;
  std::vector<double> rate_heap;
  double* rate = rate_buf.data();
  if (members.size() > rate_buf.size()) {
    rate_heap.resize(members.size());
    rate = rate_heap.data();
  }
  kernels::shannon_batch(sinr, rate, members.size(), tau1 * bandwidth_);
  double r = rate[0];
  for (std::size_t k = 1; k < members.size(); ++k) r = std::min(r, rate[k]);
  return r;
}

double RateModel::d2d_end_to_end_rate(int n, int anchor_ue, int member,
                                      const ServiceState& st) const {
  if (st.sn_of_ue[anchor_ue] != sn_from_scbs(n))
    throw DomainError("d2d_end_to_end_rate: anchor is not served by this SCBS");
  if (st.sn_of_ue[member] != sn_from_anchor_ue(anchor_ue, n_scbs_))
    throw DomainError("d2d_end_to_end_rate: UE is not a member of this anchor");
  return std::min(cellular_rate(n, anchor_ue, st), broadcast_rate(anchor_ue, st));
}

double RateModel::per_ue_rate(int ue, const ServiceState& st) const {
  const int sn = st.sn_of_ue[ue];
  if (sn == kUnassigned) return 0.0;
  if (sn_is_scbs(sn, n_scbs_)) return cellular_rate(sn, ue, st);
  const int anchor = sn_anchor_ue(sn, n_scbs_);
  return d2d_end_to_end_rate(st.sn_of_ue[anchor], anchor, ue, st);
}

double RateModel::scbs_load(int n, const ServiceState& st) const {
  double load = 0.0;
  for (const int m : st.served_by_scbs[n]) {
    const double rmax = cellular_rate_max(n, m, st);
    if (rmax > 0.0) load += cellular_rate(n, m, st) / rmax;
  }
  return std::clamp(load, 0.0, 1.0);
}

double RateModel::cluster_load(std::span<const int> scbs_ids,
                               const ServiceState& st) const {
  if (scbs_ids.empty()) throw DomainError("cluster_load: empty cluster");
  double sum = 0.0;
  for (const int n : scbs_ids) sum += scbs_load(n, st);
  return sum / static_cast<double>(scbs_ids.size());
}

LinkRateTable LinkRateTable::build(const RateModel& model,
                                   const ServiceState& st) {
  const int n_scbs = model.n_scbs();
  const int n_ues = model.n_ues();
  LinkRateTable t;
  t.rate_scbs_ue = Eigen::MatrixXd::Zero(n_scbs, n_ues);
  t.rate_broadcast = Eigen::VectorXd::Zero(n_ues);
  t.rate_d2d_end_to_end = Eigen::MatrixXd::Zero(n_scbs, n_ues);
  for (int n = 0; n < n_scbs; ++n)
    for (const int m : st.served_by_scbs[n])
      t.rate_scbs_ue(n, m) = model.cellular_rate(n, m, st);
  for (int i = 0; i < n_ues; ++i) {
    if (!st.anchor_active[i]) continue;
    t.rate_broadcast[i] = model.broadcast_rate(i, st);
    const int n = st.sn_of_ue[i];
    for (const int m : st.members_of[i])
      t.rate_d2d_end_to_end(n, m) = model.d2d_end_to_end_rate(n, i, m, st);
  }
  return t;
}

}  // namespace scnsim
