#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "scnsim/errors.hpp"
#include "scnsim/wireless.hpp"

using namespace scnsim;

namespace {

// Single-cell topology builder: one SCBS at the center, UEs at given spots.
NetworkTopology one_cell(std::vector<Vec2> ues, double side = 200.0) {
  NetworkTopology t;
  t.area_side_m = side;
  t.scbs_pos = {{side / 2, side / 2}};
  t.scbs_tx_power_dbm = {23.0};
  t.ue_pos = std::move(ues);
  t.ue_tx_power_dbm.assign(t.ue_pos.size(), 15.0);
  return t;
}

NetworkTopology random_topology(int n_scbs, int n_ues, std::uint64_t seed,
                                double side = 300.0) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, side);
  NetworkTopology t;
  t.area_side_m = side;
  for (int i = 0; i < n_scbs; ++i) t.scbs_pos.push_back({u(gen), u(gen)});
  for (int i = 0; i < n_ues; ++i) t.ue_pos.push_back({u(gen), u(gen)});
  t.scbs_tx_power_dbm.assign(static_cast<std::size_t>(n_scbs), 23.0);
  t.ue_tx_power_dbm.assign(static_cast<std::size_t>(n_ues), 15.0);
  return t;
}

Association all_on_anchor(const RateModel& model) {
  Association a(static_cast<std::size_t>(model.n_ues()));
  for (int ue = 0; ue < model.n_ues(); ++ue)
    a[static_cast<std::size_t>(ue)] = sn_from_scbs(model.max_rssi_anchor(ue));
  return a;
}

constexpr double kNoiseMwPerHz = 3.9810717055349695e-18;  // -174 dBm/Hz

}  // namespace

TEST_CASE("path loss closed form") {
  ChannelModel chan;
  CHECK(chan.path_loss_db(100.0, LinkKind::D2dLos) ==
        doctest::Approx(82.9).epsilon(1e-12));
  CHECK(chan.path_loss_db(1000.0, LinkKind::D2dLos) ==
        doctest::Approx(103.8).epsilon(1e-12));
  CHECK(chan.path_loss_db(100.0, LinkKind::D2dNlos) ==
        doctest::Approx(107.9).epsilon(1e-12));
  CHECK_THROWS_AS(chan.path_loss_db(0.0, LinkKind::Cellular), DomainError);
  CHECK_THROWS_AS(chan.path_loss_db(-5.0, LinkKind::D2dLos), DomainError);
}

TEST_CASE("path loss is monotone in distance for every link kind") {
  ChannelModel chan;
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(0.5, 5000.0);
  for (int k = 0; k < 200; ++k) {
    double d1 = u(gen), d2 = u(gen);
    if (d1 > d2) std::swap(d1, d2);
    for (const LinkKind kind :
         {LinkKind::Cellular, LinkKind::D2dLos, LinkKind::D2dNlos}) {
      CHECK(chan.path_loss_db(d1, kind) <= chan.path_loss_db(d2, kind) + 1e-12);
    }
  }
}

TEST_CASE("link gain inverts path loss") {
  ChannelModel chan;
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(1.0, 3000.0);
  for (int k = 0; k < 100; ++k) {
    const double d = u(gen);
    for (const LinkKind kind :
         {LinkKind::Cellular, LinkKind::D2dLos, LinkKind::D2dNlos}) {
      const double pl = chan.path_loss_db(d, kind);
      const double expected = std::pow(10.0, -pl / 10.0);
      CHECK(link_gain(d, chan.coeff(kind)) ==
            doctest::Approx(expected).epsilon(1e-11));
      CHECK(link_gain(d, chan.coeff(kind)) > 0.0);
    }
  }
  // co-located nodes clamped to the 1 m floor
  const double g = link_gain(1.0, chan.d2d_los);
  const double pl = 103.8 + 20.9 * std::log10(0.001);
  CHECK(g == doctest::Approx(std::pow(10.0, -pl / 10.0)).epsilon(1e-11));
}

TEST_CASE("los rule selection") {
  ChannelModel chan;
  chan.d2d_rule = D2dLosRule::Threshold;
  chan.d2d_los_threshold_m = 25.0;
  CHECK(chan.d2d_kind(10.0) == LinkKind::D2dLos);
  CHECK(chan.d2d_kind(30.0) == LinkKind::D2dNlos);
  chan.d2d_rule = D2dLosRule::AlwaysLos;
  CHECK(chan.d2d_kind(500.0) == LinkKind::D2dLos);
}

TEST_CASE("rssi is transmit power minus cellular path loss") {
  NetworkTopology t = one_cell({{0.0, 100.0}});
  t.scbs_pos = {{0.0, 0.0}};
  ChannelModel chan;
  const RateModel model(t, chan);
  // 23 dBm over 100 m of the default cellular coefficients
  const double pl = 145.4 + 37.5 * std::log10(0.1);
  CHECK(model.rssi_dbm(0, 0) == doctest::Approx(23.0 - pl).epsilon(1e-12));
}

TEST_CASE("rssi ties break toward the lowest SCBS id") {
  NetworkTopology t;
  t.area_side_m = 200.0;
  t.scbs_pos = {{50.0, 100.0}, {150.0, 100.0}};  // equidistant from the UE
  t.scbs_tx_power_dbm = {23.0, 23.0};
  t.ue_pos = {{100.0, 100.0}};
  t.ue_tx_power_dbm = {15.0};
  const RateModel model(t, ChannelModel{});
  CHECK(model.rssi_dbm(0, 0) == model.rssi_dbm(1, 0));
  CHECK(model.max_rssi_anchor(0) == 0);
}

TEST_CASE("cellular rate matches the closed form with a constructed SNR") {
  // flat path loss (b = 0) pins the gain at 1e-10 regardless of distance
  NetworkTopology t = one_cell({{110.0, 100.0}});
  t.bandwidth_hz = 5e6;
  ChannelModel chan;
  chan.cellular = {100.0, 0.0};
  const double gain = 1e-10;
  const double noise = kNoiseMwPerHz * 5e6;
  // choose the transmit power that makes log2(1 + SNR) exactly 10
  const double p_mw = 1023.0 * noise / gain;
  t.scbs_tx_power_dbm = {10.0 * std::log10(p_mw)};
  const RateModel model(t, chan);
  const Association assoc{sn_from_scbs(0)};
  const ServiceState st = ServiceState::build(assoc, 1);
  CHECK(model.cellular_rate(0, 0, st) ==
        doctest::Approx(0.84 * 5e6 * 10.0).epsilon(1e-9));
}

TEST_CASE("zero transmit power gives exactly zero rate") {
  NetworkTopology t = one_cell({{110.0, 100.0}});
  t.scbs_tx_power_dbm = {-std::numeric_limits<double>::infinity()};
  const RateModel model(t, ChannelModel{});
  const ServiceState st = ServiceState::build(Association{sn_from_scbs(0)}, 1);
  CHECK(model.cellular_rate(0, 0, st) == 0.0);
}

TEST_CASE("per-UE sub-band: doubling the cell load halves the pre-log factor") {
  NetworkTopology t1 = one_cell({{120.0, 100.0}});
  NetworkTopology t2 = one_cell({{120.0, 100.0}, {80.0, 100.0}});
  const RateModel m1(t1, ChannelModel{});
  const RateModel m2(t2, ChannelModel{});
  const ServiceState st1 = ServiceState::build(Association{0}, 1);
  const ServiceState st2 = ServiceState::build(Association{0, 0}, 1);
  // closed-form recomputation with the shared-bandwidth noise term
  const double g = m1.scbs_ue_gain(0, 0);
  const double p = std::pow(10.0, 2.3);
  auto expect = [&](double load) {
    const double sub = 5e6 / load;
    return 0.84 * sub * std::log2(1.0 + p * g / (kNoiseMwPerHz * sub));
  };
  CHECK(m1.cellular_rate(0, 0, st1) == doctest::Approx(expect(1)).epsilon(1e-9));
  CHECK(m2.cellular_rate(0, 0, st2) == doctest::Approx(expect(2)).epsilon(1e-9));
  // the pre-log factor is exactly halved at equal SINR
  const double sinr = p * g / (kNoiseMwPerHz * 2.5e6);
  CHECK(m2.cellular_rate(0, 0, st2) / std::log2(1.0 + sinr) ==
        doctest::Approx(0.5 * 0.84 * 5e6).epsilon(1e-9));
}

TEST_CASE("cellular rate errors on an unserved SCBS") {
  NetworkTopology t;
  t.area_side_m = 200.0;
  t.scbs_pos = {{50.0, 100.0}, {150.0, 100.0}};
  t.scbs_tx_power_dbm = {23.0, 23.0};
  t.ue_pos = {{60.0, 100.0}};
  t.ue_tx_power_dbm = {15.0};
  const RateModel model(t, ChannelModel{});
  const ServiceState st = ServiceState::build(Association{0}, 2);
  CHECK_THROWS_AS(model.cellular_rate(1, 0, st), DomainError);
}

TEST_CASE("broadcast rate is the minimum over members") {
  // anchor UE 0 at the center, members at 5 m and 15 m, no other anchors
  NetworkTopology t = one_cell({{100.0, 100.0}, {105.0, 100.0}, {115.0, 100.0}});
  const RateModel model(t, ChannelModel{});
  const int anchor_sn = sn_from_anchor_ue(0, 1);
  SUBCASE("single member") {
    const ServiceState st = ServiceState::build(Association{0, anchor_sn, 0}, 1);
    const double g = model.ue_ue_gain(0, 1);
    const double p = std::pow(10.0, 1.5);
    const double expected =
        0.16 * 5e6 * std::log2(1.0 + p * g / (kNoiseMwPerHz * 5e6));
    CHECK(model.broadcast_rate(0, st) == doctest::Approx(expected).epsilon(1e-9));
  }
  SUBCASE("two members: the farther one pins the rate") {
    const ServiceState st =
        ServiceState::build(Association{0, anchor_sn, anchor_sn}, 1);
    const double g_far = model.ue_ue_gain(0, 2);
    const double p = std::pow(10.0, 1.5);
    const double expected =
        0.16 * 5e6 * std::log2(1.0 + p * g_far / (kNoiseMwPerHz * 5e6));
    CHECK(model.broadcast_rate(0, st) == doctest::Approx(expected).epsilon(1e-9));
  }
  SUBCASE("no members is a domain error") {
    const ServiceState st = ServiceState::build(Association{0, 0, 0}, 1);
    CHECK_THROWS_AS(model.broadcast_rate(0, st), DomainError);
  }
}

TEST_CASE("broadcast rate equals a brute-force per-member minimum under interference") {
  // two active anchors interfere with each other's members
  NetworkTopology t = one_cell({{100, 100}, {104, 100}, {109, 103},
                                {140, 140}, {143, 137}});
  const RateModel model(t, ChannelModel{});
  const int a0 = sn_from_anchor_ue(0, 1);
  const int a3 = sn_from_anchor_ue(3, 1);
  const Association assoc{0, a0, a0, 0, a3};
  const ServiceState st = ServiceState::build(assoc, 1);
  const double p = std::pow(10.0, 1.5);
  const double noise = kNoiseMwPerHz * 5e6;
  auto member_rate = [&](int anchor, int member, int rival) {
    const double intf = p * model.ue_ue_gain(rival, member);
    const double sinr = p * model.ue_ue_gain(anchor, member) / (noise + intf);
    return 0.16 * 5e6 * std::log2(1.0 + sinr);
  };
  const double expected = std::min(member_rate(0, 1, 3), member_rate(0, 2, 3));
  CHECK(model.broadcast_rate(0, st) == doctest::Approx(expected).epsilon(1e-9));

  // deactivating the rival anchor removes its interference: never worse
  const Association quiet{0, a0, a0, 0, 0};
  const ServiceState st_quiet = ServiceState::build(quiet, 1);
  CHECK(model.broadcast_rate(0, st) <=
        model.broadcast_rate(0, st_quiet) * (1.0 + 1e-12));
}

TEST_CASE("end-to-end relay rate is the minimum of its two hops") {
  NetworkTopology t = one_cell({{110.0, 100.0}, {112.0, 100.0}});
  const RateModel model(t, ChannelModel{});
  const int a0 = sn_from_anchor_ue(0, 1);
  const Association assoc{0, a0};
  const ServiceState st = ServiceState::build(assoc, 1);
  const double hop1 = model.cellular_rate(0, 0, st);
  const double hop2 = model.broadcast_rate(0, st);
  CHECK(model.d2d_end_to_end_rate(0, 0, 1, st) ==
        doctest::Approx(std::min(hop1, hop2)).epsilon(1e-12));
  CHECK(model.d2d_end_to_end_rate(0, 0, 1, st) <= hop1 + 1e-9);
  CHECK(model.d2d_end_to_end_rate(0, 0, 1, st) <= hop2 + 1e-9);
  CHECK_THROWS_AS(model.d2d_end_to_end_rate(0, 1, 0, st), DomainError);
}

TEST_CASE("adding an interferer never raises a rate") {
  for (const std::uint64_t seed : {11ULL, 12ULL, 13ULL}) {
    NetworkTopology t = random_topology(4, 10, seed);
    NetworkTopology muted = t;
    muted.scbs_tx_power_dbm[3] = -std::numeric_limits<double>::infinity();
    const RateModel with(t, ChannelModel{});
    const RateModel without(muted, ChannelModel{});
    const Association assoc = all_on_anchor(with);
    // keep the association identical in both worlds
    const ServiceState st = ServiceState::build(assoc, 4);
    for (int ue = 0; ue < 10; ++ue) {
      const int n = assoc[static_cast<std::size_t>(ue)];
      if (n == 3) continue;  // served by the muted SCBS: not comparable
      CHECK(with.cellular_rate(n, ue, st) <=
            without.cellular_rate(n, ue, st) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("scbs load") {
  SUBCASE("no served UEs gives zero load") {
    NetworkTopology t;
    t.area_side_m = 200.0;
    t.scbs_pos = {{50.0, 100.0}, {150.0, 100.0}};
    t.scbs_tx_power_dbm = {23.0, 23.0};
    t.ue_pos = {{55.0, 100.0}};
    t.ue_tx_power_dbm = {15.0};
    const RateModel model(t, ChannelModel{});
    const ServiceState st = ServiceState::build(Association{0}, 2);
    CHECK(model.scbs_load(1, st) == 0.0);
  }
  SUBCASE("interference-free cell saturates at 1") {
    NetworkTopology t = one_cell({{90, 100}, {110, 100}, {100, 90}});
    const RateModel model(t, ChannelModel{});
    const ServiceState st = ServiceState::build(Association{0, 0, 0}, 1);
    CHECK(model.scbs_load(0, st) == doctest::Approx(1.0));
  }
  SUBCASE("per-term ratio stays within [0,1] under interference") {
    NetworkTopology t = random_topology(2, 8, 21);
    const RateModel model(t, ChannelModel{});
    const Association assoc = all_on_anchor(model);
    const ServiceState st = ServiceState::build(assoc, 2);
    for (int ue = 0; ue < 8; ++ue) {
      const int n = assoc[static_cast<std::size_t>(ue)];
      const double ratio = model.cellular_rate(n, ue, st) /
                           model.cellular_rate_max(n, ue, st);
      CHECK(ratio >= 0.0);
      CHECK(ratio <= 1.0 + 1e-12);
    }
    CHECK(model.scbs_load(0, st) >= 0.0);
    CHECK(model.scbs_load(0, st) <= 1.0);
  }
}

TEST_CASE("cluster load is the arithmetic mean of member loads") {
  NetworkTopology t = random_topology(3, 9, 31);
  const RateModel model(t, ChannelModel{});
  const Association assoc = all_on_anchor(model);
  const ServiceState st = ServiceState::build(assoc, 3);
  const std::vector<int> cluster{0, 1, 2};
  const double expected =
      (model.scbs_load(0, st) + model.scbs_load(1, st) + model.scbs_load(2, st)) / 3.0;
  CHECK(model.cluster_load(cluster, st) == doctest::Approx(expected).epsilon(1e-12));
  const std::vector<int> singleton{1};
  CHECK(model.cluster_load(singleton, st) ==
        doctest::Approx(model.scbs_load(1, st)).epsilon(1e-12));
  CHECK_THROWS_AS(model.cluster_load(std::vector<int>{}, st), DomainError);
}

TEST_CASE("link rate table obeys the relay minimum contract") {
  NetworkTopology t = random_topology(3, 8, 41, 150.0);
  const RateModel model(t, ChannelModel{});
  Association assoc = all_on_anchor(model);
  // push two UEs onto a nearby anchor UE to populate the D2D tables
  const int anchor = 0;
  assoc[1] = sn_from_anchor_ue(anchor, 3);
  assoc[2] = sn_from_anchor_ue(anchor, 3);
  const ServiceState st = ServiceState::build(assoc, 3);
  const LinkRateTable table = LinkRateTable::build(model, st);
  const int n = assoc[static_cast<std::size_t>(anchor)];
  for (const int m : {1, 2}) {
    const double e2e = table.rate_d2d_end_to_end(n, m);
    CHECK(e2e <= table.rate_scbs_ue(n, anchor) + 1e-9);
    CHECK(e2e <= table.rate_broadcast[anchor] + 1e-9);
    CHECK(e2e >= 0.0);
  }
  CHECK((table.rate_scbs_ue.array() >= 0.0).all());
}

TEST_CASE("power split mode divides transmit power across the sub-bands") {
  NetworkTopology t = one_cell({{90, 100}, {110, 100}});
  const RateModel split(t, ChannelModel{}, /*power_split=*/true);
  const RateModel full(t, ChannelModel{}, /*power_split=*/false);
  const ServiceState st = ServiceState::build(Association{0, 0}, 1);
  const double g = split.scbs_ue_gain(0, 0);
  const double p = std::pow(10.0, 2.3);
  const double sub = 2.5e6;
  const double expect_split =
      0.84 * sub * std::log2(1.0 + (p / 2.0) * g / (kNoiseMwPerHz * sub));
  CHECK(split.cellular_rate(0, 0, st) ==
        doctest::Approx(expect_split).epsilon(1e-9));
  CHECK(split.cellular_rate(0, 0, st) < full.cellular_rate(0, 0, st));
}
