#include "scnsim/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scnsim/errors.hpp"
#include "scnsim/kernels.hpp"

namespace scnsim {

namespace {
constexpr double kTieClamp = 1.0 - 1e-6;  // guards the 1/(1-w) singularity
}

int ClusterInstance::ue_local(int ue) const {
  return ue >= 0 && ue < static_cast<int>(ue_local_.size())
             ? ue_local_[static_cast<std::size_t>(ue)]
             : -1;
}

int ClusterInstance::sn_local(int sn) const {
  return sn >= 0 && sn < static_cast<int>(sn_local_.size())
             ? sn_local_[static_cast<std::size_t>(sn)]
             : -1;
}

bool ClusterInstance::candidate_allowed(int ue, int sn) const {
  const int lu = ue_local(ue);
  if (lu < 0) return false;
  const auto& cands = candidate_sns[static_cast<std::size_t>(lu)];
  return std::find(cands.begin(), cands.end(), sn) != cands.end();
}

ClusterInstance ClusterInstance::build(int cluster_id,
                                       const ClusterPartition& part,
                                       const SocialGraph& graph,
                                       const NetworkTopology& topo,
                                       const ImportantSet& important,
                                       std::span<const int> anchors_rssi) {
  ClusterInstance c;
  c.cluster_id = cluster_id;
  c.n_scbs_total = topo.n_scbs();
  c.scbs = part.clusters[static_cast<std::size_t>(cluster_id)];
  c.ues = part.ue_members[static_cast<std::size_t>(cluster_id)];
  std::sort(c.ues.begin(), c.ues.end());

  for (const int ue : c.ues)
    if (important.is_important(ue)) c.anchors.push_back(ue);

  c.sn_handles.reserve(c.scbs.size() + c.anchors.size());
  for (const int n : c.scbs) c.sn_handles.push_back(sn_from_scbs(n));
  for (const int i : c.anchors)
    c.sn_handles.push_back(sn_from_anchor_ue(i, c.n_scbs_total));

  c.ue_local_.assign(static_cast<std::size_t>(topo.n_ues()), -1);
  for (std::size_t k = 0; k < c.ues.size(); ++k)
    c.ue_local_[static_cast<std::size_t>(c.ues[k])] = static_cast<int>(k);
  c.sn_local_.assign(static_cast<std::size_t>(topo.n_scbs() + topo.n_ues()), -1);
  for (std::size_t k = 0; k < c.sn_handles.size(); ++k)
    c.sn_local_[static_cast<std::size_t>(c.sn_handles[k])] = static_cast<int>(k);

  c.is_anchor.assign(c.ues.size(), 0);
  c.candidate_sns.resize(c.ues.size());
  for (std::size_t k = 0; k < c.ues.size(); ++k) {
    const int ue = c.ues[k];
    if (important.is_important(ue)) {
      c.is_anchor[k] = 1;
      c.candidate_sns[k] = {sn_from_scbs(anchors_rssi[static_cast<std::size_t>(ue)])};
      continue;
    }
    c.movable.push_back(ue);
    // serving nodes in the UE's vicinity: in-coverage cluster SCBSs (the
    // max-RSSI anchor always qualifies) and socially tied in-range anchors
    const int home = anchors_rssi[static_cast<std::size_t>(ue)];
    for (const int n : c.scbs)
      if (n == home || topo.scbs_ue_distance(n, ue) <= topo.scbs_radius_m)
        c.candidate_sns[k].push_back(sn_from_scbs(n));
    for (const int i : c.anchors)
      if (d2d_link_exists(ue, i, graph, topo))
        c.candidate_sns[k].push_back(sn_from_anchor_ue(i, c.n_scbs_total));
  }
  return c;
}

Association initial_association(std::span<const int> anchors_rssi) {
  Association assoc(anchors_rssi.size());
  for (std::size_t m = 0; m < anchors_rssi.size(); ++m)
    assoc[m] = sn_from_scbs(anchors_rssi[m]);
  return assoc;
}

void check_matching_valid(const ClusterInstance& c, const Association& assoc) {
  for (std::size_t k = 0; k < c.ues.size(); ++k) {
    const int ue = c.ues[k];
    const int sn = assoc[static_cast<std::size_t>(ue)];
    if (!c.candidate_allowed(ue, sn))
      throw DomainError("matching: UE " + std::to_string(ue) +
                        " sits on a non-candidate SN");
    if (!sn_is_scbs(sn, c.n_scbs_total)) {
      const int anchor = sn_anchor_ue(sn, c.n_scbs_total);
      const int anchor_sn = assoc[static_cast<std::size_t>(anchor)];
      if (!sn_is_scbs(anchor_sn, c.n_scbs_total))
        throw DomainError("matching: anchor UE is not served by an SCBS");
    }
  }
}

MatchingEvaluator::MatchingEvaluator(const RateModel& model,
                                     const SocialMatrices& social,
                                     const SocialGraph& graph)
    : model_(&model), social_(&social), graph_(&graph) {}

double MatchingEvaluator::ue_utility_with_state(int ue,
                                                const ServiceState& st) const {
  const int n_scbs = model_->n_scbs();
  const int sn = st.sn_of_ue[static_cast<std::size_t>(ue)];
  if (sn == kUnassigned) return 0.0;
  if (!sn_is_scbs(sn, n_scbs)) {
    const int anchor = sn_anchor_ue(sn, n_scbs);
    return model_->d2d_end_to_end_rate(
        st.sn_of_ue[static_cast<std::size_t>(anchor)], anchor, ue, st);
  }
  const double own = model_->cellular_rate(sn, ue, st);
  const auto& members = st.members_of[static_cast<std::size_t>(ue)];
  if (members.empty()) return own;
  // anchor role: own link plus socially amplified member rates
  const double relay = std::min(own, model_->broadcast_rate(ue, st));
  double social_term = 0.0;
  for (const int m : members) {
    if (!graph_->has_edge(ue, m)) continue;
    const double w = std::min(social_->w(ue, m), kTieClamp);
    social_term += relay / (1.0 - w);
  }
  return own + social_term;
}

double MatchingEvaluator::ue_utility(int ue, const Association& assoc) const {
  const ServiceState st = ServiceState::build(assoc, model_->n_scbs());
  return ue_utility_with_state(ue, st);
}

double MatchingEvaluator::total_welfare(const Association& assoc) const {
  const ServiceState st = ServiceState::build(assoc, model_->n_scbs());
  double total = 0.0;
  for (int ue = 0; ue < model_->n_ues(); ++ue)
    total += ue_utility_with_state(ue, st);
  return total;
}

ClusterEval MatchingEvaluator::evaluate(const ClusterInstance& c,
                                        const Association& assoc) const {
  const ServiceState st = ServiceState::build(assoc, model_->n_scbs());
  ClusterEval ev;
  ev.ue_utility.resize(c.ues.size());
  for (std::size_t k = 0; k < c.ues.size(); ++k)
    ev.ue_utility[k] = ue_utility_with_state(c.ues[k], st);
  ev.sn_utility.assign(c.sn_handles.size(), 0.0);
  for (std::size_t k = 0; k < c.ues.size(); ++k) {
    const int sn = assoc[static_cast<std::size_t>(c.ues[k])];
    const int local = c.sn_local(sn);
    if (local >= 0) ev.sn_utility[static_cast<std::size_t>(local)] += ev.ue_utility[k];
  }
  ev.welfare = kernels::reduce_sum(ev.ue_utility.data(), ev.ue_utility.size());
  return ev;
}

double MatchingEvaluator::welfare(const ClusterInstance& c,
                                  const Association& assoc) const {
  return evaluate(c, assoc).welfare;
}

bool prefers(const MatchingEvaluator& ev, const ClusterInstance& c, int ue,
             int sn_a, int sn_b, const Association& base) {
  (void)c;
  Association wa = base;
  wa[static_cast<std::size_t>(ue)] = sn_a;
  Association wb = base;
  wb[static_cast<std::size_t>(ue)] = sn_b;
  return ev.ue_utility(ue, wa) > ev.ue_utility(ue, wb);
}

Association apply_swap(const Association& assoc, int m1, int m2) {
  Association out = assoc;
  std::swap(out[static_cast<std::size_t>(m1)], out[static_cast<std::size_t>(m2)]);
  return out;
}

SwapReject swap_feasibility(const ClusterInstance& c, const Association& assoc,
                            int m1, int m2) {
  if (m1 == m2) return SwapReject::SameUe;
  const int l1 = c.ue_local(m1);
  const int l2 = c.ue_local(m2);
  if (l1 < 0 || l2 < 0) return SwapReject::OutsideCluster;
  if (c.is_anchor[static_cast<std::size_t>(l1)] ||
      c.is_anchor[static_cast<std::size_t>(l2)])
    return SwapReject::AnchorImmovable;
  const int sn1 = assoc[static_cast<std::size_t>(m1)];
  const int sn2 = assoc[static_cast<std::size_t>(m2)];
  if (!c.candidate_allowed(m1, sn2) || !c.candidate_allowed(m2, sn1))
    return SwapReject::TargetInfeasible;
  return SwapReject::None;
}

double accept_probability(double gamma_old, double gamma_new, double theta,
                          double scale, PtSign sign) {
  const double denom = std::max(std::abs(scale), 1e-12);
  double delta = (gamma_new - gamma_old) / denom;
  if (sign == PtSign::Literal) delta = -delta;
  return 1.0 / (1.0 + std::exp(-theta * delta));
}

bool swap_approved(const ClusterInstance& c, const ClusterEval& before,
                   const ClusterEval& after, int m1, int m2, int sn1,
                   int sn2) {
  const int l1 = c.ue_local(m1);
  const int l2 = c.ue_local(m2);
  const int p1 = c.sn_local(sn1);
  const int p2 = c.sn_local(sn2);
  const double u_before[4] = {
      before.ue_utility[static_cast<std::size_t>(l1)],
      before.ue_utility[static_cast<std::size_t>(l2)],
      before.sn_utility[static_cast<std::size_t>(p1)],
      before.sn_utility[static_cast<std::size_t>(p2)]};
  const double u_after[4] = {
      after.ue_utility[static_cast<std::size_t>(l1)],
      after.ue_utility[static_cast<std::size_t>(l2)],
      after.sn_utility[static_cast<std::size_t>(p1)],
      after.sn_utility[static_cast<std::size_t>(p2)]};
  bool strict = false;
  for (int i = 0; i < 4; ++i) {
    if (u_after[i] < u_before[i]) return false;
    if (u_after[i] > u_before[i]) strict = true;
  }
  return strict;
}

namespace {

struct ProposalSpace {
  std::vector<std::pair<int, int>> pairs;  // swappable UE pairs
  std::vector<std::pair<int, int>> moves;  // (ue, target sn)
};

ProposalSpace build_proposals(const ClusterInstance& c, bool allow_moves) {
  ProposalSpace ps;
  for (std::size_t i = 0; i < c.movable.size(); ++i)
    for (std::size_t j = i + 1; j < c.movable.size(); ++j)
      ps.pairs.emplace_back(c.movable[i], c.movable[j]);
  if (allow_moves) {
    for (const int ue : c.movable) {
      const int lu = c.ue_local(ue);
      for (const int sn : c.candidate_sns[static_cast<std::size_t>(lu)])
        ps.moves.emplace_back(ue, sn);
    }
  }
  return ps;
}

}  // namespace

ClusterRunResult run_cluster_matching(const MatchingEvaluator& ev,
                                      const ClusterInstance& c,
                                      const Association& initial,
                                      const AnnealSchedule& schedule, Rng& rng,
                                      int t_index) {
  check_matching_valid(c, initial);
  ClusterRunResult res;
  Association work = initial;
  ClusterEval cur = ev.evaluate(c, work);
  res.best = work;
  res.gamma_best = cur.welfare;

  const ProposalSpace ps = build_proposals(c, schedule.allow_moves);
  const std::size_t space = ps.pairs.size() + ps.moves.size();
  if (space == 0) {
    res.trace.push_back({0, t_index, c.cluster_id, 0, cur.welfare,
                         res.gamma_best, 0, 0});
    return res;
  }

  constexpr int kMaxDrawAttempts = 64;
  for (int count = 1; count <= schedule.count_max; ++count) {
    const double theta =
        1.0 - static_cast<double>(count) / static_cast<double>(schedule.count_max);

    // draw a feasible proposal; infeasible draws do not consume the count
    int m1 = -1, m2 = -1, move_ue = -1, move_sn = -1;
    bool is_swap = false;
    bool found = false;
    auto try_pick = [&](std::size_t pick) {
      if (pick < ps.pairs.size()) {
        const auto [a, b] = ps.pairs[pick];
        if (work[static_cast<std::size_t>(a)] == work[static_cast<std::size_t>(b)])
          return false;
        if (swap_feasibility(c, work, a, b) != SwapReject::None) return false;
        m1 = a;
        m2 = b;
        is_swap = true;
        return true;
      }
      const auto [ue, sn] = ps.moves[pick - ps.pairs.size()];
      if (work[static_cast<std::size_t>(ue)] == sn) return false;
      move_ue = ue;
      move_sn = sn;
      is_swap = false;
      return true;
    };
    for (int attempt = 0; attempt < kMaxDrawAttempts && !found; ++attempt)
      found = try_pick(rng.uniform_index(space));
    if (!found) {
      // feasible proposals may be rare; scan from a random offset before
      // concluding that none exists
      const std::size_t start = rng.uniform_index(space);
      for (std::size_t off = 0; off < space && !found; ++off)
        found = try_pick((start + off) % space);
    }
    if (!found) break;  // nothing feasible remains

    // apply candidate in place
    int undo1 = 0, undo2 = 0;
    if (is_swap) {
      undo1 = work[static_cast<std::size_t>(m1)];
      undo2 = work[static_cast<std::size_t>(m2)];
      work[static_cast<std::size_t>(m1)] = undo2;
      work[static_cast<std::size_t>(m2)] = undo1;
    } else {
      undo1 = work[static_cast<std::size_t>(move_ue)];
      work[static_cast<std::size_t>(move_ue)] = move_sn;
    }
    const ClusterEval cand = ev.evaluate(c, work);
    ++res.proposals;

    if (cand.welfare > res.gamma_best) {
      res.gamma_best = cand.welfare;
      res.best = work;
      res.best_changed = true;
    }

    const double p = accept_probability(cur.welfare, cand.welfare, theta,
                                        res.gamma_best, schedule.pt_sign);
    const bool accept = rng.u01() < p;
    if (accept) {
      if (is_swap) {
        // Definition-3 instrumentation on accepted swaps
        if (swap_approved(c, cur, cand, m1, m2, undo1, undo2)) {
          ++res.approved.accepted;
          if (!(cand.welfare > cur.welfare)) ++res.approved.violations;
        }
      }
      cur = cand;
      ++res.accepted;
    } else {
      if (is_swap) {
        work[static_cast<std::size_t>(m1)] = undo1;
        work[static_cast<std::size_t>(m2)] = undo2;
      } else {
        work[static_cast<std::size_t>(move_ue)] = undo1;
      }
    }
    res.trace.push_back({0, t_index, c.cluster_id, count, cur.welfare,
                         res.gamma_best, accept ? 1 : 0, res.proposals});
  }

  // Greedy phase: climb from the best association until no feasible swap or
  // move improves the cluster welfare, so the run ends in a local maximum.
  work = res.best;
  double gamma = res.gamma_best;
  int polish_step = 0;
  for (;;) {
    double best_gain_welfare = gamma;
    int best_kind = -1;  // 0 swap, 1 move
    std::pair<int, int> best_action{-1, -1};
    for (const auto& [a, b] : ps.pairs) {
      if (work[static_cast<std::size_t>(a)] == work[static_cast<std::size_t>(b)])
        continue;
      if (swap_feasibility(c, work, a, b) != SwapReject::None) continue;
      Association cand = apply_swap(work, a, b);
      const double wlf = ev.welfare(c, cand);
      ++res.polish_evals;
      if (wlf > best_gain_welfare) {
        best_gain_welfare = wlf;
        best_kind = 0;
        best_action = {a, b};
      }
    }
    for (const auto& [ue, sn] : ps.moves) {
      if (work[static_cast<std::size_t>(ue)] == sn) continue;
      Association cand = work;
      cand[static_cast<std::size_t>(ue)] = sn;
      const double wlf = ev.welfare(c, cand);
      ++res.polish_evals;
      if (wlf > best_gain_welfare) {
        best_gain_welfare = wlf;
        best_kind = 1;
        best_action = {ue, sn};
      }
    }
    if (best_kind < 0) break;
    if (best_kind == 0) {
      work = apply_swap(work, best_action.first, best_action.second);
    } else {
      work[static_cast<std::size_t>(best_action.first)] = best_action.second;
    }
    gamma = best_gain_welfare;
    ++polish_step;
    if (gamma > res.gamma_best) {
      res.gamma_best = gamma;
      res.best = work;
      res.best_changed = true;
    }
    res.trace.push_back({0, t_index, c.cluster_id, schedule.count_max + polish_step,
                         gamma, res.gamma_best, 1, res.proposals});
  }
  return res;
}

StabilityResult is_pairwise_stable(const MatchingEvaluator& ev,
                                   const ClusterInstance& c,
                                   const Association& assoc) {
  const ClusterEval before = ev.evaluate(c, assoc);
  StabilityResult r;
  for (std::size_t i = 0; i < c.movable.size(); ++i) {
    for (std::size_t j = i + 1; j < c.movable.size(); ++j) {
      const int m1 = c.movable[i];
      const int m2 = c.movable[j];
      const int sn1 = assoc[static_cast<std::size_t>(m1)];
      const int sn2 = assoc[static_cast<std::size_t>(m2)];
      if (sn1 == sn2) continue;
      if (swap_feasibility(c, assoc, m1, m2) != SwapReject::None) continue;
      const Association swapped = apply_swap(assoc, m1, m2);
      const ClusterEval after = ev.evaluate(c, swapped);
      if (swap_approved(c, before, after, m1, m2, sn1, sn2)) {
        r.stable = false;
        r.witness_m1 = m1;
        r.witness_m2 = m2;
        return r;
      }
    }
  }
  return r;
}

OracleResult brute_force_optimum(const MatchingEvaluator& ev,
                                 const ClusterInstance& c,
                                 const Association& context) {
  if (c.ues.size() > 8)
    throw OracleSizeError("brute_force_optimum: more than 8 UEs in cluster");
  if (c.sn_handles.size() > 4)
    throw OracleSizeError("brute_force_optimum: more than 4 SNs in cluster");
  OracleResult out;
  out.welfare = -std::numeric_limits<double>::infinity();
  Association work = context;
  // anchors stay pinned; enumerate the movable UEs' candidate lists
  std::vector<int> slots;
  for (const int ue : c.movable) slots.push_back(ue);

  auto recurse = [&](auto&& self, std::size_t depth) -> void {
    if (depth == slots.size()) {
      const double wlf = ev.welfare(c, work);
      ++out.evaluated;
      if (wlf > out.welfare) {
        out.welfare = wlf;
        out.best = work;
      }
      return;
    }
    const int ue = slots[depth];
    const int lu = c.ue_local(ue);
    for (const int sn : c.candidate_sns[static_cast<std::size_t>(lu)]) {
      work[static_cast<std::size_t>(ue)] = sn;
      self(self, depth + 1);
    }
  };
  recurse(recurse, 0);
  if (out.best.empty()) {  // no movable UE: the context itself is the optimum
    out.best = context;
    out.welfare = ev.welfare(c, context);
    out.evaluated = 1;
  }
  return out;
}

double network_welfare(const MatchingEvaluator& ev,
                       std::span<const ClusterInstance> clusters,
                       const Association& assoc) {
  double total = 0.0;
  for (const ClusterInstance& c : clusters) total += ev.welfare(c, assoc);
  return total;
}

}  // namespace scnsim
