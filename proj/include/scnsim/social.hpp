#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "scnsim/config.hpp"
#include "scnsim/geometry.hpp"
#include "scnsim/topology.hpp"

namespace scnsim {

/// Undirected simple graph over UEs (vertices 0..M-1).
class SocialGraph {
 public:
  explicit SocialGraph(int n);

  void add_edge(int u, int v);  // DomainError on self loop; duplicates ignored
  bool has_edge(int u, int v) const { return adj_mat_[idx(u, v)] != 0; }
  int degree(int v) const { return static_cast<int>(adj_[v].size()); }
  const std::vector<int>& neighbors(int v) const { return adj_[v]; }
  int size() const { return n_; }
  int edge_count() const { return edges_; }

  static SocialGraph erdos_renyi(int n, double p, std::uint64_t seed);
  static SocialGraph watts_strogatz(int n, int k, double rewire,
                                    std::uint64_t seed);

  /// One "u v" pair per line, 0-indexed.
  static SocialGraph from_edge_list(int n, std::istream& in);
  void to_edge_list(std::ostream& out) const;

 private:
  std::size_t idx(int u, int v) const {
    return static_cast<std::size_t>(u) * static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(v);
  }
  int n_ = 0;
  int edges_ = 0;
  std::vector<std::vector<int>> adj_;  // sorted
  std::vector<char> adj_mat_;
};

/// Common-neighbor similarity: q(u,v) = sum over shared neighbors w of
/// 1/degree(w); zero diagonal, symmetric.
Eigen::MatrixXd raw_similarity(const SocialGraph& g);

/// Column-max normalization; all-zero columns stay zero. When symmetrize is
/// set (the default) the result is averaged with its transpose.
Eigen::MatrixXd normalize_saw(const Eigen::MatrixXd& q, bool symmetrize = true);

/// Exact rationals for the small-graph betweenness path (int64 num/den).
struct Rational {
  long long num = 0;
  long long den = 1;
  Rational() = default;
  Rational(long long n, long long d);
  Rational& operator+=(const Rational& o);
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Raw edge flow: for each edge, the sum over unordered vertex pairs of the
/// fraction of shortest paths crossing it. Brandes accumulation, doubles.
Eigen::MatrixXd edge_flow(const SocialGraph& g);

/// Same quantity in exact rational arithmetic via per-pair path counting;
/// OracleSizeError for graphs larger than 16 vertices.
std::vector<std::vector<Rational>> edge_flow_exact(const SocialGraph& g);

/// Normalized edge betweenness centrality matrix.
Eigen::MatrixXd edge_betweenness(const SocialGraph& g,
                                 BetweennessNorm norm = BetweennessNorm::SquaredCount);

/// W = alpha*S + beta*A; ConfigError unless alpha+beta == 1, both >= 0.
Eigen::MatrixXd social_distance(const Eigen::MatrixXd& s,
                                const Eigen::MatrixXd& a, double alpha,
                                double beta);

/// X = eps * W / pairwise distance, zero diagonal.
Eigen::MatrixXd weighted_cost(const Eigen::MatrixXd& w,
                              const Eigen::MatrixXd& dist, double eps);
Eigen::MatrixXd pairwise_distances(std::span<const Vec2> pos, double d_min);

/// Candidates ranked by aggregate weighted cost (descending, ties by lowest
/// id). `ranked` is empty when there are no candidates.
struct Election {
  std::vector<int> ranked;
  std::vector<double> scores;  // aligned with ranked
  int elected() const { return ranked.empty() ? -1 : ranked.front(); }
};
Election rank_candidates(const Eigen::MatrixXd& x, std::span<const int> candidates);

/// Per-SCBS anchor-node election result.
struct ImportantSet {
  std::vector<std::vector<int>> ranked_per_scbs;   // full candidate rankings
  std::vector<std::vector<int>> elected_per_scbs;  // up to k per SCBS, distinct
  std::vector<int> all() const;                    // flattened, ascending
  bool is_important(int ue) const;
};

/// Elects up to `per_scbs` UEs per SCBS among UEs anchored to it and inside
/// its coverage radius. SCBSs are processed in id order; a UE already elected
/// for an earlier SCBS is skipped so elected UEs stay distinct.
ImportantSet elect_important_set(const Eigen::MatrixXd& x,
                                 const NetworkTopology& topo,
                                 std::span<const int> anchors, int per_scbs);

bool d2d_link_exists(int m, int i, const SocialGraph& g,
                     const NetworkTopology& topo);

/// All social matrices of one scenario.
struct SocialMatrices {
  Eigen::MatrixXd q, s, a, w, x;
  double alpha = 0.5, beta = 0.5, epsilon = 1.0;
};
SocialMatrices build_social_matrices(const SocialGraph& g,
                                     const NetworkTopology& topo,
                                     const ScenarioConfig& cfg);

void write_matrix_csv(const Eigen::MatrixXd& m, std::ostream& out);

}  // namespace scnsim
