#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "dzo/rng.hpp"

namespace dzo {

/// Undirected simple graph on vertices {0, ..., n-1}.
///
/// Edges are stored normalized (i < j) and sorted. Construction rejects
/// self-loops and out-of-range endpoints; connectivity is NOT enforced here
/// (use is_connected), but every named builder below returns a connected
/// graph.
class Graph {
 public:
  Graph() = default;  // empty; assign from a builder before use

  static Graph from_edges(int n, std::vector<std::pair<int, int>> edges);

  int num_vertices() const { return n_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int v) const { return adj_[v]; }
  int degree(int v) const { return static_cast<int>(adj_[v].size()); }
  bool has_edge(int i, int j) const;

 private:
  int n_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adj_;
};

/// Cycle 0-1-...-(n-1)-0. For n = 2 this degenerates to the single edge.
Graph build_ring(int n);

/// Path 0-1-...-(n-1).
Graph build_path(int n);

/// Random geometric graph on the unit 2-sphere: n points sampled uniformly,
/// vertices joined when their spherical distance is strictly below
/// max_angle. The whole point set is resampled until the graph comes out
/// connected (at most `max_attempts` tries), which keeps the point
/// distribution uniform conditional on connectivity.
Graph build_geometric_sphere(int n, double max_angle, std::uint64_t seed,
                             int max_attempts = 1000);

/// True iff breadth-first traversal from vertex 0 reaches every vertex.
bool is_connected(const Graph& g);

/// Doubly stochastic, symmetric consensus matrix together with its
/// contraction factor rho = ||W - (1/n)11^T||_2 < 1.
struct MixingMatrix {
  Eigen::MatrixXd w;
  double rho = 1.0;
};

/// Metropolis weights: W_ij = 1/(1 + max(deg_i, deg_j)) on edges,
/// W_ii = 1 - sum_j W_ij. Requires a connected graph.
MixingMatrix metropolis_weights(const Graph& g);

/// Lazy variant (I + W_metropolis)/2. Its rho satisfies
/// rho <= 1 - 1/(71 n^2).
MixingMatrix lazy_metropolis_weights(const Graph& g);

/// Spectral norm of W - (1/n)11^T for a symmetric doubly stochastic W,
/// computed by power iteration with the all-ones direction deflated every
/// step. Start vector is derived from `seed`; converges on relative
/// eigenvalue change <= 1e-10 with a 10000-iteration cap.
double spectral_gap(const Eigen::MatrixXd& w, std::uint64_t seed = 0);

/// One consensus round: row i of the result is sum_j W_ij * row j.
/// Preserves the column means (double stochasticity).
Eigen::MatrixXd consensus_apply(const MixingMatrix& w,
                                const Eigen::MatrixXd& rows);

}  // namespace dzo
