#include "dzo/network.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "dzo/errors.hpp"

namespace dzo {

namespace {
constexpr double kStochasticTol = 1e-12;
}

Graph Graph::from_edges(int n, std::vector<std::pair<int, int>> edges) {
  if (n < 1) throw InvalidArgument("graph needs at least one vertex");
  Graph g;
  g.n_ = n;
  for (auto& [i, j] : edges) {
    if (i == j) throw InvalidArgument("self-loop at vertex " + std::to_string(i));
    if (i < 0 || j < 0 || i >= n || j >= n)
      throw InvalidArgument("edge endpoint out of range");
    if (i > j) std::swap(i, j);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  g.edges_ = std::move(edges);
  g.adj_.assign(n, {});
  for (auto [i, j] : g.edges_) {
    g.adj_[i].push_back(j);
    g.adj_[j].push_back(i);
  }
  for (auto& nb : g.adj_) std::sort(nb.begin(), nb.end());
  return g;
}

bool Graph::has_edge(int i, int j) const {
  if (i == j) return false;
  if (i > j) std::swap(i, j);
  return std::binary_search(edges_.begin(), edges_.end(), std::make_pair(i, j));
}

Graph build_ring(int n) {
  if (n < 2) throw InvalidArgument("ring needs n >= 2");
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  if (n > 2) edges.emplace_back(n - 1, 0);
  return Graph::from_edges(n, std::move(edges));
}

Graph build_path(int n) {
  if (n < 2) throw InvalidArgument("path needs n >= 2");
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return Graph::from_edges(n, std::move(edges));
}

Graph build_geometric_sphere(int n, double max_angle, std::uint64_t seed,
                             int max_attempts) {
  if (n < 2) throw InvalidArgument("geometric graph needs n >= 2");
  if (!(max_angle > 0.0) || max_angle > std::acos(-1.0) + 1e-15)
    throw InvalidArgument("max_angle must lie in (0, pi]");

  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    RngStream rng(seed, stream_tag::graph, static_cast<std::uint64_t>(attempt));
    Eigen::MatrixXd pts(n, 3);
    for (int i = 0; i < n; ++i) {
      double norm = 0.0;
      do {
        for (int k = 0; k < 3; ++k) pts(i, k) = rng.normal();
        norm = pts.row(i).norm();
      } while (norm == 0.0);
      pts.row(i) /= norm;
    }
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double dot = std::clamp(pts.row(i).dot(pts.row(j)), -1.0, 1.0);
        if (std::acos(dot) < max_angle) edges.emplace_back(i, j);
      }
    }
    Graph g = Graph::from_edges(n, std::move(edges));
    if (is_connected(g)) return g;
  }
  throw ConstructionError(
      "geometric sphere graph: no connected sample within " +
          std::to_string(max_attempts) + " attempts",
      max_attempts);
}

bool is_connected(const Graph& g) {
  const int n = g.num_vertices();
  std::vector<char> seen(n, 0);
  std::deque<int> frontier{0};
  seen[0] = 1;
  int reached = 1;
  while (!frontier.empty()) {
    const int v = frontier.front();
    frontier.pop_front();
    for (int w : g.neighbors(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        frontier.push_back(w);
      }
    }
  }
  return reached == n;
}

namespace {

void check_mixing_input(const Eigen::MatrixXd& w) {
  if (w.rows() != w.cols() || w.rows() < 1)
    throw InvalidArgument("mixing matrix must be square");
  const auto n = w.rows();
  if ((w - w.transpose()).cwiseAbs().maxCoeff() > kStochasticTol)
    throw InvalidArgument("mixing matrix must be symmetric");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(w.row(i).sum() - 1.0) > kStochasticTol ||
        std::abs(w.col(i).sum() - 1.0) > kStochasticTol)
      throw InvalidArgument("mixing matrix must be doubly stochastic");
    for (Eigen::Index j = 0; j < n; ++j)
      if (w(i, j) < 0.0)
        throw InvalidArgument("mixing matrix entries must be nonnegative");
  }
}

MixingMatrix finish_mixing(const Graph& g, Eigen::MatrixXd w) {
  const int n = g.num_vertices();
  MixingMatrix m;
  m.rho = spectral_gap(w);
  m.w = std::move(w);
  for (int i = 0; i < n; ++i) {
    if (!(m.w(i, i) > 0.0))
      throw InvalidArgument("mixing matrix diagonal must be positive");
    for (int j = i + 1; j < n; ++j) {
      const bool edge = g.has_edge(i, j);
      if (edge != (m.w(i, j) > 0.0))
        throw InvalidArgument("mixing matrix sparsity must match the graph");
    }
  }
  if (!(m.rho < 1.0))
    throw InvalidArgument("mixing matrix contraction factor must be < 1");
  return m;
}

}  // namespace

MixingMatrix metropolis_weights(const Graph& g) {
  if (!is_connected(g)) throw InvalidArgument("graph must be connected");
  const int n = g.num_vertices();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (auto [i, j] : g.edges())
    w(i, j) = w(j, i) = 1.0 / (1.0 + std::max(g.degree(i), g.degree(j)));
  for (int i = 0; i < n; ++i) w(i, i) = 1.0 - w.row(i).sum();
  return finish_mixing(g, std::move(w));
}

MixingMatrix lazy_metropolis_weights(const Graph& g) {
  if (!is_connected(g)) throw InvalidArgument("graph must be connected");
  const int n = g.num_vertices();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (auto [i, j] : g.edges())
    w(i, j) = w(j, i) = 0.5 / (1.0 + std::max(g.degree(i), g.degree(j)));
  for (int i = 0; i < n; ++i) w(i, i) = 1.0 - w.row(i).sum();
  return finish_mixing(g, std::move(w));
}

double spectral_gap(const Eigen::MatrixXd& w, std::uint64_t seed) {
  check_mixing_input(w);
  const auto n = w.rows();
  if (n == 1) return 0.0;

  const Eigen::MatrixXd b =
      w - Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));

  RngStream rng(seed, stream_tag::spectral, 0);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.normal();

  constexpr int kMaxIters = 10000;
  constexpr double kRelTol = 1e-10;
  double estimate = 0.0;
  int stable = 0;
  for (int it = 0; it < kMaxIters; ++it) {
    v.array() -= v.mean();  // deflate the all-ones direction
    const double vn = v.norm();
    if (vn == 0.0) return 0.0;
    v /= vn;
    Eigen::VectorXd bv = b * v;
    const double next = bv.norm();
    if (next <= 1e-300) return 0.0;
    if (it > 0) {
      const double change = std::abs(next - estimate) / std::max(next, 1e-300);
      stable = (change <= kRelTol) ? stable + 1 : 0;
    }
    estimate = next;
    if (stable >= 2) return estimate;
    v = std::move(bv);
  }
  throw ConstructionError("spectral gap power iteration did not converge",
                          kMaxIters);
}

Eigen::MatrixXd consensus_apply(const MixingMatrix& w,
                                const Eigen::MatrixXd& rows) {
  if (rows.rows() != w.w.rows())
    throw InvalidArgument("consensus_apply: row count does not match matrix");
  if (rows.cols() < 1)
    throw InvalidArgument("consensus_apply: vectors must have dimension >= 1");
  return w.w * rows;
}

}  // namespace dzo
