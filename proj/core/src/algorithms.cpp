#include "dzo/algorithms.hpp"

#include <string>

#include "dzo/errors.hpp"
#include "dzo/estimators.hpp"

namespace dzo {

namespace {

void check_inputs(const SwarmState& state, const ZeroOrderView& objectives,
                  const MixingMatrix& w) {
  const int n = state.num_agents();
  if (objectives.num_agents() != n || w.w.rows() != n)
    throw InvalidArgument("agent counts of state, objectives and matrix differ");
  if (objectives.dim() != state.dim())
    throw InvalidArgument("objective dimension does not match the state");
}

[[noreturn]] void report_divergence(const Eigen::MatrixXd& rows,
                                    std::int64_t t) {
  int agent = 0;
  for (int i = 0; i < rows.rows(); ++i)
    if (!rows.row(i).allFinite()) {
      agent = i;
      break;
    }
  throw DivergenceError("iterate of agent " + std::to_string(agent) +
                            " became non-finite at iteration " +
                            std::to_string(t),
                        agent, t);
}

// Stack the per-agent estimates for one synchronous round.
Eigen::MatrixXd estimate_round(const SwarmState& state,
                               const ZeroOrderView& objectives, double u,
                               std::uint64_t seed, bool two_point,
                               std::int64_t t_next) {
  const int n = state.num_agents();
  const int d = state.dim();
  Eigen::MatrixXd g(n, d);
  QueryCounter queries;
  for (int i = 0; i < n; ++i) {
    try {
      if (two_point) {
        RngStream rng(seed, static_cast<std::uint64_t>(i),
                      static_cast<std::uint64_t>(t_next));
        const Eigen::VectorXd z = sample_sphere(d, rng);
        g.row(i) = estimate_2point(objectives.local(i),
                                   state.x.row(i).transpose(), u, z, queries)
                       .transpose();
      } else {
        g.row(i) = estimate_2d_point(objectives.local(i),
                                     state.x.row(i).transpose(), u, queries)
                       .transpose();
      }
    } catch (const EvaluationError& e) {
      throw DivergenceError("agent " + std::to_string(i) + " at iteration " +
                                std::to_string(t_next) + ": " + e.what(),
                            i, t_next);
    }
  }
  return g;
}

}  // namespace

SwarmState SwarmState::initial(const Eigen::MatrixXd& x0) {
  if (x0.rows() < 1 || x0.cols() < 1)
    throw InvalidArgument("initial state must be a nonempty n x d matrix");
  SwarmState st;
  st.x = x0;
  st.s = Eigen::MatrixXd::Zero(x0.rows(), x0.cols());
  st.g_prev = Eigen::MatrixXd::Zero(x0.rows(), x0.cols());
  return st;
}

void alg1_step(SwarmState& state, const ZeroOrderView& objectives,
               const MixingMatrix& w, double eta, double u,
               std::uint64_t seed) {
  check_inputs(state, objectives, w);
  const std::int64_t t_next = state.t + 1;
  const Eigen::MatrixXd g =
      estimate_round(state, objectives, u, seed, /*two_point=*/true, t_next);
  Eigen::MatrixXd x_next = w.w * (state.x - eta * g);
  if (!x_next.allFinite()) report_divergence(x_next, t_next);
  state.x = std::move(x_next);
  state.t = t_next;
  state.m += 2;
}

namespace {

void tracking_step(SwarmState& state, const MixingMatrix& w, double eta,
                   const Eigen::MatrixXd& g, std::int64_t t_next,
                   std::int64_t queries_per_agent) {
  Eigen::MatrixXd s_next = w.w * (state.s + g - state.g_prev);
  Eigen::MatrixXd x_next = w.w * (state.x - eta * s_next);
  if (!s_next.allFinite()) report_divergence(s_next, t_next);
  if (!x_next.allFinite()) report_divergence(x_next, t_next);
  state.s = std::move(s_next);
  state.x = std::move(x_next);
  state.g_prev = g;
  state.t = t_next;
  state.m += queries_per_agent;
}

}  // namespace

void alg2_step(SwarmState& state, const ZeroOrderView& objectives,
               const MixingMatrix& w, double eta, double u) {
  check_inputs(state, objectives, w);
  const std::int64_t t_next = state.t + 1;
  const Eigen::MatrixXd g =
      estimate_round(state, objectives, u, 0, /*two_point=*/false, t_next);
  tracking_step(state, w, eta, g, t_next, 2 * state.dim());
}

void hybrid_step(SwarmState& state, const ZeroOrderView& objectives,
                 const MixingMatrix& w, double eta, double u,
                 std::uint64_t seed) {
  check_inputs(state, objectives, w);
  const std::int64_t t_next = state.t + 1;
  const Eigen::MatrixXd g =
      estimate_round(state, objectives, u, seed, /*two_point=*/true, t_next);
  tracking_step(state, w, eta, g, t_next, 2);
}

}  // namespace dzo
