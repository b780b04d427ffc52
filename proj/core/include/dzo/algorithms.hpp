#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "dzo/network.hpp"
#include "dzo/objectives.hpp"
#include "dzo/schedule.hpp"

namespace dzo {

enum class Kernel {
  alg1,    // 2-point estimator, neighbor averaging only
  alg2,    // 2d-point estimator with gradient tracking
  hybrid,  // 2-point estimator with gradient tracking
};

/// Per-agent iterates stacked as rows. s and g_prev stay zero for plain
/// DGD runs; the tracking kernels start from s(0) = g(0) = 0.
///
/// Invariants maintained by the tracking kernels (checked in tests):
///   mean_i s^i(t) = mean_i g^i(t)
///   xbar(t) = xbar(t-1) - eta * mean_i g^i(t)
/// Per-agent query count: m = 2t (alg1, hybrid) or m = 2dt (alg2).
struct SwarmState {
  Eigen::MatrixXd x;       // n x d
  Eigen::MatrixXd s;       // n x d
  Eigen::MatrixXd g_prev;  // n x d
  std::int64_t t = 0;
  std::int64_t m = 0;  // function queries per agent

  static SwarmState initial(const Eigen::MatrixXd& x0);

  int num_agents() const { return static_cast<int>(x.rows()); }
  int dim() const { return static_cast<int>(x.cols()); }
  Eigen::VectorXd mean_x() const { return x.colwise().mean().transpose(); }
};

/// One synchronous round of 2-point DGD: every agent draws its direction
/// from the (seed, agent, t) stream, estimates, then the adapted iterates
/// are averaged:  x^i <- sum_j W_ij (x^j - eta g^j).
void alg1_step(SwarmState& state, const ZeroOrderView& objectives,
               const MixingMatrix& w, double eta, double u,
               std::uint64_t seed);

/// One round of 2d-point estimation with gradient tracking:
///   s^i <- sum_j W_ij (s^j + g^j - g_prev^j),
///   x^i <- sum_j W_ij (x^j - eta s^j).
void alg2_step(SwarmState& state, const ZeroOrderView& objectives,
               const MixingMatrix& w, double eta, double u);

/// Tracking recursion fed by the 2-point estimator. Its per-draw variance
/// does not vanish as u -> 0, so the tracker noise floor persists.
void hybrid_step(SwarmState& state, const ZeroOrderView& objectives,
                 const MixingMatrix& w, double eta, double u,
                 std::uint64_t seed);

}  // namespace dzo
