#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "dzo/estimators.hpp"
#include "dzo/rng.hpp"

namespace dzo {

using GradFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Parameters of the nonconvex logistic + log-smoothing benchmark
///   f_i(x) = a_i / (1 + exp(-xi_i'x - nu_i)) + b_i ln(1 + ||x||^2),
/// with a_i, nu_i and the entries of xi_i standard normal, and b drawn
/// mean-1 with the mean projected out so that (1/n) sum_i b_i = 1 exactly.
struct LogisticSuiteParams {
  Eigen::VectorXd a;   // n
  Eigen::VectorXd nu;  // n
  Eigen::VectorXd b;   // n, mean exactly 1
  Eigen::MatrixXd xi;  // n x d, row i = xi_i
};

/// Parameters of the quadratic family f_i(x) = 0.5 ||x - c_i||^2.
struct QuadraticSuiteParams {
  Eigen::MatrixXd centers;  // n x d, row i = c_i
};

using SuiteParams = std::variant<LogisticSuiteParams, QuadraticSuiteParams>;

/// n local objectives with exact value oracles and analytic gradients.
///
/// Gradients exist for metrics and verification only; iteration kernels get
/// a ZeroOrderView. Constants that the instance does not determine (e.g.
/// L, G for the logistic family) stay unset and may be supplied via
/// configuration.
struct ObjectiveSuite {
  int dim = 0;
  int num_agents = 0;
  std::vector<ValueFn> value;  // f_i
  std::vector<GradFn> grad;    // analytic gradient of f_i

  std::optional<double> smoothness;      // uniform L
  std::optional<double> lipschitz;       // uniform G; unset when unbounded
  std::optional<double> pl_constant;     // mu; unset when not gradient dominated
  std::optional<double> optimal_value;   // f*
  std::optional<double> optimality_gap;  // delta = f* - (1/n) sum_i f_i*

  SuiteParams params;

  double local_value(int i, const Eigen::VectorXd& x) const;
  Eigen::VectorXd local_grad(int i, const Eigen::VectorXd& x) const;
  double global_value(const Eigen::VectorXd& x) const;
  Eigen::VectorXd global_grad(const Eigen::VectorXd& x) const;
};

ObjectiveSuite make_logistic_suite(int d, int n, RngStream& rng);
ObjectiveSuite make_logistic_suite(int d, int n, LogisticSuiteParams params);

/// L = mu = 1; f* and the gap delta are computed in closed form.
ObjectiveSuite make_quadratic_suite(const Eigen::MatrixXd& centers);

/// Value-only view of a suite. Iteration kernels accept this type, so the
/// zero-order contract holds structurally: no gradient oracle is reachable
/// from a kernel.
class ZeroOrderView {
 public:
  explicit ZeroOrderView(const ObjectiveSuite& suite)
      : dim_(suite.dim), value_(suite.value) {}

  int dim() const { return dim_; }
  int num_agents() const { return static_cast<int>(value_.size()); }
  const ValueFn& local(int i) const { return value_[i]; }

 private:
  int dim_;
  std::vector<ValueFn> value_;
};

}  // namespace dzo
