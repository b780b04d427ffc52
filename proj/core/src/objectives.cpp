#include "dzo/objectives.hpp"

#include <cmath>

#include "dzo/errors.hpp"

namespace dzo {

double ObjectiveSuite::local_value(int i, const Eigen::VectorXd& x) const {
  return value[i](x);
}

Eigen::VectorXd ObjectiveSuite::local_grad(int i,
                                           const Eigen::VectorXd& x) const {
  return grad[i](x);
}

double ObjectiveSuite::global_value(const Eigen::VectorXd& x) const {
  if (x.size() != dim) throw InvalidArgument("point dimension mismatch");
  double sum = 0.0;
  for (const auto& f : value) sum += f(x);
  return sum / static_cast<double>(num_agents);
}

Eigen::VectorXd ObjectiveSuite::global_grad(const Eigen::VectorXd& x) const {
  if (x.size() != dim) throw InvalidArgument("point dimension mismatch");
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(dim);
  for (const auto& g : grad) sum += g(x);
  return sum / static_cast<double>(num_agents);
}

ObjectiveSuite make_logistic_suite(int d, int n, RngStream& rng) {
  if (d < 1 || n < 2) throw InvalidArgument("logistic suite needs d >= 1, n >= 2");
  LogisticSuiteParams p;
  p.a.resize(n);
  p.nu.resize(n);
  p.b.resize(n);
  p.xi.resize(n, d);
  for (int i = 0; i < n; ++i) p.a(i) = rng.normal();
  for (int i = 0; i < n; ++i) p.nu(i) = rng.normal();
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < d; ++k) p.xi(i, k) = rng.normal();
  // b ~ N(1, I - (1/n)11') realized as: draw normals, project out the mean,
  // add 1. The sample mean is then exactly 1.
  for (int i = 0; i < n; ++i) p.b(i) = rng.normal();
  p.b.array() += 1.0 - p.b.mean();
  return make_logistic_suite(d, n, std::move(p));
}

ObjectiveSuite make_logistic_suite(int d, int n, LogisticSuiteParams params) {
  if (d < 1 || n < 2) throw InvalidArgument("logistic suite needs d >= 1, n >= 2");
  if (params.a.size() != n || params.nu.size() != n || params.b.size() != n ||
      params.xi.rows() != n || params.xi.cols() != d)
    throw InvalidArgument("logistic suite parameter shapes do not match (d, n)");
  if (std::abs(params.b.mean() - 1.0) > 1e-12)
    throw InvalidArgument("logistic suite requires mean(b) = 1");

  ObjectiveSuite s;
  s.dim = d;
  s.num_agents = n;
  for (int i = 0; i < n; ++i) {
    const double a = params.a(i);
    const double nu = params.nu(i);
    const double b = params.b(i);
    const Eigen::VectorXd xi = params.xi.row(i).transpose();
    s.value.push_back([a, nu, b, xi](const Eigen::VectorXd& x) {
      const double sig = 1.0 / (1.0 + std::exp(-xi.dot(x) - nu));
      return a * sig + b * std::log1p(x.squaredNorm());
    });
    s.grad.push_back([a, nu, b, xi](const Eigen::VectorXd& x) {
      const double sig = 1.0 / (1.0 + std::exp(-xi.dot(x) - nu));
      return Eigen::VectorXd(a * sig * (1.0 - sig) * xi +
                             (2.0 * b / (1.0 + x.squaredNorm())) * x);
    });
  }
  s.params = std::move(params);
  return s;
}

ObjectiveSuite make_quadratic_suite(const Eigen::MatrixXd& centers) {
  const int n = static_cast<int>(centers.rows());
  const int d = static_cast<int>(centers.cols());
  if (n < 1 || d < 1) throw InvalidArgument("quadratic suite needs n, d >= 1");

  ObjectiveSuite s;
  s.dim = d;
  s.num_agents = n;
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd c = centers.row(i).transpose();
    s.value.push_back([c](const Eigen::VectorXd& x) {
      return 0.5 * (x - c).squaredNorm();
    });
    s.grad.push_back([c](const Eigen::VectorXd& x) {
      return Eigen::VectorXd(x - c);
    });
  }
  const Eigen::VectorXd mean_center =
      centers.colwise().mean().transpose();
  double fstar = 0.0;
  for (int i = 0; i < n; ++i)
    fstar += 0.5 * (centers.row(i).transpose() - mean_center).squaredNorm();
  fstar /= static_cast<double>(n);

  s.smoothness = 1.0;
  s.pl_constant = 1.0;
  s.optimal_value = fstar;
  s.optimality_gap = fstar;  // each local minimum value is 0
  s.params = QuadraticSuiteParams{centers};
  return s;
}

}  // namespace dzo
