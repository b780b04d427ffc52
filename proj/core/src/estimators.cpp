#include "dzo/estimators.hpp"

#include <atomic>
#include <cmath>
#include <iostream>

#include "dzo/errors.hpp"

namespace dzo {

namespace {

std::atomic<std::int64_t> g_radius_warnings{0};

void note_radius(double u, double xnorm) {
  if (u < 1e-7 * (1.0 + xnorm)) {
    if (g_radius_warnings.fetch_add(1) == 0)
      std::cerr << "dzo: warning: smoothing radius " << u
                << " is near machine scale; finite differences lose accuracy"
                << " (further warnings suppressed)\n";
  }
}

double query(const ValueFn& f, const Eigen::VectorXd& x,
             QueryCounter& queries) {
  ++queries.total;
  const double v = f(x);
  if (!std::isfinite(v))
    throw EvaluationError("function query returned a non-finite value");
  return v;
}

}  // namespace

std::int64_t radius_warning_count() { return g_radius_warnings.load(); }

Eigen::VectorXd sample_sphere(int d, RngStream& rng) {
  if (d < 1) throw InvalidArgument("sphere dimension must be >= 1");
  Eigen::VectorXd z(d);
  double norm = 0.0;
  do {
    for (int k = 0; k < d; ++k) z(k) = rng.normal();
    norm = z.norm();
  } while (norm == 0.0);
  return z / norm;
}

Eigen::VectorXd estimate_2point(const ValueFn& f, const Eigen::VectorXd& x,
                                double u, const Eigen::VectorXd& z,
                                QueryCounter& queries) {
  if (!(u > 0.0)) throw InvalidArgument("smoothing radius must be positive");
  if (z.size() != x.size())
    throw InvalidArgument("direction dimension does not match the point");
  if (std::abs(z.norm() - 1.0) > 1e-9)
    throw InvalidArgument("direction must have unit norm");
  note_radius(u, x.norm());
  const double fp = query(f, x + u * z, queries);
  const double fm = query(f, x - u * z, queries);
  const double d = static_cast<double>(x.size());
  return d * (fp - fm) / (2.0 * u) * z;
}

Eigen::VectorXd estimate_2d_point(const ValueFn& f, const Eigen::VectorXd& x,
                                  double u, QueryCounter& queries) {
  if (!(u > 0.0)) throw InvalidArgument("smoothing radius must be positive");
  note_radius(u, x.norm());
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    probe(k) = x(k) + u;
    const double fp = query(f, probe, queries);
    probe(k) = x(k) - u;
    const double fm = query(f, probe, queries);
    probe(k) = x(k);
    g(k) = (fp - fm) / (2.0 * u);
  }
  return g;
}

Eigen::VectorXd estimate_smoothed_gradient_mc(const ValueFn& f,
                                              const Eigen::VectorXd& x,
                                              double u, std::int64_t samples,
                                              RngStream& rng,
                                              QueryCounter& queries) {
  if (samples < 1) throw InvalidArgument("sample count must be >= 1");
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(x.size());
  for (std::int64_t s = 0; s < samples; ++s) {
    const Eigen::VectorXd z = sample_sphere(static_cast<int>(x.size()), rng);
    sum += estimate_2point(f, x, u, z, queries);
  }
  return sum / static_cast<double>(samples);
}

}  // namespace dzo
