#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>

#include "dzo/rng.hpp"

namespace dzo {

/// Value-only oracle for one objective. This is the only view of an
/// objective the iteration kernels ever receive.
using ValueFn = std::function<double(const Eigen::VectorXd&)>;

/// Cumulative count of function value queries.
struct QueryCounter {
  std::int64_t total = 0;
};

/// Uniform draw from the unit sphere S_{d-1} (normalized Gaussians;
/// the zero vector is resampled). d = 1 yields {-1, +1}.
Eigen::VectorXd sample_sphere(int d, RngStream& rng);

/// Randomized two-query directional estimator
///   d * (f(x + u z) - f(x - u z)) / (2u) * z,   z on the unit sphere.
/// Adds exactly 2 to `queries`.
Eigen::VectorXd estimate_2point(const ValueFn& f, const Eigen::VectorXd& x,
                                double u, const Eigen::VectorXd& z,
                                QueryCounter& queries);

/// Coordinate-wise central differences along all d axes,
///   sum_k (f(x + u e_k) - f(x - u e_k)) / (2u) * e_k.
/// Exact on quadratics. Adds exactly 2d to `queries`.
Eigen::VectorXd estimate_2d_point(const ValueFn& f, const Eigen::VectorXd& x,
                                  double u, QueryCounter& queries);

/// Monte Carlo mean of estimate_2point over fresh sphere draws; converges
/// to the gradient of the u-ball-averaged objective. Verification use only.
Eigen::VectorXd estimate_smoothed_gradient_mc(const ValueFn& f,
                                              const Eigen::VectorXd& x,
                                              double u, std::int64_t samples,
                                              RngStream& rng,
                                              QueryCounter& queries);

/// Central differences in double precision lose accuracy when the radius
/// shrinks toward machine scale; a single process-wide warning is emitted
/// when u < 1e-7 * (1 + ||x||). This returns how often that happened.
std::int64_t radius_warning_count();

}  // namespace dzo
