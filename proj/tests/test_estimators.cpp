#include "dzo/estimators.hpp"

#include <cmath>

#include "doctest.h"
#include "dzo/errors.hpp"

using namespace dzo;

TEST_CASE("sphere sampling basics") {
  RngStream rng(1, 0, 0);
  for (int d : {1, 2, 3, 17}) {
    const Eigen::VectorXd z = sample_sphere(d, rng);
    CHECK(std::abs(z.norm() - 1.0) <= 1e-12);
  }
  // d = 1: the sphere is the two points {-1, +1}
  bool saw_pos = false, saw_neg = false;
  for (int i = 0; i < 64; ++i) {
    const double z = sample_sphere(1, rng)(0);
    CHECK(std::abs(std::abs(z) - 1.0) <= 1e-15);
    saw_pos |= z > 0;
    saw_neg |= z < 0;
  }
  CHECK(saw_pos);
  CHECK(saw_neg);
  CHECK_THROWS_AS(sample_sphere(0, rng), InvalidArgument);
}

TEST_CASE("sphere sampling is keyed deterministically") {
  RngStream a(9, 4, 100), b(9, 4, 100);
  CHECK(sample_sphere(8, a) == sample_sphere(8, b));
}

TEST_CASE("second moment of sphere directions: d E[zz'] = I") {
  const int d = 3, samples = 100000;
  RngStream rng(3, 0, 0);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(d, d);
  Eigen::MatrixXd sumsq = Eigen::MatrixXd::Zero(d, d);
  for (int s = 0; s < samples; ++s) {
    const Eigen::VectorXd z = sample_sphere(d, rng);
    const Eigen::MatrixXd zz = z * z.transpose();
    sum += zz;
    sumsq += zz.cwiseProduct(zz);
  }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const double mean = sum(i, j) / samples;
      const double var = sumsq(i, j) / samples - mean * mean;
      const double se = std::sqrt(var / samples);
      const double expected = (i == j) ? 1.0 / d : 0.0;
      CHECK(std::abs(mean - expected) <= 5.0 * se + 1e-12);
    }
}

TEST_CASE("2-point estimate on a linear objective is d (g'z) z exactly") {
  Eigen::VectorXd g(2);
  g << 1, 0;
  const ValueFn f = [&g](const Eigen::VectorXd& x) { return g.dot(x); };
  Eigen::VectorXd z(2);
  z << 0, 1;
  QueryCounter q;
  const Eigen::VectorXd est =
      estimate_2point(f, Eigen::VectorXd::Zero(2), 0.3, z, q);
  CHECK(est(0) == 0.0);
  CHECK(est(1) == 0.0);
  CHECK(q.total == 2);

  Eigen::VectorXd z2(2);
  z2 << 1, 0;
  const Eigen::VectorXd est2 =
      estimate_2point(f, Eigen::VectorXd::Zero(2), 0.3, z2, q);
  CHECK(est2(0) == doctest::Approx(2.0).epsilon(1e-14));  // d (g'z) z = 2 e1
}

TEST_CASE("2-point estimate: constants and the 1-d quadratic") {
  const ValueFn constant = [](const Eigen::VectorXd&) { return 4.0; };
  QueryCounter q;
  RngStream rng(2, 0, 0);
  const Eigen::VectorXd z = sample_sphere(3, rng);
  CHECK(estimate_2point(constant, Eigen::VectorXd::Zero(3), 0.5, z, q).norm() ==
        0.0);

  const ValueFn half_sq = [](const Eigen::VectorXd& x) {
    return 0.5 * x(0) * x(0);
  };
  Eigen::VectorXd x(1), dir(1);
  x(0) = 1.0;
  for (double u : {1e-3, 0.1, 0.7})
    for (double sign : {-1.0, 1.0}) {
      dir(0) = sign;
      CHECK(estimate_2point(half_sq, x, u, dir, q)(0) ==
            doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("2-point estimate validates its inputs") {
  const ValueFn f = [](const Eigen::VectorXd& x) { return x(0); };
  QueryCounter q;
  Eigen::VectorXd x(1), z(1);
  x(0) = 0.0;
  z(0) = 1.0;
  CHECK_THROWS_AS(estimate_2point(f, x, 0.0, z, q), InvalidArgument);
  z(0) = 0.5;
  CHECK_THROWS_AS(estimate_2point(f, x, 0.1, z, q), InvalidArgument);

  const ValueFn bad = [](const Eigen::VectorXd&) {
    return std::numeric_limits<double>::infinity();
  };
  z(0) = 1.0;
  CHECK_THROWS_AS(estimate_2point(bad, x, 0.1, z, q), EvaluationError);
}

TEST_CASE("coordinate estimator is exact on quadratics") {
  const int d = 3;
  Eigen::MatrixXd a(d, d);
  a << 2, 1, 0, 1, 3, 1, 0, 1, 2;
  Eigen::VectorXd b(d);
  b << 1, -1, 2;
  const ValueFn f = [&](const Eigen::VectorXd& x) {
    return 0.5 * x.dot(a * x) + b.dot(x);
  };
  Eigen::VectorXd x(d);
  x << 0.2, -0.7, 1.5;
  const Eigen::VectorXd expected = a * x + b;
  QueryCounter q;
  for (double u : {1.0, 0.1, 0.01}) {
    const Eigen::VectorXd est = estimate_2d_point(f, x, u, q);
    CHECK((est - expected).norm() <= 1e-10);
  }
  CHECK(q.total == 3 * 2 * d);
}

TEST_CASE("coordinate estimator: cubic case and constants") {
  const ValueFn cubic = [](const Eigen::VectorXd& x) {
    return x(0) * x(0) * x(0);
  };
  Eigen::VectorXd x(1);
  x(0) = 1.0;
  QueryCounter q;
  const Eigen::VectorXd est = estimate_2d_point(cubic, x, 0.1, q);
  CHECK(est(0) == doctest::Approx(3.01).epsilon(1e-13));
  CHECK(q.total == 2);

  const ValueFn constant = [](const Eigen::VectorXd&) { return -2.5; };
  CHECK(estimate_2d_point(constant, Eigen::VectorXd::Zero(5), 0.3, q).norm() ==
        0.0);
}

TEST_CASE("Monte Carlo smoothed gradient on a linear objective") {
  const int d = 4;
  Eigen::VectorXd g(d);
  g << 0.5, -1.0, 2.0, 0.0;
  const ValueFn f = [&g](const Eigen::VectorXd& x) { return g.dot(x); };
  RngStream rng(10, 0, 0);
  QueryCounter q;
  const std::int64_t samples = 100000;

  // aggregate standard error of the vector mean, from per-sample draws
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(d), sumsq = Eigen::VectorXd::Zero(d);
  RngStream rng2(10, 0, 0);
  for (std::int64_t s = 0; s < samples; ++s) {
    const Eigen::VectorXd z = sample_sphere(d, rng2);
    const Eigen::VectorXd est = estimate_2point(f, Eigen::VectorXd::Zero(d), 0.2, z, q);
    sum += est;
    sumsq += est.cwiseProduct(est);
  }
  const Eigen::VectorXd mean = sum / static_cast<double>(samples);
  double var_total = 0.0;
  for (int k = 0; k < d; ++k)
    var_total += sumsq(k) / samples - mean(k) * mean(k);
  const double se = std::sqrt(var_total / samples);

  const Eigen::VectorXd mc = estimate_smoothed_gradient_mc(
      f, Eigen::VectorXd::Zero(d), 0.2, samples, rng, q);
  CHECK((mc - mean).norm() <= 1e-12);  // same draws, same mean
  CHECK((mc - g).norm() <= 5.0 * se);

  const ValueFn constant = [](const Eigen::VectorXd&) { return 1.0; };
  RngStream rng3(11, 0, 0);
  CHECK(estimate_smoothed_gradient_mc(constant, Eigen::VectorXd::Zero(d), 0.2,
                                      1000, rng3, q)
            .norm() == 0.0);
}

TEST_CASE("smoothed-gradient bias shrinks like u L") {
  // f(x) = sum cos(x_k) has L = 1
  const int d = 3;
  const ValueFn f = [](const Eigen::VectorXd& x) {
    return x.array().cos().sum();
  };
  Eigen::VectorXd x(d);
  x << 0.3, -1.0, 2.0;
  const Eigen::VectorXd grad = -x.array().sin().matrix();
  QueryCounter q;
  for (double u : {0.1, 0.01, 0.001}) {
    RngStream rng(21, 0, 0);
    const std::int64_t samples = 200000;
    const Eigen::VectorXd mc =
        estimate_smoothed_gradient_mc(f, x, u, samples, rng, q);
    // generous aggregate stderr bound: per-draw norm is at most d (|grad|+uL)
    const double se_bound =
        static_cast<double>(d) * 2.0 / std::sqrt(static_cast<double>(samples));
    CHECK((mc - grad).norm() <= u * 1.0 + 5.0 * se_bound);
  }
}

TEST_CASE("second moment ceiling for smooth objectives") {
  const int d = 6;
  const ValueFn f = [](const Eigen::VectorXd& x) { return 0.5 * x.squaredNorm(); };
  Eigen::VectorXd x(d);
  x << 1, -2, 0.5, 0, 3, -1;  // grad = x, L = 1
  const double u = 0.5;
  RngStream rng(31, 0, 0);
  QueryCounter q;
  const std::int64_t samples = 100000;
  double sum = 0.0, sumsq = 0.0;
  for (std::int64_t s = 0; s < samples; ++s) {
    const Eigen::VectorXd z = sample_sphere(d, rng);
    const double nsq = estimate_2point(f, x, u, z, q).squaredNorm();
    sum += nsq;
    sumsq += nsq * nsq;
  }
  const double mean = sum / samples;
  const double se = std::sqrt((sumsq / samples - mean * mean) / samples);
  const double ceiling =
      4.0 * d / 3.0 * x.squaredNorm() + u * u * 1.0 * d * d;
  CHECK(mean <= ceiling + 5.0 * se);
}

TEST_CASE("non-vanishing deviation moment on a linear objective") {
  const int d = 8;
  Eigen::VectorXd g(d);
  g.setLinSpaced(d, -1.0, 1.5);
  const ValueFn f = [&g](const Eigen::VectorXd& x) { return g.dot(x); };
  RngStream rng(41, 0, 0);
  QueryCounter q;
  const std::int64_t samples = 100000;
  double sum = 0.0, sumsq = 0.0;
  for (std::int64_t s = 0; s < samples; ++s) {
    const Eigen::VectorXd z = sample_sphere(d, rng);
    const double dev =
        (estimate_2point(f, Eigen::VectorXd::Zero(d), 0.05, z, q) - g)
            .squaredNorm();
    sum += dev;
    sumsq += dev * dev;
  }
  const double mean = sum / samples;
  const double se = std::sqrt((sumsq / samples - mean * mean) / samples);
  CHECK(std::abs(mean - (d - 1) * g.squaredNorm()) <= 5.0 * se);
}

TEST_CASE("near-machine-scale radius emits the one-time warning") {
  const ValueFn f = [](const Eigen::VectorXd& x) { return x(0); };
  QueryCounter q;
  Eigen::VectorXd x(1), z(1);
  x(0) = 0.0;
  z(0) = 1.0;
  const std::int64_t before = radius_warning_count();
  estimate_2point(f, x, 1e-9, z, q);
  CHECK(radius_warning_count() == before + 1);
  estimate_2d_point(f, x, 1e-9, q);
  CHECK(radius_warning_count() == before + 2);
}
