#include "dzo/schedule.hpp"

#include <cmath>
#include <string>

#include "dzo/errors.hpp"

namespace dzo {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

void check_rho(double rho) {
  require(rho >= 0.0 && rho < 1.0, "rho must lie in [0, 1)");
}

}  // namespace

Schedule schedule_theorem1(double L, int d, double alpha_eta, double alpha_u,
                           double G, double gamma) {
  require(L > 0.0, "L must be positive");
  require(d >= 1, "dimension must be >= 1");
  require(alpha_eta > 0.0 && alpha_eta <= 1.0, "alpha_eta must lie in (0, 1]");
  require(alpha_u > 0.0, "alpha_u must be positive (u_t = 0 makes the estimator undefined)");
  require(G > 0.0, "G must be positive");
  require(gamma > 1.0, "gamma must exceed 1");

  const double sqrt_d = std::sqrt(static_cast<double>(d));
  const double eta_scale = alpha_eta / (4.0 * L * sqrt_d);
  const double u_scale = alpha_u * G / (L * sqrt_d);
  const double u_exp = gamma / 2.0 - 0.25;

  Schedule s;
  s.kind = ScheduleKind::theorem1;
  s.eta_at = [eta_scale](std::int64_t t) {
    return eta_scale / std::sqrt(static_cast<double>(t));
  };
  s.u_at = [u_scale, u_exp](std::int64_t t) {
    return u_scale / std::pow(static_cast<double>(t), u_exp);
  };
  return s;
}

Schedule schedule_theorem2(double mu, double L, int d, double rho,
                           double alpha_eta, double alpha_u) {
  require(mu > 0.0 && L > 0.0, "mu and L must be positive");
  require(mu <= L, "mu cannot exceed L");
  require(d >= 1, "dimension must be >= 1");
  check_rho(rho);
  require(alpha_eta > 1.0, "alpha_eta must exceed 1");
  require(alpha_u > 0.0, "alpha_u must be positive");

  const double lower =
      2.0 * alpha_eta * L / (mu * (1.0 - rho * rho)) *
          (32.0 * L * static_cast<double>(d) / (3.0 * mu) + 9.0 * rho) -
      1.0;
  const double t0 = std::max(0.0, std::ceil(lower));

  Schedule s;
  s.kind = ScheduleKind::theorem2;
  s.eta_at = [alpha_eta, mu, t0](std::int64_t t) {
    return 2.0 * alpha_eta / (mu * (static_cast<double>(t) + t0));
  };
  s.u_at = [alpha_u, t0](std::int64_t t) {
    return alpha_u / std::sqrt(static_cast<double>(t) + t0);
  };
  return s;
}

Schedule schedule_theorem3(double L, double rho,
                           std::function<double(std::int64_t)> u) {
  require(L > 0.0, "L must be positive");
  check_rho(rho);
  require(static_cast<bool>(u), "a radius sequence is required");
  sum_u_squared(u);  // rejects non-square-summable sequences

  const double r2 = rho * rho;
  double ceiling = 1.0 / 6.0;
  if (rho > 0.0) {
    const double second = (1.0 - r2) * (1.0 - r2) / (4.0 * r2 * (3.0 + 4.0 * r2));
    ceiling = std::min(ceiling, second);
  }
  const double eta = ceiling / L;

  Schedule s;
  s.kind = ScheduleKind::theorem3_constant;
  s.constant_eta = true;
  s.eta_at = [eta](std::int64_t) { return eta; };
  s.u_at = std::move(u);
  return s;
}

double theorem4_lambda(double mu, double L, double rho, double alpha) {
  require(mu > 0.0 && L > 0.0, "mu and L must be positive");
  require(mu <= L, "mu cannot exceed L");
  check_rho(rho);
  require(alpha > 0.0 && alpha <= 1.0, "alpha must lie in (0, 1]");
  const double one_minus_r2 = 1.0 - rho * rho;
  return 1.0 - alpha * (one_minus_r2 / 5.0) * (one_minus_r2 / 5.0) *
                   std::pow(mu / L, 4.0 / 3.0);
}

Schedule schedule_theorem4(double mu, double L, double rho, double alpha,
                           double u1, double lambda_tilde) {
  require(u1 > 0.0, "u1 must be positive");

  const double one_minus_r2 = 1.0 - rho * rho;
  const double ratio = mu / L;
  const double lambda = theorem4_lambda(mu, L, rho, alpha);
  const double eta =
      alpha * std::cbrt(ratio) * one_minus_r2 * one_minus_r2 / (14.0 * L);
  require(lambda > 0.0 && lambda < 1.0, "decay factor must lie in (0, 1)");
  require(lambda_tilde > 0.0 && lambda_tilde < lambda,
          "lambda_tilde must lie in (0, lambda)");

  const double u_base = std::sqrt(lambda_tilde);
  Schedule s;
  s.kind = ScheduleKind::theorem4_linear;
  s.constant_eta = true;
  s.lambda = lambda;
  s.lambda_tilde = lambda_tilde;
  s.eta_at = [eta](std::int64_t) { return eta; };
  s.u_at = [u1, u_base](std::int64_t t) {
    return u1 * std::pow(u_base, static_cast<double>(t));
  };
  return s;
}

Schedule schedule_manual(double eta0, double eta_pow, double u0, double u_pow) {
  require(eta0 > 0.0, "eta0 must be positive");
  require(u0 > 0.0, "u0 must be positive");
  require(eta_pow >= 0.0 && u_pow >= 0.0, "decay exponents must be >= 0");

  Schedule s;
  s.kind = ScheduleKind::manual;
  s.constant_eta = (eta_pow == 0.0);
  s.eta_at = [eta0, eta_pow](std::int64_t t) {
    return eta_pow == 0.0 ? eta0
                          : eta0 / std::pow(static_cast<double>(t), eta_pow);
  };
  s.u_at = [u0, u_pow](std::int64_t t) {
    return u_pow == 0.0 ? u0 : u0 / std::pow(static_cast<double>(t), u_pow);
  };
  return s;
}

double sum_u_squared(const std::function<double(std::int64_t)>& u) {
  const double u1 = u(1);
  require(u1 >= 0.0 && std::isfinite(u1), "u_1 must be finite and >= 0");
  double total = u1 * u1;
  double prev_block = -1.0;
  double ratio = 1.0;
  std::int64_t lo = 2;
  for (int k = 0; k < 21; ++k) {
    const std::int64_t hi = lo * 2;
    double block = 0.0;
    for (std::int64_t t = lo; t < hi; ++t) {
      const double ut = u(t);
      if (!(ut >= 0.0) || !std::isfinite(ut))
        throw InvalidArgument("u_t must be finite and >= 0 at t = " +
                              std::to_string(t));
      block += ut * ut;
    }
    total += block;
    if (block <= 1e-18 * total) return total;  // tail is already negligible
    if (prev_block > 0.0) ratio = block / prev_block;
    prev_block = block;
    lo = hi;
  }
  if (!(ratio < 0.95))
    throw InvalidArgument(
        "radius sequence does not appear square-summable (dyadic block "
        "ratio " +
        std::to_string(ratio) + ")");
  return total + prev_block * ratio / (1.0 - ratio);
}

}  // namespace dzo
