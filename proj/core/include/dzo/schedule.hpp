#pragma once

#include <cstdint>
#include <functional>

namespace dzo {

enum class ScheduleKind {
  theorem1,          // eta ~ 1/sqrt(t), for the 2-point DGD kernel
  theorem2,          // eta ~ 1/t with burn-in offset, gradient-dominated case
  theorem3_constant, // constant eta at the smooth-case ceiling
  theorem4_linear,   // constant eta + exponentially decaying radius
  manual,            // hand-tuned power laws
};

/// Step-size sequence eta_t and smoothing-radius sequence u_t, t >= 1.
struct Schedule {
  ScheduleKind kind = ScheduleKind::manual;
  std::function<double(std::int64_t)> eta_at;
  std::function<double(std::int64_t)> u_at;
  bool constant_eta = false;
  // Set for theorem4_linear only: the guaranteed decay factor and the
  // radius decay base (u_t = u1 * lambda_tilde^{t/2}, lambda_tilde < lambda).
  double lambda = 0.0;
  double lambda_tilde = 0.0;
};

/// eta_t = alpha_eta / (4 L sqrt(d)) / sqrt(t),
/// u_t   = alpha_u G / (L sqrt(d)) / t^{gamma/2 - 1/4}.
/// Requires alpha_eta in (0, 1], alpha_u > 0, gamma > 1.
Schedule schedule_theorem1(double L, int d, double alpha_eta, double alpha_u,
                           double G, double gamma);

/// eta_t = 2 alpha_eta / (mu (t + t0)), u_t = alpha_u / sqrt(t + t0), with
/// t0 the ceiling of 2 alpha_eta L / (mu (1 - rho^2)) * (32 L d / (3 mu)
/// + 9 rho) - 1. Requires alpha_eta > 1, alpha_u > 0.
Schedule schedule_theorem2(double mu, double L, int d, double rho,
                           double alpha_eta, double alpha_u);

/// Constant eta with eta L = min{1/6, (1-rho^2)^2 / (4 rho^2 (3 + 4 rho^2))}.
/// The caller supplies the radius sequence; sum_t u_t^2 must be finite
/// (validated numerically).
Schedule schedule_theorem3(double L, double rho,
                           std::function<double(std::int64_t)> u);

/// The guaranteed decay factor of the constant-step tracking run,
/// lambda = 1 - alpha ((1-rho^2)/5)^2 (mu/L)^{4/3}.
double theorem4_lambda(double mu, double L, double rho, double alpha);

/// Constant eta with eta L = alpha (mu/L)^{1/3} (1-rho^2)^2 / 14 and
/// u_t = u1 * lambda_tilde^{t/2}. Requires alpha in (0, 1] and
/// lambda_tilde in (0, lambda).
Schedule schedule_theorem4(double mu, double L, double rho, double alpha,
                           double u1, double lambda_tilde);

/// eta_t = eta0 / t^{eta_pow}, u_t = u0 / t^{u_pow}.
Schedule schedule_manual(double eta0, double eta_pow, double u0, double u_pow);

/// sum_{t>=1} u_t^2 by dyadic blocks with a geometric tail estimate.
/// Throws when the sequence does not visibly converge (block ratios
/// staying above ~0.95, i.e. decay slower than roughly t^{-0.54}).
double sum_u_squared(const std::function<double(std::int64_t)>& u);

}  // namespace dzo
