#include "dzo/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dzo/errors.hpp"
#include "dzo/estimators.hpp"

namespace dzo {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct MetricsEx {
  TraceRow row;
  Eigen::VectorXd mean_grad;
};

MetricsEx metrics_ex(const SwarmState& state, const ObjectiveSuite& suite,
                     const Eigen::VectorXd* prev_mean_grad, double eta_t,
                     double u_t) {
  const Eigen::VectorXd xbar = state.mean_x();
  MetricsEx out;
  out.mean_grad = suite.global_grad(xbar);
  TraceRow& r = out.row;
  r.t = state.t;
  r.m = state.m;
  r.f_bar = suite.global_value(xbar);
  r.grad_norm_sq = out.mean_grad.squaredNorm();
  r.consensus_err = (state.x.rowwise() - xbar.transpose()).squaredNorm() /
                    static_cast<double>(state.num_agents());
  r.track_err =
      prev_mean_grad == nullptr
          ? kNaN
          : (state.s.rowwise() - prev_mean_grad->transpose()).squaredNorm() /
                static_cast<double>(state.num_agents());
  r.eta_t = eta_t;
  r.u_t = u_t;
  return out;
}

bool row_finite(const TraceRow& r) {
  return std::isfinite(r.f_bar) && std::isfinite(r.grad_norm_sq) &&
         std::isfinite(r.consensus_err) &&
         (std::isnan(r.track_err) || std::isfinite(r.track_err));
}

}  // namespace

TraceRow compute_metrics(const SwarmState& state, const ObjectiveSuite& suite,
                         const Eigen::VectorXd* prev_mean_grad, double eta_t,
                         double u_t) {
  return metrics_ex(state, suite, prev_mean_grad, eta_t, u_t).row;
}

RunResult run(Kernel kernel, const ObjectiveSuite& suite,
              const MixingMatrix& w, const Schedule& schedule, std::int64_t T,
              std::uint64_t seed, const Eigen::MatrixXd& x0) {
  if (T < 1) throw InvalidArgument("iteration count must be >= 1");
  if (x0.rows() != suite.num_agents || x0.cols() != suite.dim)
    throw InvalidArgument("initial state shape does not match the suite");
  if (x0.rows() != w.w.rows())
    throw InvalidArgument("initial state agent count does not match the matrix");
  const bool tracking = kernel != Kernel::alg1;
  if (tracking && !schedule.constant_eta)
    throw InvalidArgument("tracking kernels require a constant step size");

  const ZeroOrderView view(suite);
  RunResult res;
  SwarmState state = SwarmState::initial(x0);
  res.initial_state = state;

  MetricsEx cur = metrics_ex(state, suite, nullptr, 0.0, 0.0);
  res.trace.rows.push_back(cur.row);
  Eigen::VectorXd prev_grad = std::move(cur.mean_grad);

  for (std::int64_t t = 1; t <= T; ++t) {
    const double eta = schedule.eta_at(t);
    const double u = schedule.u_at(t);
    try {
      switch (kernel) {
        case Kernel::alg1:
          alg1_step(state, view, w, eta, u, seed);
          break;
        case Kernel::alg2:
          alg2_step(state, view, w, eta, u);
          break;
        case Kernel::hybrid:
          hybrid_step(state, view, w, eta, u, seed);
          break;
      }
    } catch (const DivergenceError& e) {
      res.divergence = DivergenceInfo{e.agent, e.iteration, e.what()};
      break;
    }
    cur = metrics_ex(state, suite, tracking ? &prev_grad : nullptr, eta, u);
    if (!row_finite(cur.row)) {
      res.divergence = DivergenceInfo{
          -1, t, "metrics at the mean iterate became non-finite"};
      break;
    }
    res.trace.rows.push_back(cur.row);
    prev_grad = std::move(cur.mean_grad);
  }
  res.final_state = std::move(state);
  return res;
}

TrackingBoundReport evaluate_theorem3_bound(const Trace& trace,
                                            const ObjectiveSuite& suite,
                                            const MixingMatrix& w,
                                            const Schedule& schedule,
                                            const SwarmState& initial_state) {
  if (!suite.smoothness.has_value() || !suite.optimal_value.has_value())
    throw InvalidArgument(
        "bound evaluation needs a suite with known L and f*");
  if (trace.rows.size() < 2)
    throw InvalidArgument("bound evaluation needs at least one iteration");
  for (std::size_t i = 0; i < trace.rows.size(); ++i)
    if (trace.rows[i].t != static_cast<std::int64_t>(i))
      throw InvalidArgument("trace must contain consecutive rows from t = 0");

  TrackingBoundReport rep;
  rep.L = *suite.smoothness;
  rep.f_star = *suite.optimal_value;
  rep.rho = w.rho;
  rep.eta = schedule.eta_at(1);
  rep.f0 = trace.rows[0].f_bar;

  const std::int64_t T = static_cast<std::int64_t>(trace.rows.size()) - 1;
  const double one_minus_r2 = 1.0 - rep.rho * rep.rho;

  // Step-size precondition; outside it the bounds are not claimed.
  double ceiling = 1.0 / 6.0;
  if (rep.rho > 0.0)
    ceiling = std::min(ceiling, one_minus_r2 * one_minus_r2 /
                                    (4.0 * rep.rho * rep.rho *
                                     (3.0 + 4.0 * rep.rho * rep.rho)));
  if (!schedule.constant_eta) {
    rep.note = "not covered: step size is not constant";
    return rep;
  }
  if (rep.eta * rep.L > ceiling * (1.0 + 1e-12)) {
    rep.note = "not covered: eta L exceeds the admissible ceiling";
    return rep;
  }
  for (std::int64_t t = 1; t < T; ++t)
    if (schedule.u_at(t + 1) > schedule.u_at(t) * (1.0 + 1e-12)) {
      rep.note = "not covered: radius sequence is not non-increasing";
      return rep;
    }
  double u_sq_sum = 0.0;
  try {
    u_sq_sum = sum_u_squared(schedule.u_at);
  } catch (const InvalidArgument& e) {
    rep.note = std::string("not covered: ") + e.what();
    return rep;
  }
  rep.covered = true;

  const int n = initial_state.num_agents();
  const int d = initial_state.dim();
  rep.r_u = static_cast<double>(d) * u_sq_sum;

  const Eigen::VectorXd xbar0 = initial_state.mean_x();
  double r0 = 0.0;
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd xi = initial_state.x.row(i).transpose();
    r0 += rep.eta * rep.rho * rep.rho / (2.0 * rep.L) *
              suite.local_grad(i, xi).squaredNorm() +
          (xi - xbar0).squaredNorm();
  }
  r0 /= static_cast<double>(n);
  const double u1 = schedule.u_at(1);
  r0 += rep.eta * rep.rho * rep.rho * u1 * u1 * rep.L *
        static_cast<double>(d) / 4.0;
  rep.r0 = r0;

  const double gap0 = rep.f0 - rep.f_star;
  const double c_grad = 3.2 * gap0 / rep.eta +
                        12.8 * rep.L * rep.L * r0 / one_minus_r2 +
                        2.4 * rep.r_u * rep.L * rep.L;
  const double c_cons =
      1.6 * rep.eta * gap0 + 3.2 * r0 / one_minus_r2 + 0.35 * rep.r_u;
  const double c_track = 9.6 * rep.L * gap0 +
                         19.2 * rep.L * r0 / (rep.eta * one_minus_r2) +
                         2.35 * rep.L * rep.r_u / rep.eta;

  rep.grad.name = "mean gradient norm";
  rep.consensus.name = "mean consensus error";
  rep.tracking.name = "mean tracking error";
  for (BoundCheck* b : {&rep.grad, &rep.consensus, &rep.tracking})
    b->margin = std::numeric_limits<double>::infinity();

  auto update = [](BoundCheck& b, double lhs, double rhs, std::int64_t t) {
    const double margin = rhs - lhs;
    if (margin < b.margin) {
      b.margin = margin;
      b.argmin_t = t;
      b.lhs_at_argmin = lhs;
      b.rhs_at_argmin = rhs;
    }
  };

  double sum_grad = 0.0, sum_cons = 0.0, sum_track = 0.0;
  for (std::int64_t t = 1; t <= T; ++t) {
    const double tt = static_cast<double>(t);
    sum_grad += trace.rows[t - 1].grad_norm_sq;   // tau = 0 .. t-1
    sum_cons += trace.rows[t - 1].consensus_err;  // tau = 0 .. t-1
    sum_track += trace.rows[t].track_err;         // tau = 1 .. t
    update(rep.grad, sum_grad / tt, c_grad / tt, t);
    update(rep.consensus, sum_cons / tt, c_cons / tt, t);
    update(rep.tracking, sum_track / tt, c_track / tt, t);
  }
  for (BoundCheck* b : {&rep.grad, &rep.consensus, &rep.tracking})
    b->pass = b->margin >= 0.0;
  return rep;
}

RateFitReport evaluate_theorem4_rate(const Trace& trace, double lambda,
                                     double f_star) {
  RateFitReport rep;
  rep.log_lambda = std::log(lambda);
  if (trace.rows.size() < 2) {
    rep.note = "run too short";
    return rep;
  }
  const double floor =
      1e3 * std::numeric_limits<double>::epsilon() * std::abs(f_star) + 1e-12;

  std::vector<std::pair<double, double>> valid;  // (t, ln gap)
  for (const TraceRow& r : trace.rows) {
    const double gap = r.f_bar - f_star;
    if (gap > floor)
      valid.emplace_back(static_cast<double>(r.t), std::log(gap));
  }
  if (valid.empty() || trace.rows.front().f_bar - f_star <= floor) {
    rep.note = "converged at start: initial objective gap already at the floor";
    return rep;
  }

  const std::int64_t T = trace.rows.back().t;
  auto window_from = [&](double t_begin) {
    std::vector<std::pair<double, double>> w;
    for (const auto& p : valid)
      if (p.first >= t_begin) w.push_back(p);
    return w;
  };
  auto window = window_from(static_cast<double>(T) / 2.0);
  if (window.size() < 50) {
    // The gap hit the floor at or before the nominal window; fit the final
    // half of the rows that are still above it.
    window = window_from(valid.back().first / 2.0);
    rep.note = "fit window shrunk to the final half of above-floor rows";
  }
  if (window.size() < 2) {
    rep.note = "insufficient above-floor rows for a fit";
    return rep;
  }

  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  for (const auto& [t, y] : window) {
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
  }
  const double np = static_cast<double>(window.size());
  const double denom = np * stt - st * st;
  if (denom <= 0.0) {
    rep.note = "degenerate fit window";
    return rep;
  }
  rep.applicable = true;
  rep.slope = (np * sty - st * sy) / denom;
  rep.window_begin = static_cast<std::int64_t>(window.front().first);
  rep.window_end = static_cast<std::int64_t>(window.back().first);
  rep.points = static_cast<int>(window.size());
  rep.pass = rep.slope <= rep.log_lambda + rep.tolerance;
  return rep;
}

MomentReport verify_lemma1(int d, const Eigen::VectorXd& g,
                           std::int64_t samples, RngStream& rng) {
  if (samples < 10000)
    throw InvalidArgument("moment verification needs at least 1e4 samples");
  if (g.size() != d) throw InvalidArgument("gradient dimension mismatch");

  const ValueFn f = [&g](const Eigen::VectorXd& x) { return g.dot(x); };
  const Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
  QueryCounter queries;

  double sum_a = 0.0, sumsq_a = 0.0, sum_b = 0.0, sumsq_b = 0.0;
  for (std::int64_t k = 0; k < samples; ++k) {
    const Eigen::VectorXd z = sample_sphere(d, rng);
    const Eigen::VectorXd est = estimate_2point(f, x, 1.0, z, queries);
    const double a = est.squaredNorm();
    const double b = (est - g).squaredNorm();
    sum_a += a;
    sumsq_a += a * a;
    sum_b += b;
    sumsq_b += b * b;
  }
  const double ns = static_cast<double>(samples);
  MomentReport rep;
  rep.samples = samples;
  rep.mean_sq = sum_a / ns;
  rep.mean_centered = sum_b / ns;
  rep.expected_sq = static_cast<double>(d) * g.squaredNorm();
  rep.expected_centered = static_cast<double>(d - 1) * g.squaredNorm();
  rep.stderr_sq =
      std::sqrt(std::max(0.0, (sumsq_a / ns - rep.mean_sq * rep.mean_sq)) / ns);
  rep.stderr_centered = std::sqrt(
      std::max(0.0, (sumsq_b / ns - rep.mean_centered * rep.mean_centered)) /
      ns);
  const double slack = 1e-12 * (1.0 + g.squaredNorm());
  rep.pass = std::abs(rep.mean_sq - rep.expected_sq) <=
                 5.0 * rep.stderr_sq + slack &&
             std::abs(rep.mean_centered - rep.expected_centered) <=
                 5.0 * rep.stderr_centered + slack;
  return rep;
}

BiasReport verify_estimator_bias(const ValueFn& f, const GradFn& grad,
                                 const Eigen::VectorXd& x,
                                 const std::vector<double>& u_grid, double L) {
  if (!(L > 0.0)) throw InvalidArgument("L must be positive");
  BiasReport rep;
  rep.pass = true;
  const Eigen::VectorXd gx = grad(x);
  const double sqrt_d = std::sqrt(static_cast<double>(x.size()));
  QueryCounter queries;
  for (double u : u_grid) {
    BiasReport::Entry e;
    e.u = u;
    e.error = (estimate_2d_point(f, x, u, queries) - gx).norm();
    e.bound = 0.5 * u * L * sqrt_d + 1e-9;
    e.pass = e.error <= e.bound;
    rep.pass = rep.pass && e.pass;
    rep.entries.push_back(e);
  }
  return rep;
}

MixingCheckReport verify_mixing_matrix(const Graph& g, const MixingMatrix& w,
                                       int num_vectors, int dim,
                                       std::uint64_t seed) {
  const int n = g.num_vertices();
  if (w.w.rows() != n) throw InvalidArgument("matrix size does not match graph");
  MixingCheckReport rep;
  rep.rho = w.rho;

  for (int i = 0; i < n; ++i) {
    rep.max_row_sum_err =
        std::max(rep.max_row_sum_err, std::abs(w.w.row(i).sum() - 1.0));
    rep.max_col_sum_err =
        std::max(rep.max_col_sum_err, std::abs(w.w.col(i).sum() - 1.0));
  }
  rep.pattern_ok = true;
  for (int i = 0; i < n && rep.pattern_ok; ++i) {
    if (!(w.w(i, i) > 0.0)) rep.pattern_ok = false;
    for (int j = i + 1; j < n; ++j)
      if ((w.w(i, j) > 0.0) != g.has_edge(i, j)) rep.pattern_ok = false;
  }

  RngStream rng(seed, stream_tag::spectral, 1);
  rep.worst_contraction_slack = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < num_vectors; ++k) {
    Eigen::MatrixXd x(n, dim);
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < dim; ++c) x(i, c) = rng.normal();
    const Eigen::RowVectorXd mean_in = x.colwise().mean();
    const Eigen::MatrixXd centered = x.rowwise() - mean_in;
    const Eigen::MatrixXd out = consensus_apply(w, x);
    const Eigen::MatrixXd out_centered = out.rowwise() - mean_in;
    rep.worst_contraction_slack =
        std::max(rep.worst_contraction_slack,
                 out_centered.norm() - rep.rho * centered.norm());
    rep.worst_mean_drift =
        std::max(rep.worst_mean_drift,
                 (out.colwise().mean() - mean_in).cwiseAbs().maxCoeff());
  }

  rep.pass = rep.max_row_sum_err <= 1e-12 && rep.max_col_sum_err <= 1e-12 &&
             rep.pattern_ok && rep.rho < 1.0 &&
             rep.worst_contraction_slack <= 1e-9 &&
             rep.worst_mean_drift <= 1e-12;
  return rep;
}

HybridReport verify_hybrid_nonvanishing(const Trace& alg2_trace,
                                        const Trace& hybrid_trace, int dim) {
  HybridReport rep;
  auto track_rows = [](const Trace& tr) {
    std::vector<double> v;
    for (const TraceRow& r : tr.rows)
      if (r.t >= 1 && !std::isnan(r.track_err)) v.push_back(r.track_err);
    return v;
  };
  const std::vector<double> a = track_rows(alg2_trace);
  const std::vector<double> h = track_rows(hybrid_trace);
  if (a.size() < 500 || h.size() < 500) {
    rep.status = CheckStatus::not_applicable;
    rep.note = "runs shorter than 500 recorded tracking iterations";
    return rep;
  }
  if (dim == 1) {
    rep.status = CheckStatus::inconclusive;
    rep.note = "one-dimensional case: the 2-point estimator has no "
               "directional variance";
    return rep;
  }

  auto mean_of = [](const std::vector<double>& v, std::size_t lo,
                    std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    return s / static_cast<double>(hi - lo);
  };
  const std::size_t afifth = a.size() / 5;
  const std::size_t hfifth = h.size() / 5;
  rep.alg2_peak = *std::max_element(a.begin(), a.end());
  rep.alg2_tail_mean = mean_of(a, a.size() - afifth, a.size());
  rep.hybrid_head_mean = mean_of(h, 0, hfifth);
  rep.hybrid_tail_mean = mean_of(h, h.size() - hfifth, h.size());

  const double hybrid_peak = *std::max_element(h.begin(), h.end());
  if (rep.alg2_peak <= 1e-30 && hybrid_peak <= 1e-30) {
    rep.status = CheckStatus::inconclusive;
    rep.note = "tracking errors identically zero (constant objectives)";
    return rep;
  }

  const bool alg2_shrinks = rep.alg2_tail_mean <= rep.alg2_peak / 100.0;
  const bool hybrid_floors = rep.hybrid_tail_mean >= 0.1 * rep.hybrid_head_mean;
  rep.status = (alg2_shrinks && hybrid_floors) ? CheckStatus::pass
                                               : CheckStatus::fail;
  return rep;
}

}  // namespace dzo
