#include "dzo/experiment.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "dzo/errors.hpp"
#include "dzo/textio.hpp"

namespace dzo {

namespace {

Graph resolve_graph(const RunConfig& cfg) {
  if (cfg.edges) {
    Graph g = Graph::from_edges(cfg.n, *cfg.edges);
    if (!is_connected(g))
      throw ConfigError("embedded edge list is not connected", {"graph.edges"});
    return g;
  }
  switch (cfg.graph) {
    case GraphKind::ring: return build_ring(cfg.n);
    case GraphKind::path: return build_path(cfg.n);
    case GraphKind::geometric:
      return build_geometric_sphere(cfg.n, cfg.graph_max_angle, cfg.seed);
  }
  throw InvalidArgument("unreachable graph kind");
}

ObjectiveSuite resolve_suite(const RunConfig& cfg) {
  ObjectiveSuite suite;
  if (cfg.suite == SuiteKind::logistic) {
    if (cfg.logistic_params) {
      suite = make_logistic_suite(cfg.d, cfg.n, *cfg.logistic_params);
    } else {
      RngStream rng(cfg.seed, stream_tag::suite, 0);
      suite = make_logistic_suite(cfg.d, cfg.n, rng);
    }
    suite.smoothness = cfg.L;
    suite.lipschitz = cfg.G;
    suite.pl_constant = cfg.mu;
  } else {
    Eigen::MatrixXd centers;
    if (cfg.quad_centers) {
      centers = *cfg.quad_centers;
    } else {
      RngStream rng(cfg.seed, stream_tag::suite, 0);
      centers.resize(cfg.n, cfg.d);
      for (int i = 0; i < cfg.n; ++i)
        for (int k = 0; k < cfg.d; ++k)
          centers(i, k) = cfg.quad_center_sigma * rng.normal();
    }
    suite = make_quadratic_suite(centers);
  }
  return suite;
}

Schedule resolve_schedule(const RunConfig& cfg, double rho) {
  try {
    switch (cfg.schedule) {
      case ScheduleKind::theorem1:
        return schedule_theorem1(*cfg.L, cfg.d, cfg.alpha_eta, cfg.alpha_u,
                                 *cfg.G, cfg.gamma);
      case ScheduleKind::theorem2:
        return schedule_theorem2(*cfg.mu, *cfg.L, cfg.d, rho, cfg.alpha_eta,
                                 cfg.alpha_u);
      case ScheduleKind::theorem3_constant: {
        const double u0 = cfg.u0, u_pow = cfg.u_pow;
        return schedule_theorem3(*cfg.L, rho, [u0, u_pow](std::int64_t t) {
          return u0 / std::pow(static_cast<double>(t), u_pow);
        });
      }
      case ScheduleKind::theorem4_linear:
        return schedule_theorem4(*cfg.mu, *cfg.L, rho, cfg.alpha, cfg.u1,
                                 cfg.lambda_tilde);
      case ScheduleKind::manual:
        return schedule_manual(cfg.eta0, cfg.eta_pow, cfg.u0, cfg.u_pow);
    }
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("schedule rejected: ") + e.what(),
                      {"schedule"});
  }
  throw InvalidArgument("unreachable schedule kind");
}

Eigen::MatrixXd resolve_x0(const RunConfig& cfg) {
  if (cfg.x0) return *cfg.x0;
  Eigen::MatrixXd x0(cfg.n, cfg.d);
  if (cfg.init == InitKind::zero) {
    x0.setZero();
    return x0;
  }
  RngStream rng(cfg.seed, stream_tag::init, 0);
  for (int i = 0; i < cfg.n; ++i)
    for (int k = 0; k < cfg.d; ++k) x0(i, k) = cfg.init_sigma * rng.normal();
  return x0;
}

std::string join_row(const Eigen::VectorXd& v) {
  std::string out;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (k) out.push_back(' ');
    out += format_double(v(k));
  }
  return out;
}

}  // namespace

ResolvedRun resolve_run(const RunConfig& cfg) {
  ResolvedRun run;
  run.config = cfg;
  run.graph = resolve_graph(cfg);
  run.w = cfg.weights == WeightScheme::metropolis
              ? metropolis_weights(run.graph)
              : lazy_metropolis_weights(run.graph);
  run.suite = resolve_suite(cfg);
  run.schedule = resolve_schedule(cfg, run.w.rho);
  run.x0 = resolve_x0(cfg);

  // normalize: embed every resolved draw so the config doubles as manifest
  run.config.edges = run.graph.edges();
  if (cfg.suite == SuiteKind::logistic)
    run.config.logistic_params = std::get<LogisticSuiteParams>(run.suite.params);
  else
    run.config.quad_centers = std::get<QuadraticSuiteParams>(run.suite.params).centers;
  run.config.x0 = run.x0;
  return run;
}

std::string manifest_text(const ResolvedRun& run) {
  const RunConfig& c = run.config;
  std::string out;
  auto put = [&out](const std::string& key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out.push_back('\n');
  };

  put("kernel", to_string(c.kernel));
  put("suite", to_string(c.suite));
  put("d", format_int(c.d));
  put("n", format_int(c.n));
  put("T", format_int(c.T));
  put("seed", format_int(static_cast<std::int64_t>(c.seed)));
  put("graph", to_string(c.graph));
  if (c.graph == GraphKind::geometric)
    put("graph.max_angle", format_double(c.graph_max_angle));
  put("weights", to_string(c.weights));
  put("schedule", to_string(c.schedule));
  switch (c.schedule) {
    case ScheduleKind::theorem1:
      put("schedule.alpha_eta", format_double(c.alpha_eta));
      put("schedule.alpha_u", format_double(c.alpha_u));
      put("schedule.gamma", format_double(c.gamma));
      break;
    case ScheduleKind::theorem2:
      put("schedule.alpha_eta", format_double(c.alpha_eta));
      put("schedule.alpha_u", format_double(c.alpha_u));
      break;
    case ScheduleKind::theorem3_constant:
      put("schedule.u0", format_double(c.u0));
      put("schedule.u_pow", format_double(c.u_pow));
      break;
    case ScheduleKind::theorem4_linear:
      put("schedule.alpha", format_double(c.alpha));
      put("schedule.u1", format_double(c.u1));
      put("schedule.lambda_tilde", format_double(c.lambda_tilde));
      break;
    case ScheduleKind::manual:
      put("schedule.eta0", format_double(c.eta0));
      put("schedule.eta_pow", format_double(c.eta_pow));
      put("schedule.u0", format_double(c.u0));
      put("schedule.u_pow", format_double(c.u_pow));
      break;
  }
  if (c.suite == SuiteKind::logistic) {
    if (c.L) put("suite.L", format_double(*c.L));
    if (c.G) put("suite.G", format_double(*c.G));
    if (c.mu) put("suite.mu", format_double(*c.mu));
  } else {
    put("quadratic.center_sigma", format_double(c.quad_center_sigma));
  }
  put("init", to_string(c.init));
  if (c.init == InitKind::gaussian)
    put("init.sigma", format_double(c.init_sigma));

  put("graph.rho", format_double(run.w.rho));
  put("instance.resampling", "graph, suite and initial points per seed");

  {
    std::string edges;
    for (auto [i, j] : run.graph.edges()) {
      if (!edges.empty()) edges.push_back(' ');
      edges += format_int(i);
      edges.push_back('-');
      edges += format_int(j);
    }
    put("graph.edges", edges);
  }
  if (c.suite == SuiteKind::logistic) {
    const auto& p = *c.logistic_params;
    put("suite.a", join_row(p.a));
    put("suite.b", join_row(p.b));
    put("suite.nu", join_row(p.nu));
    for (int i = 0; i < c.n; ++i)
      put("suite.xi." + std::to_string(i), join_row(p.xi.row(i).transpose()));
  } else {
    for (int i = 0; i < c.n; ++i)
      put("quadratic.centers." + std::to_string(i),
          join_row(c.quad_centers->row(i).transpose()));
  }
  for (int i = 0; i < c.n; ++i)
    put("init.x." + std::to_string(i), join_row(c.x0->row(i).transpose()));
  return out;
}

RunResult run_experiment(const ResolvedRun& r) {
  return run(r.config.kernel, r.suite, r.w, r.schedule, r.config.T,
             r.config.seed, r.x0);
}

std::string summary_to_csv(const std::vector<const Trace*>& traces) {
  if (traces.empty()) throw InvalidArgument("summary needs at least one trace");
  const std::size_t rows = traces.front()->rows.size();
  for (const Trace* tr : traces)
    if (tr->rows.size() != rows)
      throw InvalidArgument("summary needs equal-length traces");

  std::string out = "t,m";
  for (const char* metric :
       {"f_bar", "grad_norm_sq", "consensus_err", "track_err"})
    for (const char* stat : {"mean", "min", "max"})
      out += std::string(",") + metric + "_" + stat;
  out.push_back('\n');

  for (std::size_t i = 0; i < rows; ++i) {
    out += format_int(traces.front()->rows[i].t);
    out.push_back(',');
    out += format_int(traces.front()->rows[i].m);
    auto emit = [&](auto field) {
      double sum = 0.0, lo = 0.0, hi = 0.0;
      bool defined = true;
      for (std::size_t k = 0; k < traces.size(); ++k) {
        const double v = field(traces[k]->rows[i]);
        if (std::isnan(v)) {
          defined = false;
          break;
        }
        sum += v;
        lo = (k == 0) ? v : std::min(lo, v);
        hi = (k == 0) ? v : std::max(hi, v);
      }
      if (!defined) {
        out += ",,,";
        return;
      }
      out.push_back(',');
      out += format_double(sum / static_cast<double>(traces.size()));
      out.push_back(',');
      out += format_double(lo);
      out.push_back(',');
      out += format_double(hi);
    };
    emit([](const TraceRow& r) { return r.f_bar; });
    emit([](const TraceRow& r) { return r.grad_norm_sq; });
    emit([](const TraceRow& r) { return r.consensus_err; });
    emit([](const TraceRow& r) { return r.track_err; });
    out.push_back('\n');
  }
  return out;
}

SweepResult run_sweep(const RunConfig& base,
                      const std::vector<std::uint64_t>& seeds,
                      int parallelism) {
  if (seeds.empty()) throw InvalidArgument("sweep needs at least one seed");
  SweepResult result;
  result.entries.resize(seeds.size());

  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  const int workers = std::min<int>(
      static_cast<int>(seeds.size()),
      parallelism > 0 ? parallelism : std::max(1, hw));

  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    while (true) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= seeds.size()) return;
      SweepEntry& entry = result.entries[idx];
      entry.seed = seeds[idx];
      RunConfig cfg = base;
      cfg.seed = seeds[idx];
      // every instance-level draw is reseeded; embedded data would pin the
      // instance across seeds, which is not what a sweep means
      cfg.edges.reset();
      cfg.logistic_params.reset();
      cfg.quad_centers.reset();
      cfg.x0.reset();
      try {
        const ResolvedRun run = resolve_run(cfg);
        entry.manifest = manifest_text(run);
        RunResult rr = run_experiment(run);
        entry.trace = std::move(rr.trace);
        if (rr.divergence) {
          entry.failed = true;
          entry.error = rr.divergence->message;
        }
      } catch (const Error& e) {
        entry.failed = true;
        entry.error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int i = 0; i < workers; ++i) pool.emplace_back(work);
  for (auto& th : pool) th.join();

  std::vector<const Trace*> complete;
  for (const SweepEntry& e : result.entries) {
    result.any_failed = result.any_failed || e.failed;
    if (!e.failed) complete.push_back(&e.trace);
  }
  if (!complete.empty()) result.summary_csv = summary_to_csv(complete);
  return result;
}

}  // namespace dzo
