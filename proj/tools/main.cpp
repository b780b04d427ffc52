// Command-line front end: deterministic experiment runs, seed sweeps and
// self-contained verification checks. Exit codes: 0 success, 2 invalid
// config or usage, 3 divergence (partial trace still written).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dzo/errors.hpp"
#include "dzo/experiment.hpp"
#include "dzo/textio.hpp"

namespace fs = std::filesystem;
using namespace dzo;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file: " + path, {path});
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) throw Error("cannot write " + path.string());
}

fs::path output_dir(const RunConfig& cfg) {
  if (!cfg.output.empty()) return cfg.output;
  if (const char* env = std::getenv("DZO_OUTPUT_DIR"); env && *env) return env;
  return ".";
}

void print_config_error(const ConfigError& e) {
  std::cerr << "config error: " << e.what() << '\n';
  if (!e.keys.empty()) {
    std::cerr << "offending keys:";
    for (const auto& k : e.keys) std::cerr << ' ' << k;
    std::cerr << '\n';
  }
}

int cmd_run(const std::string& config_path) {
  const RunConfig cfg = parse_run_config(read_file(config_path));
  const ResolvedRun resolved = resolve_run(cfg);
  const fs::path dir = output_dir(cfg);
  const RunResult result = run_experiment(resolved);
  write_file(dir / "manifest.txt", manifest_text(resolved));
  write_file(dir / "trace.csv", trace_to_csv(result.trace));
  if (result.divergence) {
    std::cerr << "divergence: " << result.divergence->message
              << " (partial trace written to " << (dir / "trace.csv").string()
              << ")\n";
    return kExitDivergence;
  }
  std::cout << "run complete: " << result.trace.rows.back().t
            << " iterations, outputs in " << dir.string() << '\n';
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& seed_list) {
  const RunConfig base = parse_run_config(read_file(config_path));
  std::vector<std::uint64_t> seeds;
  for (auto part : split(seed_list, ',')) {
    part = trim(part);
    if (part.empty()) continue;
    seeds.push_back(parse_uint(part));
  }
  if (seeds.empty())
    throw ConfigError("sweep needs at least one seed", {"--seeds"});

  const fs::path dir = output_dir(base);
  const SweepResult sweep = run_sweep(base, seeds);
  for (const SweepEntry& e : sweep.entries) {
    const fs::path sub = dir / ("seed_" + std::to_string(e.seed));
    if (!e.manifest.empty()) write_file(sub / "manifest.txt", e.manifest);
    if (!e.trace.rows.empty()) write_file(sub / "trace.csv", trace_to_csv(e.trace));
    if (e.failed)
      std::cerr << "seed " << e.seed << " failed: " << e.error << '\n';
  }
  if (!sweep.summary_csv.empty())
    write_file(dir / "summary.csv", sweep.summary_csv);
  std::cout << "sweep complete: " << seeds.size() << " seeds, outputs in "
            << dir.string() << '\n';
  return sweep.any_failed ? 1 : kExitOk;
}

// ---- verification subcommands -------------------------------------------

bool report_line(const std::string& name, bool pass, const std::string& detail) {
  std::cout << (pass ? "PASS" : "FAIL") << ' ' << name;
  if (!detail.empty()) std::cout << ": " << detail;
  std::cout << '\n';
  return pass;
}

bool verify_lemma1_cmd(std::int64_t samples, std::uint64_t seed) {
  const int d = 16;
  Eigen::VectorXd g = Eigen::VectorXd::Zero(d);
  g(0) = 1.0;
  RngStream rng(seed, 0, 0);
  const MomentReport rep = verify_lemma1(d, g, samples, rng);
  bool ok = true;
  ok &= report_line(
      "second moment of the 2-point estimate", rep.pass,
      "mean " + format_double(rep.mean_sq) + " vs expected " +
          format_double(rep.expected_sq) + " (stderr " +
          format_double(rep.stderr_sq) + ")");
  ok &= report_line(
      "deviation moment about the gradient", rep.pass,
      "mean " + format_double(rep.mean_centered) + " vs expected " +
          format_double(rep.expected_centered) + " (stderr " +
          format_double(rep.stderr_centered) + ")");
  return ok;
}

bool verify_bias_cmd() {
  bool ok = true;
  {
    // quadratic: coordinate estimator is exact for every radius
    const int d = 4;
    Eigen::MatrixXd a(d, d);
    a << 2, 1, 0, 0, 1, 3, 1, 0, 0, 1, 2, 1, 0, 0, 1, 4;
    Eigen::VectorXd b(d);
    b << 1, -2, 0.5, 3;
    const ValueFn f = [&a, &b](const Eigen::VectorXd& x) {
      return 0.5 * x.dot(a * x) + b.dot(x);
    };
    const GradFn grad = [&a, &b](const Eigen::VectorXd& x) {
      return Eigen::VectorXd(a * x + b);
    };
    Eigen::VectorXd x(d);
    x << 0.3, -1.2, 0.7, 2.0;
    const double L = a.operatorNorm();
    const BiasReport rep = verify_estimator_bias(f, grad, x, {1.0, 0.1, 0.01}, L);
    for (const auto& e : rep.entries) {
      const bool exact = e.error <= 1e-10;
      ok &= report_line("quadratic exactness at u = " + format_double(e.u),
                        exact && e.pass, "error " + format_double(e.error));
    }
  }
  {
    // cubic in one dimension: error is u^2 exactly, within (1/2) u L sqrt(d)
    const ValueFn f = [](const Eigen::VectorXd& x) { return x(0) * x(0) * x(0); };
    const GradFn grad = [](const Eigen::VectorXd& x) {
      Eigen::VectorXd g(1);
      g(0) = 3.0 * x(0) * x(0);
      return g;
    };
    Eigen::VectorXd x(1);
    x(0) = 1.0;
    const BiasReport rep =
        verify_estimator_bias(f, grad, x, {0.1, 0.05, 0.025}, 12.0);
    const auto& e0 = rep.entries[0];
    ok &= report_line("cubic error at u = 0.1 equals 0.01",
                      std::abs(e0.error - 0.01) <= 1e-12 && e0.pass,
                      "error " + format_double(e0.error) + ", bound " +
                          format_double(e0.bound));
    const double q1 = rep.entries[0].error / rep.entries[1].error;
    const double q2 = rep.entries[1].error / rep.entries[2].error;
    ok &= report_line("cubic error quarters when u halves",
                      q1 > 3.9 && q1 < 4.1 && q2 > 3.9 && q2 < 4.1,
                      "ratios " + format_double(q1) + ", " + format_double(q2));
  }
  return ok;
}

bool verify_contraction_cmd(std::uint64_t seed) {
  bool ok = true;
  struct Case {
    std::string name;
    Graph graph;
  };
  std::vector<Case> cases;
  cases.push_back({"ring n=4", build_ring(4)});
  cases.push_back({"path n=3", build_path(3)});
  cases.push_back(
      {"geometric n=50", build_geometric_sphere(50, std::acos(-1.0) / 4, seed)});
  for (const Case& c : cases) {
    for (const bool lazy : {false, true}) {
      const MixingMatrix w =
          lazy ? lazy_metropolis_weights(c.graph) : metropolis_weights(c.graph);
      const MixingCheckReport rep = verify_mixing_matrix(c.graph, w, 100, 8, seed);
      ok &= report_line((lazy ? "lazy metropolis " : "metropolis ") + c.name,
                        rep.pass,
                        "rho " + format_double(rep.rho) + ", contraction slack " +
                            format_double(rep.worst_contraction_slack));
      if (lazy) {
        const double n = c.graph.num_vertices();
        const bool bound = rep.rho <= 1.0 - 1.0 / (71.0 * n * n);
        ok &= report_line("lazy rho bound 1 - 1/(71 n^2) " + c.name, bound,
                          "rho " + format_double(rep.rho));
      }
    }
  }
  return ok;
}

bool verify_theorem3_cmd(std::uint64_t seed) {
  const int d = 8, n = 10;
  const std::int64_t T = 5000;
  RngStream rng(seed, stream_tag::suite, 0);
  Eigen::MatrixXd centers(n, d);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < d; ++k) centers(i, k) = rng.normal();
  const ObjectiveSuite suite = make_quadratic_suite(centers);
  const MixingMatrix w = metropolis_weights(build_ring(n));
  const Schedule sched = schedule_theorem3(
      1.0, w.rho, [](std::int64_t t) { return 0.1 / static_cast<double>(t); });
  RngStream init(seed, stream_tag::init, 0);
  Eigen::MatrixXd x0(n, d);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < d; ++k) x0(i, k) = init.normal();

  const RunResult rr = run(Kernel::alg2, suite, w, sched, T, seed, x0);
  if (rr.divergence) return report_line("tracking run", false, rr.divergence->message);
  const TrackingBoundReport rep =
      evaluate_theorem3_bound(rr.trace, suite, w, sched, rr.initial_state);
  bool ok = report_line("step-size precondition covered", rep.covered, rep.note);
  for (const BoundCheck* b : {&rep.grad, &rep.consensus, &rep.tracking})
    ok &= report_line("ergodic bound on " + b->name, b->pass,
                      "min margin " + format_double(b->margin) + " at t = " +
                          format_int(b->argmin_t));
  return ok;
}

bool verify_theorem4_cmd(std::uint64_t seed) {
  const int d = 4, n = 8;
  const std::int64_t T = 3000;
  RngStream rng(seed, stream_tag::suite, 0);
  Eigen::MatrixXd centers(n, d);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < d; ++k) centers(i, k) = rng.normal();
  const ObjectiveSuite suite = make_quadratic_suite(centers);
  const MixingMatrix w = metropolis_weights(build_ring(n));
  const double lambda = theorem4_lambda(1.0, 1.0, w.rho, 1.0);
  const Schedule sched =
      schedule_theorem4(1.0, 1.0, w.rho, 1.0, 1.0, lambda * lambda);
  RngStream init(seed, stream_tag::init, 0);
  Eigen::MatrixXd x0(n, d);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < d; ++k) x0(i, k) = init.normal();

  const RunResult rr = run(Kernel::alg2, suite, w, sched, T, seed, x0);
  if (rr.divergence) return report_line("tracking run", false, rr.divergence->message);
  const RateFitReport rep =
      evaluate_theorem4_rate(rr.trace, sched.lambda, *suite.optimal_value);
  return report_line(
      "linear decay of the objective gap", rep.applicable && rep.pass,
      "fitted slope " + format_double(rep.slope) + " vs ln(lambda) + 0.01 = " +
          format_double(rep.log_lambda + rep.tolerance) +
          (rep.note.empty() ? "" : " [" + rep.note + "]"));
}

bool verify_hybrid_cmd(std::uint64_t seed) {
  const int d = 16, n = 20;
  const std::int64_t T = 3000;
  RngStream rng(seed, stream_tag::suite, 0);
  const ObjectiveSuite suite = make_logistic_suite(d, n, rng);
  const MixingMatrix w = metropolis_weights(build_ring(n));
  RngStream init(seed, stream_tag::init, 0);
  const double sigma = 5.0 / std::sqrt(static_cast<double>(d));
  Eigen::MatrixXd x0(n, d);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < d; ++k) x0(i, k) = sigma * init.normal();

  const Schedule alg2_sched = schedule_manual(0.02, 0.0, 4.0, 0.75);
  const Schedule hybrid_sched = schedule_manual(2e-4, 0.0, 4.0, 0.75);
  const RunResult a = run(Kernel::alg2, suite, w, alg2_sched, T, seed, x0);
  const RunResult h = run(Kernel::hybrid, suite, w, hybrid_sched, T, seed, x0);
  if (a.divergence) return report_line("2d-point tracking run", false, a.divergence->message);
  if (h.divergence) return report_line("2-point tracking run", false, h.divergence->message);

  const HybridReport rep = verify_hybrid_nonvanishing(a.trace, h.trace, d);
  const std::string detail =
      "2d-point: peak " + format_double(rep.alg2_peak) + " -> tail mean " +
      format_double(rep.alg2_tail_mean) + "; 2-point: head mean " +
      format_double(rep.hybrid_head_mean) + " -> tail mean " +
      format_double(rep.hybrid_tail_mean) +
      (rep.note.empty() ? "" : " [" + rep.note + "]");
  return report_line("tracker noise floor does not vanish",
                     rep.status == CheckStatus::pass, detail);
}

int cmd_verify(const std::string& which, std::int64_t samples,
               std::uint64_t seed) {
  bool ok = false;
  if (which == "lemma1") ok = verify_lemma1_cmd(samples, seed);
  else if (which == "bias") ok = verify_bias_cmd();
  else if (which == "contraction") ok = verify_contraction_cmd(seed);
  else if (which == "theorem3") ok = verify_theorem3_cmd(seed);
  else if (which == "theorem4") ok = verify_theorem4_cmd(seed);
  else if (which == "hybrid") ok = verify_hybrid_cmd(seed);
  else {
    std::cerr << "unknown verify selector '" << which
              << "' (expected lemma1 | bias | contraction | theorem3 | "
                 "theorem4 | hybrid)\n";
    return kExitConfig;
  }
  return ok ? kExitOk : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic multi-agent derivative-free optimization lab"};
  app.require_subcommand(1);

  std::string run_config;
  CLI::App* run_cmd = app.add_subcommand("run", "execute one configured run");
  run_cmd->add_option("config", run_config, "config or manifest file")->required();

  std::string verify_which;
  std::int64_t samples = 100000;
  std::uint64_t seed = 1;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "run a self-contained verification check");
  verify_cmd->add_option("which", verify_which,
                         "lemma1 | bias | contraction | theorem3 | theorem4 | hybrid")
      ->required();
  verify_cmd->add_option("--samples", samples, "Monte Carlo sample count");
  verify_cmd->add_option("--seed", seed, "seed for verification draws");

  std::string sweep_config, sweep_seeds;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run one config over many seeds");
  sweep_cmd->add_option("config", sweep_config, "config file")->required();
  sweep_cmd->add_option("--seeds", sweep_seeds, "comma-separated seed list")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run_config);
    if (verify_cmd->parsed()) return cmd_verify(verify_which, samples, seed);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_config, sweep_seeds);
  } catch (const ConfigError& e) {
    print_config_error(e);
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitConfig;
}
