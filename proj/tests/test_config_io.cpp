#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "dzo/config.hpp"
#include "dzo/errors.hpp"
#include "dzo/experiment.hpp"
#include "dzo/textio.hpp"
#include "dzo/trace.hpp"

using namespace dzo;

namespace {

const char* kBaseConfig = R"(# benchmark run at desk scale
kernel = alg1
suite = logistic
d = 6
n = 5
T = 40
seed = 3
graph = ring
weights = metropolis
schedule = manual
schedule.eta0 = 0.02
schedule.eta_pow = 0.5
schedule.u0 = 4
schedule.u_pow = 0.5
init = gaussian
init.sigma = 1.25
)";

bool lists_key(const ConfigError& e, const std::string& key) {
  return std::find(e.keys.begin(), e.keys.end(), key) != e.keys.end();
}

std::string drop_line(const std::string& text, const std::string& prefix) {
  std::string out;
  for (auto line : split(text, '\n')) {
    const auto t = trim(line);
    if (t.substr(0, prefix.size()) == prefix) continue;
    out += std::string(line) + "\n";
  }
  return out;
}

}  // namespace

TEST_CASE("config parsing basics") {
  const RunConfig c = parse_run_config(kBaseConfig);
  CHECK(c.kernel == Kernel::alg1);
  CHECK(c.suite == SuiteKind::logistic);
  CHECK(c.d == 6);
  CHECK(c.n == 5);
  CHECK(c.T == 40);
  CHECK(c.seed == 3);
  CHECK(c.eta0 == 0.02);
  CHECK(c.init_sigma == 1.25);
  CHECK_FALSE(c.edges.has_value());
}

TEST_CASE("config errors name the offending keys") {
  SUBCASE("missing seed") {
    try {
      parse_run_config(drop_line(kBaseConfig, "seed"));
      FAIL("expected a config error");
    } catch (const ConfigError& e) {
      CHECK(lists_key(e, "seed"));
    }
  }
  SUBCASE("unknown key") {
    try {
      parse_run_config(std::string(kBaseConfig) + "mystery = 1\n");
      FAIL("expected a config error");
    } catch (const ConfigError& e) {
      CHECK(lists_key(e, "mystery"));
    }
  }
  SUBCASE("duplicate key") {
    try {
      parse_run_config(std::string(kBaseConfig) + "d = 7\n");
      FAIL("expected a config error");
    } catch (const ConfigError& e) {
      CHECK(lists_key(e, "d"));
    }
  }
  SUBCASE("malformed number") {
    try {
      parse_run_config(drop_line(kBaseConfig, "T") + "T = soon\n");
      FAIL("expected a config error");
    } catch (const ConfigError& e) {
      CHECK(lists_key(e, "T"));
    }
  }
  SUBCASE("several problems reported at once") {
    try {
      parse_run_config(drop_line(drop_line(kBaseConfig, "seed"), "init.sigma"));
      FAIL("expected a config error");
    } catch (const ConfigError& e) {
      CHECK(lists_key(e, "seed"));
      CHECK(lists_key(e, "init.sigma"));
    }
  }
  SUBCASE("tracking kernel with a decaying step") {
    std::string text = kBaseConfig;
    text.replace(text.find("kernel = alg1"), 13, "kernel = alg2");
    try {
      parse_run_config(text);
      FAIL("expected a config error");
    } catch (const ConfigError& e) {
      CHECK(lists_key(e, "schedule"));
    }
  }
  SUBCASE("schedule parameter out of range") {
    std::string text = drop_line(kBaseConfig, "schedule");
    text += "schedule = theorem1\nschedule.alpha_eta = 2\nschedule.alpha_u = 1\nschedule.gamma = 2\n";
    text += "suite.L = 1\nsuite.G = 1\n";
    try {
      parse_run_config(text);
      FAIL("expected a config error");
    } catch (const ConfigError& e) {
      CHECK(lists_key(e, "schedule.alpha_eta"));
    }
  }
}

TEST_CASE("trace CSV round-trips byte for byte") {
  Trace tr;
  tr.rows.push_back({0, 0, 1.25, 0.5, 0.0,
                     std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0});
  tr.rows.push_back({1, 2, 1.2000000000000002, 0.4999999999, 1e-17,
                     std::numeric_limits<double>::quiet_NaN(), 0.02, 4.0});
  tr.rows.push_back({2, 4, -3.5e-300, 12345.678901234567, 0.1,
                     std::numeric_limits<double>::quiet_NaN(), 0.0141421, 2.82});
  const std::string text = trace_to_csv(tr);
  const Trace back = trace_from_csv(text);
  CHECK(trace_to_csv(back) == text);
  CHECK(back.rows.size() == 3);
  CHECK(back.rows[1].f_bar == 1.2000000000000002);

  Trace with_track = tr;
  with_track.rows[1].track_err = 0.125;
  const std::string text2 = trace_to_csv(with_track);
  CHECK(trace_from_csv(text2).rows[1].track_err == 0.125);
  CHECK(trace_to_csv(trace_from_csv(text2)) == text2);

  CHECK_THROWS_AS(trace_from_csv("nonsense\n"), InvalidArgument);
}

TEST_CASE("resolve, manifest, replay") {
  const RunConfig cfg = parse_run_config(kBaseConfig);
  const ResolvedRun resolved = resolve_run(cfg);
  const RunResult first = run_experiment(resolved);
  REQUIRE_FALSE(first.divergence.has_value());
  const std::string manifest = manifest_text(resolved);
  const std::string csv = trace_to_csv(first.trace);

  SUBCASE("manifest parses as a config and replays byte-identically") {
    const RunConfig replay_cfg = parse_run_config(manifest);
    CHECK(replay_cfg.edges.has_value());
    CHECK(replay_cfg.logistic_params.has_value());
    CHECK(replay_cfg.x0.has_value());
    const ResolvedRun replay = resolve_run(replay_cfg);
    const RunResult second = run_experiment(replay);
    CHECK(trace_to_csv(second.trace) == csv);
    CHECK(manifest_text(replay) == manifest);
  }

  SUBCASE("same config resolves to the same run") {
    const ResolvedRun again = resolve_run(parse_run_config(kBaseConfig));
    CHECK(manifest_text(again) == manifest);
    CHECK(trace_to_csv(run_experiment(again).trace) == csv);
  }

  SUBCASE("an edited initial point changes the trace") {
    RunConfig tweaked = parse_run_config(manifest);
    Eigen::MatrixXd x0 = *tweaked.x0;
    x0(0, 0) += 0.5;
    tweaked.x0 = x0;
    const RunResult third = run_experiment(resolve_run(tweaked));
    CHECK(trace_to_csv(third.trace) != csv);
  }
}

TEST_CASE("quadratic suite through the config path") {
  std::string text = R"(kernel = alg2
suite = quadratic
d = 3
n = 4
T = 30
seed = 11
graph = path
weights = lazy-metropolis
schedule = theorem3-constant
schedule.u0 = 0.1
schedule.u_pow = 1
init = zero
)";
  const ResolvedRun resolved = resolve_run(parse_run_config(text));
  CHECK(resolved.suite.smoothness == 1.0);
  CHECK(std::get<QuadraticSuiteParams>(resolved.suite.params).centers.rows() == 4);
  CHECK(resolved.schedule.constant_eta);
  const RunResult r = run_experiment(resolved);
  CHECK_FALSE(r.divergence.has_value());
  // replay
  const RunConfig replay = parse_run_config(manifest_text(resolved));
  CHECK(trace_to_csv(run_experiment(resolve_run(replay)).trace) ==
        trace_to_csv(r.trace));
}

TEST_CASE("sweeps") {
  const RunConfig base = parse_run_config(kBaseConfig);

  SUBCASE("three seeds, three independent entries") {
    const SweepResult s = run_sweep(base, {1, 2, 3});
    REQUIRE(s.entries.size() == 3);
    CHECK_FALSE(s.any_failed);
    CHECK(s.entries[0].trace.rows.size() == 41);
    CHECK(trace_to_csv(s.entries[0].trace) != trace_to_csv(s.entries[1].trace));
  }

  SUBCASE("duplicate seeds give identical member traces") {
    const SweepResult s = run_sweep(base, {7, 7});
    CHECK(trace_to_csv(s.entries[0].trace) == trace_to_csv(s.entries[1].trace));
    CHECK(s.entries[0].manifest == s.entries[1].manifest);
  }

  SUBCASE("single-seed envelope equals the trace") {
    const SweepResult s = run_sweep(base, {5});
    const Trace& tr = s.entries[0].trace;
    const auto lines = split(s.summary_csv, '\n');
    REQUIRE(lines.size() == tr.rows.size() + 2);  // header + rows + trailing
    // spot-check one row: mean = min = max = the trace value
    const auto fields = split(lines[2], ',');
    REQUIRE(fields.size() == 14);
    CHECK(parse_double(fields[2]) == tr.rows[1].f_bar);
    CHECK(parse_double(fields[3]) == tr.rows[1].f_bar);
    CHECK(parse_double(fields[4]) == tr.rows[1].f_bar);
  }

  SUBCASE("failures are recorded and the sweep continues") {
    // a hopeless geometric radius cannot build a connected graph
    RunConfig bad = base;
    bad.graph = GraphKind::geometric;
    bad.graph_max_angle = 0.01;
    const SweepResult s = run_sweep(bad, {1, 2});
    CHECK(s.any_failed);
    CHECK(s.entries[0].failed);
    CHECK_FALSE(s.entries[0].error.empty());
  }
}

TEST_CASE("embedded suite parameters survive the manifest round trip") {
  const ResolvedRun resolved = resolve_run(parse_run_config(kBaseConfig));
  const RunConfig replay = parse_run_config(manifest_text(resolved));
  const auto& a = *resolved.config.logistic_params;
  const auto& b = *replay.logistic_params;
  CHECK(a.a == b.a);
  CHECK(a.b == b.b);
  CHECK(a.nu == b.nu);
  CHECK(a.xi == b.xi);
  CHECK(*resolved.config.x0 == *replay.x0);
  CHECK(*resolved.config.edges == *replay.edges);
}
