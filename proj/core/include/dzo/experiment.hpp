#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dzo/config.hpp"
#include "dzo/harness.hpp"
#include "dzo/network.hpp"

namespace dzo {

/// A run with every random draw resolved: graph, mixing matrix, suite,
/// schedule and initial points. `config` is normalized to embed the
/// resolved data, so serializing it yields a replayable manifest.
struct ResolvedRun {
  RunConfig config;
  Graph graph;
  MixingMatrix w;
  ObjectiveSuite suite;
  Schedule schedule;
  Eigen::MatrixXd x0;
};

/// Build all run inputs. Draws whatever the config does not embed, using
/// streams keyed by the config seed. Parameter combinations the schedule
/// constructors reject surface as ConfigError.
ResolvedRun resolve_run(const RunConfig& cfg);

/// Flat key = value manifest with every resolved parameter, the seed, the
/// edge list and the suite parameters. A manifest is itself a valid config;
/// re-running it reproduces the trace byte for byte. The output path is
/// deliberately not part of it.
std::string manifest_text(const ResolvedRun& run);

RunResult run_experiment(const ResolvedRun& run);

struct SweepEntry {
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;       // resolve/run failure, or divergence message
  std::string manifest;    // empty when resolve failed
  Trace trace;             // partial on divergence
};

struct SweepResult {
  std::vector<SweepEntry> entries;
  std::string summary_csv;  // per-t mean/min/max envelope over complete runs
  bool any_failed = false;
};

/// Run the base config once per seed (instance, graph and initial points
/// are resampled per seed). Runs execute in parallel; results are
/// deterministic per seed regardless of scheduling.
SweepResult run_sweep(const RunConfig& base, const std::vector<std::uint64_t>& seeds,
                      int parallelism = 0);

/// Envelope CSV across equal-length traces:
/// t,m,<metric>_mean,<metric>_min,<metric>_max for the four metrics.
std::string summary_to_csv(const std::vector<const Trace*>& traces);

}  // namespace dzo
