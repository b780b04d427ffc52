#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dzo/algorithms.hpp"
#include "dzo/objectives.hpp"
#include "dzo/schedule.hpp"

namespace dzo {

enum class SuiteKind { logistic, quadratic };
enum class GraphKind { ring, path, geometric };
enum class WeightScheme { metropolis, lazy_metropolis };
enum class InitKind { gaussian, zero };

/// Parsed, range-validated run description. The optional blocks at the
/// bottom hold resolved draws (edge list, suite parameters, initial
/// points); manifests carry them so a replay rebuilds the identical run
/// without repeating any sampling.
struct RunConfig {
  Kernel kernel = Kernel::alg1;
  SuiteKind suite = SuiteKind::logistic;
  int d = 0;
  int n = 0;
  std::int64_t T = 0;
  std::uint64_t seed = 0;

  GraphKind graph = GraphKind::ring;
  double graph_max_angle = 0.0;  // geometric graphs
  WeightScheme weights = WeightScheme::metropolis;

  ScheduleKind schedule = ScheduleKind::manual;
  double alpha_eta = 0.0, alpha_u = 0.0, gamma = 0.0;  // theorem1 / theorem2
  double alpha = 0.0, u1 = 0.0, lambda_tilde = 0.0;    // theorem4-linear
  double eta0 = 0.0, eta_pow = 0.0;                    // manual
  double u0 = 0.0, u_pow = 0.0;                        // manual / theorem3

  std::optional<double> L, G, mu;  // suite constants supplied by the user
  double quad_center_sigma = 1.0;

  InitKind init = InitKind::gaussian;
  double init_sigma = 0.0;

  std::string output;  // empty: $DZO_OUTPUT_DIR, else "."

  std::optional<std::vector<std::pair<int, int>>> edges;
  std::optional<LogisticSuiteParams> logistic_params;
  std::optional<Eigen::MatrixXd> quad_centers;
  std::optional<Eigen::MatrixXd> x0;
};

/// Parse the flat `key = value` format ('#' starts a comment). Collects
/// every offence and throws a single ConfigError listing the keys.
RunConfig parse_run_config(const std::string& text);

const char* to_string(Kernel k);
const char* to_string(SuiteKind s);
const char* to_string(GraphKind g);
const char* to_string(WeightScheme w);
const char* to_string(ScheduleKind s);
const char* to_string(InitKind i);

}  // namespace dzo
