#include "dzo/config.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "dzo/errors.hpp"
#include "dzo/textio.hpp"

namespace dzo {

const char* to_string(Kernel k) {
  switch (k) {
    case Kernel::alg1: return "alg1";
    case Kernel::alg2: return "alg2";
    case Kernel::hybrid: return "hybrid";
  }
  return "?";
}
const char* to_string(SuiteKind s) {
  return s == SuiteKind::logistic ? "logistic" : "quadratic";
}
const char* to_string(GraphKind g) {
  switch (g) {
    case GraphKind::ring: return "ring";
    case GraphKind::path: return "path";
    case GraphKind::geometric: return "geometric";
  }
  return "?";
}
const char* to_string(WeightScheme w) {
  return w == WeightScheme::metropolis ? "metropolis" : "lazy-metropolis";
}
const char* to_string(ScheduleKind s) {
  switch (s) {
    case ScheduleKind::theorem1: return "theorem1";
    case ScheduleKind::theorem2: return "theorem2";
    case ScheduleKind::theorem3_constant: return "theorem3-constant";
    case ScheduleKind::theorem4_linear: return "theorem4-linear";
    case ScheduleKind::manual: return "manual";
  }
  return "?";
}
const char* to_string(InitKind i) {
  return i == InitKind::gaussian ? "gaussian" : "zero";
}

namespace {

// Collects key/value pairs plus every complaint; the caller throws once.
class Reader {
 public:
  explicit Reader(const std::string& text) {
    int lineno = 0;
    for (std::string_view line : split(text, '\n')) {
      ++lineno;
      if (const auto hash = line.find('#'); hash != std::string_view::npos)
        line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        complain("line " + std::to_string(lineno), "not of the form key = value");
        continue;
      }
      const std::string key{trim(line.substr(0, eq))};
      const std::string val{trim(line.substr(eq + 1))};
      if (key.empty()) {
        complain("line " + std::to_string(lineno), "empty key");
        continue;
      }
      if (!kv_.emplace(key, val).second) complain(key, "duplicate key");
    }
  }

  bool has(const std::string& key) const { return kv_.count(key) != 0; }

  std::optional<std::string> raw(const std::string& key) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return std::nullopt;
    seen_.insert(key);
    return it->second;
  }

  std::string require(const std::string& key) {
    if (auto v = raw(key)) return *v;
    complain(key, "missing");
    return {};
  }

  template <typename T, typename Parse>
  T number(const std::string& key, Parse parse, T fallback) {
    const auto v = raw(key);
    if (!v) {
      complain(key, "missing");
      return fallback;
    }
    try {
      return parse(*v);
    } catch (const InvalidArgument&) {
      complain(key, "malformed value '" + *v + "'");
      return fallback;
    }
  }

  double require_double(const std::string& key) {
    return number<double>(key, [](const std::string& s) { return parse_double(s); }, 0.0);
  }
  std::int64_t require_int(const std::string& key) {
    return number<std::int64_t>(key, [](const std::string& s) { return parse_int(s); }, 0);
  }
  std::uint64_t require_uint(const std::string& key) {
    return number<std::uint64_t>(key, [](const std::string& s) { return parse_uint(s); }, 0);
  }
  double optional_double(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    return require_double(key);
  }

  void complain(const std::string& key, const std::string& what) {
    keys_.push_back(key);
    messages_ += (messages_.empty() ? "" : "; ") + key + ": " + what;
  }

  void check(bool ok, const std::string& key, const std::string& what) {
    if (!ok) complain(key, what);
  }

  void finish() {
    for (const auto& [key, value] : kv_)
      if (!seen_.count(key)) complain(key, "unknown key");
    if (!keys_.empty())
      throw ConfigError("invalid config: " + messages_, keys_);
  }

 private:
  std::map<std::string, std::string> kv_;
  std::set<std::string> seen_;
  std::vector<std::string> keys_;
  std::string messages_;
};

std::vector<double> parse_vector(const std::string& s) {
  std::vector<double> out;
  for (auto part : split(s, ' ')) {
    part = trim(part);
    if (part.empty()) continue;
    out.push_back(parse_double(part));
  }
  return out;
}

// Reads keys "<prefix>.0" .. "<prefix>.{rows-1}", each a row of `cols`
// numbers. Either all rows are present or none; returns nullopt for none.
std::optional<Eigen::MatrixXd> read_matrix(Reader& r, const std::string& prefix,
                                           int rows, int cols) {
  int present = 0;
  for (int i = 0; i < rows; ++i)
    if (r.has(prefix + "." + std::to_string(i))) ++present;
  if (present == 0) return std::nullopt;
  if (present != rows) {
    r.complain(prefix + ".*", "expected " + std::to_string(rows) + " rows, found " +
                                  std::to_string(present));
    return std::nullopt;
  }
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const std::string key = prefix + "." + std::to_string(i);
    std::vector<double> row;
    try {
      row = parse_vector(*r.raw(key));
    } catch (const InvalidArgument&) {
      r.complain(key, "malformed row");
      return std::nullopt;
    }
    if (static_cast<int>(row.size()) != cols) {
      r.complain(key, "expected " + std::to_string(cols) + " entries");
      return std::nullopt;
    }
    for (int k = 0; k < cols; ++k) m(i, k) = row[k];
  }
  return m;
}

std::optional<Eigen::VectorXd> read_vector(Reader& r, const std::string& key,
                                           int size) {
  if (!r.has(key)) return std::nullopt;
  std::vector<double> v;
  try {
    v = parse_vector(*r.raw(key));
  } catch (const InvalidArgument&) {
    r.complain(key, "malformed vector");
    return std::nullopt;
  }
  if (static_cast<int>(v.size()) != size) {
    r.complain(key, "expected " + std::to_string(size) + " entries");
    return std::nullopt;
  }
  return Eigen::Map<const Eigen::VectorXd>(v.data(), size);
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
  Reader r(text);
  RunConfig c;

  // enums
  {
    const std::string v = r.require("kernel");
    if (v == "alg1") c.kernel = Kernel::alg1;
    else if (v == "alg2") c.kernel = Kernel::alg2;
    else if (v == "hybrid") c.kernel = Kernel::hybrid;
    else if (!v.empty()) r.complain("kernel", "expected alg1 | alg2 | hybrid");
  }
  {
    const std::string v = r.require("suite");
    if (v == "logistic") c.suite = SuiteKind::logistic;
    else if (v == "quadratic") c.suite = SuiteKind::quadratic;
    else if (!v.empty()) r.complain("suite", "expected logistic | quadratic");
  }
  {
    const std::string v = r.require("graph");
    if (v == "ring") c.graph = GraphKind::ring;
    else if (v == "path") c.graph = GraphKind::path;
    else if (v == "geometric") c.graph = GraphKind::geometric;
    else if (!v.empty()) r.complain("graph", "expected ring | path | geometric");
  }
  {
    const std::string v = r.require("weights");
    if (v == "metropolis") c.weights = WeightScheme::metropolis;
    else if (v == "lazy-metropolis") c.weights = WeightScheme::lazy_metropolis;
    else if (!v.empty())
      r.complain("weights", "expected metropolis | lazy-metropolis");
  }
  {
    const std::string v = r.require("schedule");
    if (v == "theorem1") c.schedule = ScheduleKind::theorem1;
    else if (v == "theorem2") c.schedule = ScheduleKind::theorem2;
    else if (v == "theorem3-constant") c.schedule = ScheduleKind::theorem3_constant;
    else if (v == "theorem4-linear") c.schedule = ScheduleKind::theorem4_linear;
    else if (v == "manual") c.schedule = ScheduleKind::manual;
    else if (!v.empty())
      r.complain("schedule",
                 "expected theorem1 | theorem2 | theorem3-constant | "
                 "theorem4-linear | manual");
  }
  {
    const std::string v = r.require("init");
    if (v == "gaussian") c.init = InitKind::gaussian;
    else if (v == "zero") c.init = InitKind::zero;
    else if (!v.empty()) r.complain("init", "expected gaussian | zero");
  }

  // sizes and seed
  c.d = static_cast<int>(r.require_int("d"));
  c.n = static_cast<int>(r.require_int("n"));
  c.T = r.require_int("T");
  c.seed = r.require_uint("seed");
  r.check(c.d >= 1, "d", "must be >= 1");
  r.check(c.n >= 2, "n", "must be >= 2");
  r.check(c.T >= 1, "T", "must be >= 1");

  // graph parameters
  if (c.graph == GraphKind::geometric) {
    c.graph_max_angle = r.require_double("graph.max_angle");
    r.check(c.graph_max_angle > 0.0 &&
                c.graph_max_angle <= std::acos(-1.0) + 1e-15,
            "graph.max_angle", "must lie in (0, pi]");
  } else {
    r.check(!r.has("graph.max_angle"), "graph.max_angle",
            "only meaningful for geometric graphs");
  }

  // suite constants
  if (r.has("suite.L")) c.L = r.require_double("suite.L");
  if (r.has("suite.G")) c.G = r.require_double("suite.G");
  if (r.has("suite.mu")) c.mu = r.require_double("suite.mu");
  if (c.suite == SuiteKind::quadratic) {
    c.quad_center_sigma = r.optional_double("quadratic.center_sigma", 1.0);
    r.check(c.quad_center_sigma > 0.0, "quadratic.center_sigma", "must be positive");
    // the quadratic family fixes L = mu = 1
    r.check(!c.L || *c.L == 1.0, "suite.L", "quadratic suite has L = 1");
    r.check(!c.mu || *c.mu == 1.0, "suite.mu", "quadratic suite has mu = 1");
    c.L = 1.0;
    c.mu = 1.0;
  } else {
    r.check(!r.has("quadratic.center_sigma"), "quadratic.center_sigma",
            "only meaningful for the quadratic suite");
  }
  if (c.L) r.check(*c.L > 0.0, "suite.L", "must be positive");
  if (c.G) r.check(*c.G > 0.0, "suite.G", "must be positive");
  if (c.mu) r.check(*c.mu > 0.0, "suite.mu", "must be positive");
  if (c.L && c.mu) r.check(*c.mu <= *c.L, "suite.mu", "mu cannot exceed L");

  // schedule parameters
  switch (c.schedule) {
    case ScheduleKind::theorem1:
      c.alpha_eta = r.require_double("schedule.alpha_eta");
      c.alpha_u = r.require_double("schedule.alpha_u");
      c.gamma = r.require_double("schedule.gamma");
      r.check(c.alpha_eta > 0.0 && c.alpha_eta <= 1.0, "schedule.alpha_eta",
              "must lie in (0, 1]");
      r.check(c.alpha_u > 0.0, "schedule.alpha_u", "must be positive");
      r.check(c.gamma > 1.0, "schedule.gamma", "must exceed 1");
      r.check(c.L.has_value(), "suite.L", "required by schedule theorem1");
      r.check(c.G.has_value(), "suite.G", "required by schedule theorem1");
      break;
    case ScheduleKind::theorem2:
      c.alpha_eta = r.require_double("schedule.alpha_eta");
      c.alpha_u = r.require_double("schedule.alpha_u");
      r.check(c.alpha_eta > 1.0, "schedule.alpha_eta", "must exceed 1");
      r.check(c.alpha_u > 0.0, "schedule.alpha_u", "must be positive");
      r.check(c.L.has_value(), "suite.L", "required by schedule theorem2");
      r.check(c.mu.has_value(), "suite.mu", "required by schedule theorem2");
      break;
    case ScheduleKind::theorem3_constant:
      c.u0 = r.require_double("schedule.u0");
      c.u_pow = r.require_double("schedule.u_pow");
      r.check(c.u0 > 0.0, "schedule.u0", "must be positive");
      r.check(c.u_pow > 0.5, "schedule.u_pow",
              "must exceed 1/2 so that sum u_t^2 is finite");
      r.check(c.L.has_value(), "suite.L", "required by schedule theorem3-constant");
      break;
    case ScheduleKind::theorem4_linear:
      c.alpha = r.require_double("schedule.alpha");
      c.u1 = r.require_double("schedule.u1");
      c.lambda_tilde = r.require_double("schedule.lambda_tilde");
      r.check(c.alpha > 0.0 && c.alpha <= 1.0, "schedule.alpha",
              "must lie in (0, 1]");
      r.check(c.u1 > 0.0, "schedule.u1", "must be positive");
      r.check(c.lambda_tilde > 0.0 && c.lambda_tilde < 1.0,
              "schedule.lambda_tilde", "must lie in (0, 1)");
      r.check(c.L.has_value(), "suite.L", "required by schedule theorem4-linear");
      r.check(c.mu.has_value(), "suite.mu", "required by schedule theorem4-linear");
      break;
    case ScheduleKind::manual:
      c.eta0 = r.require_double("schedule.eta0");
      c.eta_pow = r.require_double("schedule.eta_pow");
      c.u0 = r.require_double("schedule.u0");
      c.u_pow = r.require_double("schedule.u_pow");
      r.check(c.eta0 > 0.0, "schedule.eta0", "must be positive");
      r.check(c.eta_pow >= 0.0, "schedule.eta_pow", "must be >= 0");
      r.check(c.u0 > 0.0, "schedule.u0", "must be positive");
      r.check(c.u_pow >= 0.0, "schedule.u_pow", "must be >= 0");
      break;
  }

  // tracking kernels run at a constant step size
  if (c.kernel != Kernel::alg1) {
    const bool constant =
        c.schedule == ScheduleKind::theorem3_constant ||
        c.schedule == ScheduleKind::theorem4_linear ||
        (c.schedule == ScheduleKind::manual && c.eta_pow == 0.0);
    r.check(constant, "schedule",
            "tracking kernels (alg2, hybrid) need a constant step size");
  }

  if (c.init == InitKind::gaussian) {
    c.init_sigma = r.require_double("init.sigma");
    r.check(c.init_sigma > 0.0, "init.sigma", "must be positive");
  } else {
    r.check(!r.has("init.sigma"), "init.sigma",
            "only meaningful for gaussian initialization");
  }

  if (auto v = r.raw("output")) c.output = *v;

  // informational manifest keys, accepted and ignored on load
  r.raw("graph.rho");
  r.raw("instance.resampling");

  // embedded resolved data
  if (auto v = r.raw("graph.edges")) {
    std::vector<std::pair<int, int>> edges;
    bool ok = true;
    for (auto part : split(*v, ' ')) {
      part = trim(part);
      if (part.empty()) continue;
      const auto ends = split(part, '-');
      if (ends.size() != 2) {
        ok = false;
        break;
      }
      try {
        edges.emplace_back(static_cast<int>(parse_int(ends[0])),
                           static_cast<int>(parse_int(ends[1])));
      } catch (const InvalidArgument&) {
        ok = false;
        break;
      }
    }
    if (!ok)
      r.complain("graph.edges", "expected space-separated i-j pairs");
    else
      c.edges = std::move(edges);
  }

  if (c.suite == SuiteKind::logistic && c.d >= 1 && c.n >= 2) {
    const auto a = read_vector(r, "suite.a", c.n);
    const auto b = read_vector(r, "suite.b", c.n);
    const auto nu = read_vector(r, "suite.nu", c.n);
    const auto xi = read_matrix(r, "suite.xi", c.n, c.d);
    const int have = (a ? 1 : 0) + (b ? 1 : 0) + (nu ? 1 : 0) + (xi ? 1 : 0);
    if (have == 4) {
      LogisticSuiteParams p;
      p.a = *a;
      p.b = *b;
      p.nu = *nu;
      p.xi = *xi;
      c.logistic_params = std::move(p);
    } else if (have != 0) {
      r.complain("suite.a", "suite.a, suite.b, suite.nu, suite.xi.* must be "
                            "embedded together");
    }
  } else if (c.suite == SuiteKind::quadratic && c.d >= 1 && c.n >= 2) {
    c.quad_centers = read_matrix(r, "quadratic.centers", c.n, c.d);
  }

  if (c.d >= 1 && c.n >= 2) c.x0 = read_matrix(r, "init.x", c.n, c.d);

  r.finish();
  return c;
}

}  // namespace dzo
