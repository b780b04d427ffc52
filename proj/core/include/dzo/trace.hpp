#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dzo {

/// One recorded iteration. Row 0 is the initial state (eta_t = u_t = 0).
/// track_err is NaN where undefined: every row of a 2-point-DGD run, and
/// row 0 of tracking runs; it renders as an empty CSV field.
struct TraceRow {
  std::int64_t t = 0;
  std::int64_t m = 0;        // cumulative function queries per agent
  double f_bar = 0.0;        // f(xbar(t))
  double grad_norm_sq = 0.0; // ||grad f(xbar(t))||^2
  double consensus_err = 0.0;  // (1/n) sum_i ||x^i - xbar||^2
  double track_err = 0.0;      // (1/n) sum_i ||s^i(t) - grad f(xbar(t-1))||^2
  double eta_t = 0.0;
  double u_t = 0.0;
};

struct Trace {
  std::vector<TraceRow> rows;
};

inline constexpr const char* kTraceCsvHeader =
    "t,m,f_bar,grad_norm_sq,consensus_err,track_err,eta_t,u_t";

/// Bit-stable rendering: shortest round-trip decimals, '\n' line ends.
std::string trace_to_csv(const Trace& trace);

/// Strict parse of the format above; round-trips byte-identically.
Trace trace_from_csv(const std::string& text);

}  // namespace dzo
