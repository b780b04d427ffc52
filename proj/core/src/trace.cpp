#include "dzo/trace.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "dzo/errors.hpp"
#include "dzo/textio.hpp"

namespace dzo {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_int(std::int64_t v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw InvalidArgument("malformed number: '" + std::string(s) + "'");
  return v;
}

std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw InvalidArgument("malformed integer: '" + std::string(s) + "'");
  return v;
}

std::uint64_t parse_uint(std::string_view s) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw InvalidArgument("malformed unsigned integer: '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::string trace_to_csv(const Trace& trace) {
  std::string out(kTraceCsvHeader);
  out.push_back('\n');
  for (const TraceRow& r : trace.rows) {
    out += format_int(r.t);
    out.push_back(',');
    out += format_int(r.m);
    out.push_back(',');
    out += format_double(r.f_bar);
    out.push_back(',');
    out += format_double(r.grad_norm_sq);
    out.push_back(',');
    out += format_double(r.consensus_err);
    out.push_back(',');
    if (!std::isnan(r.track_err)) out += format_double(r.track_err);
    out.push_back(',');
    out += format_double(r.eta_t);
    out.push_back(',');
    out += format_double(r.u_t);
    out.push_back('\n');
  }
  return out;
}

Trace trace_from_csv(const std::string& text) {
  Trace trace;
  const auto lines = split(text, '\n');
  if (lines.empty() || trim(lines[0]) != kTraceCsvHeader)
    throw InvalidArgument("trace CSV: missing or unexpected header");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) {
      if (i + 1 != lines.size())
        throw InvalidArgument("trace CSV: blank interior line");
      break;
    }
    const auto fields = split(lines[i], ',');
    if (fields.size() != 8)
      throw InvalidArgument("trace CSV: expected 8 fields per row");
    TraceRow r;
    r.t = parse_int(fields[0]);
    r.m = parse_int(fields[1]);
    r.f_bar = parse_double(fields[2]);
    r.grad_norm_sq = parse_double(fields[3]);
    r.consensus_err = parse_double(fields[4]);
    r.track_err = fields[5].empty() ? std::numeric_limits<double>::quiet_NaN()
                                    : parse_double(fields[5]);
    r.eta_t = parse_double(fields[6]);
    r.u_t = parse_double(fields[7]);
    trace.rows.push_back(r);
  }
  return trace;
}

}  // namespace dzo
