#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dzo {

/// Shortest decimal form that parses back to the identical double.
std::string format_double(double v);

std::string format_int(std::int64_t v);

/// Strict parsers; throw InvalidArgument on malformed or trailing input.
double parse_double(std::string_view s);
std::int64_t parse_int(std::string_view s);
std::uint64_t parse_uint(std::string_view s);

std::vector<std::string_view> split(std::string_view s, char sep);
std::string_view trim(std::string_view s);

}  // namespace dzo
