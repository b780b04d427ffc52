#include "dzo/rng.hpp"

#include <cmath>
#include <numbers>

namespace dzo {

namespace {

// splitmix64 finalizer; used only to spread the (seed, hi, lo) key.
std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t hi, std::uint64_t lo)
    : gen_(mix(mix(mix(seed) ^ hi) ^ lo)) {}

std::uint64_t RngStream::next() { return gen_(); }

double RngStream::uniform01() {
  // 53 uniform mantissa bits, shifted into (0, 1].
  return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
}

double RngStream::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  cached_ = r * std::sin(a);
  has_cached_ = true;
  return r * std::cos(a);
}

}  // namespace dzo
