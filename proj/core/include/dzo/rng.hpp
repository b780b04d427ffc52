#pragma once

#include <cstdint>
#include <random>

namespace dzo {

/// Deterministic random stream keyed by (seed, hi, lo).
///
/// Identical keys reproduce the exact same draw sequence on every platform:
/// the generator is mt19937_64 (seeding and output are pinned by the
/// standard) and the uniform/normal transforms below avoid the
/// implementation-defined std::*_distribution classes.
///
/// Stream keys are split into a 64-bit (hi, lo) pair. Per-iteration agent
/// draws use (agent, t); construction-time draws (graphs, suites, initial
/// points) use reserved hi tags well above any agent index.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t hi, std::uint64_t lo);

  /// Raw 64-bit draw.
  std::uint64_t next();

  /// Uniform on (0, 1]. Never returns 0, so ln() is safe.
  double uniform01();

  /// Standard normal via Box-Muller (pairs cached).
  double normal();

 private:
  std::mt19937_64 gen_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

namespace stream_tag {
// hi-word tags for construction-time streams; agent indices stay far below.
inline constexpr std::uint64_t graph = 0xD200'0000'0000'0001ull;
inline constexpr std::uint64_t suite = 0xD200'0000'0000'0002ull;
inline constexpr std::uint64_t init = 0xD200'0000'0000'0003ull;
inline constexpr std::uint64_t spectral = 0xD200'0000'0000'0004ull;
}  // namespace stream_tag

}  // namespace dzo
