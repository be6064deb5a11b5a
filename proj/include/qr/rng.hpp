#pragma once

#include <cstdint>
#include <random>

namespace qr {

/// mt19937_64's output sequence is fixed by the standard but the standard
/// distributions are not, so reductions are done here.
using Rng = std::mt19937_64;

/// Uniform in [0, n), n > 0 (multiply-shift with rejection).
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const unsigned __int128 m = static_cast<unsigned __int128>(rng()) * n;
    if (static_cast<std::uint64_t>(m) >= threshold) return static_cast<std::uint64_t>(m >> 64);
  }
}

/// Uniform in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace qr
