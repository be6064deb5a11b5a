#pragma once

#include "qr/bitset.hpp"

#include <cstddef>
#include <vector>

namespace qr::spectral {

struct SingularValue {
  double value = 0;
  /// Some singular value of the operator lies within this distance of value.
  double error = 0;
  std::size_t matvecs = 0;
};

struct LanczosOptions {
  /// Stop once the certified error on the singular value is at most this.
  double tolerance = 1e-10;
  std::size_t max_matvecs = 10'000;
  std::size_t cycle_length = 64;
};

/// Largest singular value of B = M·P, where M is the 0/1 matrix whose row
/// r is `rows[r]` (a bitset over `cols` columns) and P is the orthogonal
/// projection onto mean-zero vectors (identity when !project_mean_zero).
///
/// Restarted Lanczos on BᵀB with full reorthogonalization, started from a
/// fixed hash vector. The error is certified through the Jordan-Wielandt
/// residual ||Bᵀu − σv||/√2 of the final Ritz pair.
/// Throws Error(NoConvergence) when max_matvecs is exhausted.
SingularValue top_singular_value(const std::vector<Bitset>& rows, std::size_t cols, bool project_mean_zero,
                                 const LanczosOptions& options = {});

}  // namespace qr::spectral
