#pragma once

#include <cmath>
#include <random>

#include "spsumma/formats.hpp"

namespace spsumma {

/// Recursive-matrix (R-MAT) generator with the standard Graph500 quadrant
/// probabilities (a, b, c, d) = (0.57, 0.19, 0.19, 0.05). Emits
/// round(edge_factor * 2^scale) edges with weights uniform in [1, 2),
/// keeps self-loops, and folds duplicate coordinates with the semiring
/// add. Fully deterministic for a fixed seed.
template <SemiringLike SR>
CooMatrix<SR> generate_rmat(int scale, double edge_factor, std::uint64_t seed) {
  if (scale < 1) throw InvalidRangeError("rmat scale must be >= 1");
  if (edge_factor <= 0.0) throw InvalidRangeError("rmat edge factor must be > 0");
  constexpr double kA = 0.57;
  constexpr double kB = 0.19;
  constexpr double kC = 0.19;

  const index_t n = index_t{1} << scale;
  const auto nedges = static_cast<index_t>(
      std::llround(edge_factor * static_cast<double>(n)));

  std::mt19937_64 rng(seed);
  // mt19937_64 output mapped to [0, 1) directly; std::uniform_real_distribution
  // is implementation-defined and would break cross-platform determinism.
  auto uniform01 = [&rng]() {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };

  CooMatrix<SR> out;
  out.nrows = n;
  out.ncols = n;
  out.tuples.reserve(static_cast<std::size_t>(nedges));
  for (index_t e = 0; e < nedges; ++e) {
    index_t row = 0;
    index_t col = 0;
    for (int level = 0; level < scale; ++level) {
      const double u = uniform01();
      row <<= 1;
      col <<= 1;
      if (u < kA) {
        // top-left quadrant
      } else if (u < kA + kB) {
        col |= 1;
      } else if (u < kA + kB + kC) {
        row |= 1;
      } else {
        row |= 1;
        col |= 1;
      }
    }
    out.tuples.push_back({row, col, SR::from_real(1.0 + uniform01())});
  }
  normalize_coo(out);
  return out;
}

}  // namespace spsumma
