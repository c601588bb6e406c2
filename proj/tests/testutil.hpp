#pragma once

// Deterministic workload generators shared by the unit and acceptance
// suites. All randomness flows through an explicitly seeded mt19937_64 so
// failures reproduce.

#include <cmath>
#include <random>
#include <vector>

#include "spsumma/dist_matrix.hpp"
#include "spsumma/formats.hpp"

namespace testutil {

using namespace spsumma;

inline double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Draws entry values for a semiring. `exact` draws small integer-valued
/// entries, which makes even floating-point addition associative in
/// practice (no rounding), so results must match bit-for-bit across any
/// fold grouping; otherwise values are full-precision positives.
template <SemiringLike SR>
struct ValueGen;

template <>
struct ValueGen<ArithmeticSemiring> {
  static double draw(std::mt19937_64& rng, bool exact) {
    if (exact) return static_cast<double>(1 + rng() % 16);
    return 0.5 + u01(rng);
  }
};

template <>
struct ValueGen<MinPlusSemiring> {
  static double draw(std::mt19937_64& rng, bool exact) {
    if (exact) return static_cast<double>(1 + rng() % 10);
    return 0.25 + 10.0 * u01(rng);
  }
};

template <>
struct ValueGen<BooleanSemiring> {
  static bool draw(std::mt19937_64&, bool) { return true; }
};

template <>
struct ValueGen<MinSelectSemiring> {
  static MinSelect draw(std::mt19937_64& rng, bool exact) {
    return {ValueGen<MinPlusSemiring>::draw(rng, exact),
            static_cast<std::int64_t>(rng() % 100)};
  }
};

template <SemiringLike SR>
CooMatrix<SR> random_coo(std::mt19937_64& rng, index_t nrows, index_t ncols,
                         double density, bool exact = true) {
  CooMatrix<SR> m;
  m.nrows = nrows;
  m.ncols = ncols;
  for (index_t r = 0; r < nrows; ++r) {
    for (index_t c = 0; c < ncols; ++c) {
      if (u01(rng) < density) {
        m.tuples.push_back({r, c, ValueGen<SR>::draw(rng, exact)});
      }
    }
  }
  normalize_coo(m);
  return m;
}

template <SemiringLike SR>
CsrMatrix<SR> random_csr(std::mt19937_64& rng, index_t nrows, index_t ncols,
                         double density, bool exact = true) {
  return csc_to_csr(coo_to_csc(random_coo<SR>(rng, nrows, ncols, density, exact)));
}

template <SemiringLike SR>
CsrMatrix<SR> identity_csr(index_t n) {
  CooMatrix<SR> m;
  m.nrows = n;
  m.ncols = n;
  for (index_t i = 0; i < n; ++i) m.tuples.push_back({i, i, SR::one()});
  return csc_to_csr(coo_to_csc(m));
}

/// Structural + value comparison. Values compare exactly unless the entry
/// type is double and `rel_tol` is nonzero, in which case a relative
/// tolerance is allowed (the documented fallback for regrouped
/// floating-point folds).
template <SemiringLike SR>
bool coo_equal(const CooMatrix<SR>& a, const CooMatrix<SR>& b,
               double rel_tol = 0.0) {
  if (a.nrows != b.nrows || a.ncols != b.ncols ||
      a.tuples.size() != b.tuples.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.tuples.size(); ++i) {
    const auto& x = a.tuples[i];
    const auto& y = b.tuples[i];
    if (x.row != y.row || x.col != y.col) return false;
    if constexpr (std::is_same_v<typename SR::value_type, double>) {
      if (x.value == y.value) continue;
      if (rel_tol == 0.0 ||
          std::abs(x.value - y.value) >
              rel_tol * std::max(std::abs(x.value), std::abs(y.value))) {
        return false;
      }
    } else {
      if (!(x.value == y.value)) return false;
    }
  }
  return true;
}

}  // namespace testutil
