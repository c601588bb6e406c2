#pragma once

// Independent reference computations the implementation is checked
// against. These stay deliberately dumb: dense arrays, textbook loops,
// no shared code with the library's sparse paths.

#include <vector>

#include "spsumma/formats.hpp"

namespace oracles {

using namespace spsumma;

template <SemiringLike SR>
using Dense = std::vector<std::vector<typename SR::value_type>>;

template <SemiringLike SR>
Dense<SR> dense_zero(index_t nrows, index_t ncols) {
  return Dense<SR>(static_cast<std::size_t>(nrows),
                   std::vector<typename SR::value_type>(
                       static_cast<std::size_t>(ncols), SR::zero()));
}

template <SemiringLike SR>
Dense<SR> dense_of(const CooMatrix<SR>& m) {
  auto d = dense_zero<SR>(m.nrows, m.ncols);
  for (const auto& t : m.tuples) {
    auto& cell = d[static_cast<std::size_t>(t.row)][static_cast<std::size_t>(t.col)];
    cell = SR::add(cell, t.value);
  }
  return d;
}

template <SemiringLike SR>
Dense<SR> dense_of(const CscMatrix<SR>& m) {
  return dense_of(csc_to_coo(m));
}

template <SemiringLike SR>
Dense<SR> dense_of(const CsrMatrix<SR>& m) {
  return dense_of(csr_to_coo(m));
}

template <SemiringLike SR>
Dense<SR> dense_transpose(const Dense<SR>& a) {
  if (a.empty()) return a;
  auto out = dense_zero<SR>(static_cast<index_t>(a[0].size()),
                            static_cast<index_t>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[i].size(); ++j) out[j][i] = a[i][j];
  }
  return out;
}

/// Textbook semiring matrix product on dense arrays.
template <SemiringLike SR>
Dense<SR> dense_multiply(const Dense<SR>& a, const Dense<SR>& b) {
  const std::size_t m = a.size();
  const std::size_t n = b.size();
  const std::size_t l = n == 0 ? 0 : b[0].size();
  auto out = dense_zero<SR>(static_cast<index_t>(m), static_cast<index_t>(l));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t j = 0; j < l; ++j) {
        out[i][j] = SR::add(out[i][j], SR::mul(a[i][k], b[k][j]));
      }
    }
  }
  return out;
}

/// All-pairs shortest paths over a dense weight matrix; absent edges are
/// +infinity, the diagonal starts at zero.
inline std::vector<std::vector<double>> floyd_warshall(
    std::vector<std::vector<double>> dist) {
  const std::size_t n = dist.size();
  for (std::size_t i = 0; i < n; ++i) dist[i][i] = std::min(dist[i][i], 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        dist[i][j] = std::min(dist[i][j], dist[i][k] + dist[k][j]);
      }
    }
  }
  return dist;
}

template <SemiringLike SR>
bool dense_equal(const Dense<SR>& a, const Dense<SR>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return false;
  }
  return true;
}

}  // namespace oracles
