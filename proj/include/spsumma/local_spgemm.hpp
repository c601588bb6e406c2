#pragma once

#include <queue>
#include <vector>

#include "spsumma/formats.hpp"

namespace spsumma {

constexpr std::size_t kDefaultChunkNnz = 4096;

namespace detail {

template <SemiringLike SR>
void check_multiply_shapes(const CsrMatrix<SR>& a, const CsrMatrix<SR>& b) {
  if (a.ncols != b.nrows) {
    throw ShapeError("cannot multiply " + std::to_string(a.nrows) + "x" +
                     std::to_string(a.ncols) + " by " + std::to_string(b.nrows) +
                     "x" + std::to_string(b.ncols));
  }
}

/// Streams sorted duplicate-bearing tuples into a CSR matrix, folding
/// equal (row, col) runs with the semiring add in arrival order and
/// dropping results equal to the semiring zero.
template <SemiringLike SR>
class CsrCombiner {
 public:
  CsrCombiner(index_t nrows, index_t ncols) {
    out_.nrows = nrows;
    out_.ncols = ncols;
    out_.rowptr.assign(static_cast<std::size_t>(nrows) + 1, 0);
  }

  void push(index_t row, index_t col, const typename SR::value_type& v) {
    if (active_ && row == row_ && col == col_) {
      acc_ = SR::add(acc_, v);
      return;
    }
    flush();
    active_ = true;
    row_ = row;
    col_ = col;
    acc_ = v;
  }

  CsrMatrix<SR> finish() {
    flush();
    for (index_t r = 0; r < out_.nrows; ++r) {
      out_.rowptr[static_cast<std::size_t>(r) + 1] +=
          out_.rowptr[static_cast<std::size_t>(r)];
    }
    return std::move(out_);
  }

 private:
  void flush() {
    if (!active_ || SR::is_zero(acc_)) return;
    ++out_.rowptr[static_cast<std::size_t>(row_) + 1];
    out_.colids.push_back(col_);
    out_.values.push_back(acc_);
  }

  CsrMatrix<SR> out_;
  bool active_ = false;
  index_t row_ = 0;
  index_t col_ = 0;
  typename SR::value_type acc_{};
};

}  // namespace detail

/// Expand-sort-compress SpGEMM. The nonzeros of `a` are divided into
/// chunks of at most `chunk_nnz`; each chunk expands its partial products
/// against the rows of `b` and sorts them; the chunk streams are then
/// merged row-wise and equal output coordinates are folded.
///
/// Partial products for an output entry (i, j) are always combined in
/// ascending inner index k: expansion emits them in that order, the
/// per-chunk sort is stable, and the cross-chunk merge breaks ties by
/// chunk id. The result is therefore bit-identical for every chunk size,
/// which also pins the floating-point fold order.
template <SemiringLike SR>
CsrMatrix<SR> esc_multiply(const CsrMatrix<SR>& a, const CsrMatrix<SR>& b,
                           std::size_t chunk_nnz = kDefaultChunkNnz) {
  detail::check_multiply_shapes(a, b);
  if (chunk_nnz == 0) chunk_nnz = 1;

  using Entry = typename CooMatrix<SR>::Tuple;
  const auto a_nnz = static_cast<std::size_t>(a.nnz());
  const std::size_t nchunks = a_nnz == 0 ? 0 : (a_nnz + chunk_nnz - 1) / chunk_nnz;

  std::vector<std::vector<Entry>> chunks(nchunks);
  index_t row = 0;
  for (std::size_t c = 0; c < nchunks; ++c) {
    const std::size_t lo = c * chunk_nnz;
    const std::size_t hi = std::min(lo + chunk_nnz, a_nnz);

    std::size_t expansions = 0;
    for (std::size_t t = lo; t < hi; ++t) {
      const auto k = static_cast<std::size_t>(a.colids[t]);
      expansions += static_cast<std::size_t>(b.rowptr[k + 1] - b.rowptr[k]);
    }
    auto& chunk = chunks[c];
    chunk.reserve(expansions);

    for (std::size_t t = lo; t < hi; ++t) {
      while (a.rowptr[static_cast<std::size_t>(row) + 1] <=
             static_cast<index_t>(t)) {
        ++row;
      }
      const index_t k = a.colids[t];
      const auto& va = a.values[t];
      for (index_t u = b.rowptr[static_cast<std::size_t>(k)];
           u < b.rowptr[static_cast<std::size_t>(k) + 1]; ++u) {
        chunk.push_back({row, b.colids[static_cast<std::size_t>(u)],
                         SR::mul(va, b.values[static_cast<std::size_t>(u)])});
      }
    }
    std::stable_sort(chunk.begin(), chunk.end(),
                     [](const Entry& x, const Entry& y) {
                       return x.row != y.row ? x.row < y.row : x.col < y.col;
                     });
  }

  detail::CsrCombiner<SR> combiner(a.nrows, b.ncols);
  struct Cursor {
    index_t row;
    index_t col;
    std::size_t chunk;
    std::size_t pos;
  };
  auto later = [](const Cursor& x, const Cursor& y) {
    if (x.row != y.row) return x.row > y.row;
    if (x.col != y.col) return x.col > y.col;
    return x.chunk > y.chunk;
  };
  std::priority_queue<Cursor, std::vector<Cursor>, decltype(later)> heads(later);
  for (std::size_t c = 0; c < nchunks; ++c) {
    if (!chunks[c].empty()) {
      heads.push({chunks[c][0].row, chunks[c][0].col, c, 0});
    }
  }
  while (!heads.empty()) {
    const Cursor cur = heads.top();
    heads.pop();
    const auto& e = chunks[cur.chunk][cur.pos];
    combiner.push(e.row, e.col, e.value);
    const std::size_t next = cur.pos + 1;
    if (next < chunks[cur.chunk].size()) {
      heads.push({chunks[cur.chunk][next].row, chunks[cur.chunk][next].col,
                  cur.chunk, next});
    }
  }
  return combiner.finish();
}

/// Dense triple-loop reference multiply. Kept deliberately independent of
/// esc_multiply: this is the oracle the staged kernel is checked against.
/// The (i, k, j) loop order folds contributions per output entry in
/// ascending k, the same order the staged kernel guarantees.
template <SemiringLike SR>
CsrMatrix<SR> naive_multiply(const CsrMatrix<SR>& a, const CsrMatrix<SR>& b) {
  detail::check_multiply_shapes(a, b);
  using V = typename SR::value_type;

  auto densify = [](const CsrMatrix<SR>& m) {
    std::vector<V> d(static_cast<std::size_t>(m.nrows) *
                         static_cast<std::size_t>(m.ncols),
                     SR::zero());
    for (index_t r = 0; r < m.nrows; ++r) {
      for (index_t t = m.rowptr[static_cast<std::size_t>(r)];
           t < m.rowptr[static_cast<std::size_t>(r) + 1]; ++t) {
        d[static_cast<std::size_t>(r) * static_cast<std::size_t>(m.ncols) +
          static_cast<std::size_t>(m.colids[static_cast<std::size_t>(t)])] =
            m.values[static_cast<std::size_t>(t)];
      }
    }
    return d;
  };
  const auto da = densify(a);
  const auto db = densify(b);

  const auto m = static_cast<std::size_t>(a.nrows);
  const auto n = static_cast<std::size_t>(a.ncols);
  const auto l = static_cast<std::size_t>(b.ncols);
  std::vector<V> acc(m * l, SR::zero());
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const V& aik = da[i * n + k];
      if (SR::is_zero(aik)) continue;
      for (std::size_t j = 0; j < l; ++j) {
        const V& bkj = db[k * l + j];
        if (SR::is_zero(bkj)) continue;
        acc[i * l + j] = SR::add(acc[i * l + j], SR::mul(aik, bkj));
      }
    }
  }

  detail::CsrCombiner<SR> combiner(a.nrows, b.ncols);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < l; ++j) {
      const V& v = acc[i * l + j];
      if (!SR::is_zero(v)) {
        combiner.push(static_cast<index_t>(i), static_cast<index_t>(j), v);
      }
    }
  }
  return combiner.finish();
}

}  // namespace spsumma
