#pragma once

#include <variant>
#include <vector>

#include "spsumma/formats.hpp"
#include "spsumma/process_grid.hpp"

namespace spsumma {

/// Contiguous global index range [begin, end) owned by one block.
struct BlockRange {
  index_t begin = 0;
  index_t end = 0;

  index_t size() const { return end - begin; }
  bool contains(index_t i) const { return i >= begin && i < end; }
  bool operator==(const BlockRange&) const = default;
};

/// Splits n indices into q contiguous ranges with sizes differing by at
/// most one, larger ranges first.
inline BlockRange block_range(index_t n, int q, int idx) {
  const index_t base = n / q;
  const index_t extra = n % q;
  const index_t begin = idx * base + std::min<index_t>(idx, extra);
  return {begin, begin + base + (idx < extra ? 1 : 0)};
}

/// Block index owning global index i under the split above.
inline int block_index_of(index_t n, int q, index_t i) {
  const index_t base = n / q;
  const index_t extra = n % q;
  const index_t wide = extra * (base + 1);
  if (i < wide) return static_cast<int>(i / (base + 1));
  return static_cast<int>(extra + (i - wide) / base);
}

/// One rank's block, host-resident, stored either fully or doubly
/// compressed depending on how many of its columns are populated.
template <SemiringLike SR>
struct LocalBlock {
  std::variant<CscMatrix<SR>, DcscMatrix<SR>> storage;
  BlockRange rows;
  BlockRange cols;

  index_t nnz() const {
    return std::visit([](const auto& m) { return m.nnz(); }, storage);
  }
  bool is_dcsc() const {
    return std::holds_alternative<DcscMatrix<SR>>(storage);
  }
};

/// A matrix tiled over a square process grid: block (i, j) lives on the
/// rank at grid position (i, j).
template <SemiringLike SR>
struct DistMatrix {
  index_t nrows = 0;
  index_t ncols = 0;
  ProcessGrid grid{1};
  std::vector<LocalBlock<SR>> blocks;  // indexed by rank
};

/// Routes every tuple to the block owning its coordinates and builds the
/// per-block storage. Blocks with fewer than half their columns populated
/// are stored doubly compressed, so both layouts of the preparation path
/// stay exercised on real data.
template <SemiringLike SR>
DistMatrix<SR> distribute(const CooMatrix<SR>& m, const ProcessGrid& grid) {
  const int q = grid.side();
  DistMatrix<SR> out;
  out.nrows = m.nrows;
  out.ncols = m.ncols;
  out.grid = grid;
  out.blocks.resize(static_cast<std::size_t>(grid.size()));

  std::vector<CooMatrix<SR>> pieces(static_cast<std::size_t>(grid.size()));
  for (const auto& t : m.tuples) {
    const int bi = block_index_of(m.nrows, q, t.row);
    const int bj = block_index_of(m.ncols, q, t.col);
    const auto rank = static_cast<std::size_t>(grid.rank_at(bi, bj));
    pieces[rank].tuples.push_back(
        {t.row - block_range(m.nrows, q, bi).begin,
         t.col - block_range(m.ncols, q, bj).begin, t.value});
  }

  for (int rank = 0; rank < grid.size(); ++rank) {
    auto& block = out.blocks[static_cast<std::size_t>(rank)];
    block.rows = block_range(m.nrows, q, grid.row_of(rank));
    block.cols = block_range(m.ncols, q, grid.col_of(rank));
    auto& piece = pieces[static_cast<std::size_t>(rank)];
    piece.nrows = block.rows.size();
    piece.ncols = block.cols.size();
    CscMatrix<SR> csc = coo_to_csc(piece);

    index_t populated = 0;
    for (index_t c = 0; c < csc.ncols; ++c) {
      if (csc.colptr[static_cast<std::size_t>(c) + 1] >
          csc.colptr[static_cast<std::size_t>(c)]) {
        ++populated;
      }
    }
    if (2 * populated < csc.ncols) {
      block.storage = csc_to_dcsc(csc);
    } else {
      block.storage = std::move(csc);
    }
  }
  return out;
}

/// Concatenates all blocks back into one global coordinate list, sorted
/// row-major. Inverse of distribute on normalized input.
template <SemiringLike SR>
CooMatrix<SR> gather(const DistMatrix<SR>& m) {
  CooMatrix<SR> out;
  out.nrows = m.nrows;
  out.ncols = m.ncols;
  for (const auto& block : m.blocks) {
    const CscMatrix<SR> csc = std::visit(
        [](const auto& s) {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, DcscMatrix<SR>>) {
            return dcsc_decompress(s);
          } else {
            return s;
          }
        },
        block.storage);
    for (const auto& t : csc_to_coo(csc).tuples) {
      out.tuples.push_back(
          {t.row + block.rows.begin, t.col + block.cols.begin, t.value});
    }
  }
  std::sort(out.tuples.begin(), out.tuples.end(),
            [](const auto& a, const auto& b) {
              return a.row != b.row ? a.row < b.row : a.col < b.col;
            });
  return out;
}

}  // namespace spsumma
