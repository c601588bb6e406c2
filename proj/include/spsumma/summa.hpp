#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "spsumma/dist_matrix.hpp"
#include "spsumma/fabric.hpp"
#include "spsumma/local_spgemm.hpp"
#include "spsumma/serialize.hpp"

namespace spsumma {

/// A local block after the preparation pass: device-resident CSR arrays
/// holding the transpose of the block, ready for the B^T * A^T local
/// products.
template <SemiringLike SR>
struct PreparedBlock {
  CsrMatrix<SR> transposed;  // device space; dims are the block's, swapped
  index_t block_rows = 0;
  index_t block_cols = 0;
};

/// Preparation: doubly compressed blocks are decompressed to full CSC,
/// then the arrays are reinterpreted as CSR, yielding the transpose with
/// no per-entry work. Runs once per input block, before any round.
///
/// The reinterpretation identity AB = (B^T A^T)^T needs a commutative
/// multiplication, so non-commutative semirings are refused here.
template <SemiringLike SR>
PreparedBlock<SR> prepare_block(const LocalBlock<SR>& block) {
  if (!SR::is_commutative_mul) {
    throw UnsupportedSemiringError(
        "semiring '" + std::string(SR::name) +
        "' has a non-commutative multiplication; the distributed "
        "transpose-reinterpretation path supports commutative semirings only");
  }
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
  PreparedBlock<SR> out;
  out.block_rows = csc.nrows;
  out.block_cols = csc.ncols;
  out.transposed = reinterpret_transpose(csc);
  return out;
}

/// Row slice [range.begin, range.end) of a CSR matrix; row ids rebase
/// implicitly, column ids are untouched.
template <SemiringLike SR>
CsrMatrix<SR> csr_row_slice(const CsrMatrix<SR>& m, BlockRange range) {
  CsrMatrix<SR> out;
  out.nrows = range.size();
  out.ncols = m.ncols;
  const index_t lo = m.rowptr[static_cast<std::size_t>(range.begin)];
  const index_t hi = m.rowptr[static_cast<std::size_t>(range.end)];
  out.rowptr.resize(static_cast<std::size_t>(range.size()) + 1);
  for (index_t r = 0; r <= range.size(); ++r) {
    out.rowptr[static_cast<std::size_t>(r)] =
        m.rowptr[static_cast<std::size_t>(range.begin + r)] - lo;
  }
  out.colids.assign(m.colids.begin() + lo, m.colids.begin() + hi);
  out.values.assign(m.values.begin() + lo, m.values.begin() + hi);
  return out;
}

/// Column slice of a CSR matrix; kept entries have their column ids
/// rebased to the range start. Columns are sorted within each row, so the
/// kept run per row is found by binary search.
template <SemiringLike SR>
CsrMatrix<SR> csr_col_slice(const CsrMatrix<SR>& m, BlockRange range) {
  CsrMatrix<SR> out;
  out.nrows = m.nrows;
  out.ncols = range.size();
  out.rowptr.assign(static_cast<std::size_t>(m.nrows) + 1, 0);
  for (index_t r = 0; r < m.nrows; ++r) {
    const auto row_lo = m.colids.begin() + m.rowptr[static_cast<std::size_t>(r)];
    const auto row_hi =
        m.colids.begin() + m.rowptr[static_cast<std::size_t>(r) + 1];
    const auto from = std::lower_bound(row_lo, row_hi, range.begin);
    const auto to = std::lower_bound(from, row_hi, range.end);
    for (auto it = from; it != to; ++it) {
      out.colids.push_back(*it - range.begin);
      out.values.push_back(
          m.values[static_cast<std::size_t>(it - m.colids.begin())]);
    }
    out.rowptr[static_cast<std::size_t>(r) + 1] =
        static_cast<index_t>(out.colids.size());
  }
  return out;
}

/// The 2.5D halves of a dimension of size n: the first round takes
/// ceil(n/2), the second the rest. A single-round execution covers the
/// whole range.
inline BlockRange round_range(index_t n, int rounds, int round) {
  if (rounds == 1) return {0, n};
  const index_t mid = (n + 1) / 2;
  return round == 0 ? BlockRange{0, mid} : BlockRange{mid, n};
}

/// One local product C^T partial, labeled with the SUMMA stage and 2.5D
/// round that produced it.
template <SemiringLike SR>
struct Partial {
  int stage = 0;
  int round = 0;
  CsrMatrix<SR> ct;
};

/// Merges the per-stage transposed partials into the rank's C block:
/// tuple each partial, swap row/column to undo the transpose trick,
/// concatenate, fold duplicates with the semiring add in ascending
/// (stage, round) order, drop zeros, and compress column-wise.
template <SemiringLike SR>
CscMatrix<SR> merge_partials(std::vector<Partial<SR>> parts,
                             index_t block_rows, index_t block_cols) {
  std::stable_sort(parts.begin(), parts.end(),
                   [](const Partial<SR>& a, const Partial<SR>& b) {
                     return a.stage != b.stage ? a.stage < b.stage
                                               : a.round < b.round;
                   });
  using Tuple = typename CooMatrix<SR>::Tuple;
  std::vector<Tuple> tuples;
  for (const auto& part : parts) {
    if (part.ct.nrows != block_cols || part.ct.ncols != block_rows) {
      throw InternalError("partial extents " + std::to_string(part.ct.nrows) +
                          "x" + std::to_string(part.ct.ncols) +
                          " do not match the " + std::to_string(block_rows) +
                          "x" + std::to_string(block_cols) + " output block");
    }
    for (const auto& t : csr_to_coo(part.ct).tuples) {
      tuples.push_back({t.col, t.row, t.value});  // undo the transpose
    }
  }
  std::stable_sort(tuples.begin(), tuples.end(),
                   [](const Tuple& a, const Tuple& b) {
                     return a.col != b.col ? a.col < b.col : a.row < b.row;
                   });

  CscMatrix<SR> out;
  out.nrows = block_rows;
  out.ncols = block_cols;
  out.colptr.assign(static_cast<std::size_t>(block_cols) + 1, 0);
  for (std::size_t i = 0; i < tuples.size();) {
    auto acc = tuples[i];
    std::size_t j = i + 1;
    for (; j < tuples.size() && tuples[j].col == acc.col &&
           tuples[j].row == acc.row;
         ++j) {
      acc.value = SR::add(acc.value, tuples[j].value);
    }
    if (!SR::is_zero(acc.value)) {
      out.rowids.push_back(acc.row);
      out.values.push_back(acc.value);
      ++out.colptr[static_cast<std::size_t>(acc.col) + 1];
    }
    i = j;
  }
  for (index_t c = 0; c < block_cols; ++c) {
    out.colptr[static_cast<std::size_t>(c) + 1] +=
        out.colptr[static_cast<std::size_t>(c)];
  }
  return out;
}

struct SummaOptions {
  bool two_round = true;  // false: single-round reference execution
  std::size_t chunk_nnz = kDefaultChunkNnz;
};

template <SemiringLike SR>
struct SummaResult {
  DistMatrix<SR> product;
  CostLedger ledger;
  std::vector<CostLedger> per_rank;
  std::vector<InstanceRecord> instances;
};

namespace detail {

class WallTimer {
 public:
  WallTimer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

/// Broadcasts one prepared panel along `scope`. The owner slices its
/// prepared block; everyone first agrees on sizes, then moves the payload
/// only when the panel has nonzeros.
template <SemiringLike SR>
struct PanelBcast {
  CsrMatrix<SR> part;
  std::uint64_t bytes = 0;
  bool present = false;
};

template <SemiringLike SR>
PanelBcast<SR> broadcast_panel(Rank& rank, Scope scope, int root,
                               const PreparedBlock<SR>& prepared,
                               BlockRange slice_rows, bool slice_by_rows) {
  SizeTriple sent{};
  CsrMatrix<SR> local;
  if (rank.id() == root) {
    local = slice_by_rows ? csr_row_slice(prepared.transposed, slice_rows)
                          : csr_col_slice(prepared.transposed, slice_rows);
    sent = {local.nrows, local.ncols, local.nnz()};
  }
  const SizeTriple meta = rank.exchange_sizes(scope, root, sent);

  PanelBcast<SR> out;
  if (meta.nnz == 0) return out;
  out.present = true;
  out.bytes = csr_payload_bytes<SR>(meta.rows, meta.nnz);
  DeviceBuffer payload;
  if (rank.id() == root) payload = serialize_csr(local);
  const DeviceBuffer delivered =
      rank.bcast(scope, root, std::move(payload), out.bytes);
  out.part = deserialize_csr<SR>(delivered, meta.rows, meta.cols, meta.nnz);
  return out;
}

}  // namespace detail

/// Distributed C = A * B over a commutative semiring.
///
/// Every rank prepares its blocks once, then runs the broadcast rounds:
/// in round r, stage s, the rank at (i, s) broadcasts round-half r of its
/// prepared A block along grid row i and the rank at (s, j) broadcasts
/// round-half r of its prepared B block along grid column j (A is halved
/// by its local columns, B by its local rows). Receivers compute the
/// transposed partial B^T_part * A^T_part unless either operand is empty,
/// and the partials merge stage-major into the local C block.
template <SemiringLike SR>
SummaResult<SR> summa25_multiply(const DistMatrix<SR>& a,
                                 const DistMatrix<SR>& b,
                                 const LatencyModel& model,
                                 const CommConfig& cfg,
                                 const SummaOptions& opts = {}) {
  if (a.ncols != b.nrows) {
    throw ShapeError("cannot multiply " + std::to_string(a.nrows) + "x" +
                     std::to_string(a.ncols) + " by " + std::to_string(b.nrows) +
                     "x" + std::to_string(b.ncols));
  }
  if (!(a.grid == b.grid)) {
    throw GridError("operands live on different process grids");
  }
  if (!SR::is_commutative_mul) {
    // Same refusal the per-rank preparation would raise, surfaced before
    // any rank starts.
    prepare_block(a.blocks.at(0));
  }

  const ProcessGrid grid = a.grid;
  const int rounds = opts.two_round ? 2 : 1;

  auto program = [&](Rank& rank) -> CscMatrix<SR> {
    const int q = grid.side();
    const int i = rank.grid_row();
    const int j = rank.grid_col();
    const auto& my_a = a.blocks[static_cast<std::size_t>(rank.id())];
    const auto& my_b = b.blocks[static_cast<std::size_t>(rank.id())];

    detail::WallTimer prep_timer;
    const PreparedBlock<SR> pa = prepare_block(my_a);
    const PreparedBlock<SR> pb = prepare_block(my_b);
    rank.add_wall(Phase::prepare, prep_timer.seconds());
    rank.charge_copy_h2d(
        csr_payload_bytes<SR>(pa.transposed.nrows, pa.transposed.nnz()),
        Phase::prepare);
    rank.charge_copy_h2d(
        csr_payload_bytes<SR>(pb.transposed.nrows, pb.transposed.nnz()),
        Phase::prepare);

    std::vector<Partial<SR>> partials;
    for (int r = 0; r < rounds; ++r) {
      for (int s = 0; s < q; ++s) {
        // A panel: block (i, s) halved by A's local columns, which are
        // the prepared (transposed) block's rows.
        const int a_root = grid.rank_at(i, s);
        const auto a_half =
            round_range(block_range(a.ncols, q, s).size(), rounds, r);
        const auto pana = detail::broadcast_panel<SR>(
            rank, row_scope(i), a_root, pa, a_half, /*slice_by_rows=*/true);

        // B panel: block (s, j) halved by B's local rows, which are the
        // prepared block's columns.
        const int b_root = grid.rank_at(s, j);
        const auto b_half =
            round_range(block_range(b.nrows, q, s).size(), rounds, r);
        const auto panb = detail::broadcast_panel<SR>(
            rank, col_scope(j), b_root, pb, b_half, /*slice_by_rows=*/false);

        rank.note_resident_broadcast_bytes(pana.bytes + panb.bytes);

        if (pana.present && panb.present) {
          detail::WallTimer mul_timer;
          CsrMatrix<SR> ct =
              esc_multiply(panb.part, pana.part, opts.chunk_nnz);
          rank.add_wall(Phase::local_multiply, mul_timer.seconds());
          rank.count_local_multiply();
          rank.charge_copy_d2h(csr_payload_bytes<SR>(ct.nrows, ct.nnz()),
                               Phase::merge);
          partials.push_back({s, r, std::move(ct)});
        } else {
          rank.count_skipped_stage();
        }
      }
    }

    detail::WallTimer merge_timer;
    CscMatrix<SR> block = merge_partials<SR>(
        std::move(partials), my_a.rows.size(), my_b.cols.size());
    rank.add_wall(Phase::merge, merge_timer.seconds());
    return block;
  };

  auto run = run_program(grid, model, cfg, program);

  SummaResult<SR> out;
  out.product.nrows = a.nrows;
  out.product.ncols = b.ncols;
  out.product.grid = grid;
  out.product.blocks.resize(static_cast<std::size_t>(grid.size()));
  for (int rank = 0; rank < grid.size(); ++rank) {
    auto& block = out.product.blocks[static_cast<std::size_t>(rank)];
    block.rows = block_range(a.nrows, grid.side(), grid.row_of(rank));
    block.cols = block_range(b.ncols, grid.side(), grid.col_of(rank));
    block.storage = std::move(run.results[static_cast<std::size_t>(rank)]);
  }
  out.ledger = run.merged;
  out.per_rank = std::move(run.per_rank);
  out.instances = std::move(run.instances);
  return out;
}

}  // namespace spsumma
