#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "spsumma/common.hpp"
#include "spsumma/semiring.hpp"

namespace spsumma {

/// Coordinate storage: an explicit tuple list. Ingestion and the final
/// merge both work in this format. A normalized COO has unique (row, col)
/// pairs sorted row-major and carries no semiring zeros.
template <SemiringLike SR>
struct CooMatrix {
  using semiring = SR;
  using value_type = typename SR::value_type;

  struct Tuple {
    index_t row = 0;
    index_t col = 0;
    value_type value{};

    bool operator==(const Tuple&) const = default;
  };

  index_t nrows = 0;
  index_t ncols = 0;
  std::vector<Tuple> tuples;

  index_t nnz() const { return static_cast<index_t>(tuples.size()); }
  bool operator==(const CooMatrix&) const = default;
};

/// Compressed sparse column: entries ordered by column; rows strictly
/// increasing within each column.
template <SemiringLike SR>
struct CscMatrix {
  using semiring = SR;
  using value_type = typename SR::value_type;

  index_t nrows = 0;
  index_t ncols = 0;
  std::vector<index_t> colptr{0};
  std::vector<index_t> rowids;
  std::vector<value_type> values;

  index_t nnz() const { return static_cast<index_t>(rowids.size()); }
  bool operator==(const CscMatrix&) const = default;
};

/// Doubly compressed sparse column: CSC with empty columns elided. `jc`
/// lists the nonempty column ids, `cp` the offsets into `rowids`/`values`.
template <SemiringLike SR>
struct DcscMatrix {
  using semiring = SR;
  using value_type = typename SR::value_type;

  index_t nrows = 0;
  index_t ncols = 0;
  std::vector<index_t> jc;
  std::vector<index_t> cp{0};
  std::vector<index_t> rowids;
  std::vector<value_type> values;

  index_t nnz() const { return static_cast<index_t>(rowids.size()); }
  bool operator==(const DcscMatrix&) const = default;
};

/// Compressed sparse row: the row-major mirror of CSC.
template <SemiringLike SR>
struct CsrMatrix {
  using semiring = SR;
  using value_type = typename SR::value_type;

  index_t nrows = 0;
  index_t ncols = 0;
  std::vector<index_t> rowptr{0};
  std::vector<index_t> colids;
  std::vector<value_type> values;

  index_t nnz() const { return static_cast<index_t>(colids.size()); }
  bool operator==(const CsrMatrix&) const = default;
};

namespace detail {

template <class Offsets>
void check_offsets(const Offsets& ptr, index_t nsegments, index_t nnz,
                   const char* what) {
  if (static_cast<index_t>(ptr.size()) != nsegments + 1 || ptr.front() != 0 ||
      ptr.back() != nnz || !std::is_sorted(ptr.begin(), ptr.end())) {
    throw MalformedInputError(std::string(what) +
                              ": offset array is not a monotone [0..nnz] map");
  }
}

}  // namespace detail

/// Normalizes a tuple list in place: duplicates folded with the semiring
/// add (in input order, so folding is deterministic), zeros dropped,
/// result sorted row-major. Out-of-range indices are rejected.
template <SemiringLike SR>
void normalize_coo(CooMatrix<SR>& m) {
  for (const auto& t : m.tuples) {
    if (t.row < 0 || t.row >= m.nrows || t.col < 0 || t.col >= m.ncols) {
      throw MalformedInputError(
          "coo tuple (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
          ") outside a " + std::to_string(m.nrows) + "x" +
          std::to_string(m.ncols) + " matrix");
    }
  }
  std::stable_sort(m.tuples.begin(), m.tuples.end(),
                   [](const auto& a, const auto& b) {
                     return a.row != b.row ? a.row < b.row : a.col < b.col;
                   });
  std::vector<typename CooMatrix<SR>::Tuple> out;
  out.reserve(m.tuples.size());
  for (std::size_t i = 0; i < m.tuples.size();) {
    auto acc = m.tuples[i];
    std::size_t j = i + 1;
    for (; j < m.tuples.size() && m.tuples[j].row == acc.row &&
           m.tuples[j].col == acc.col;
         ++j) {
      acc.value = SR::add(acc.value, m.tuples[j].value);
    }
    if (!SR::is_zero(acc.value)) out.push_back(acc);
    i = j;
  }
  m.tuples = std::move(out);
}

/// Builds a CSC matrix from coordinates. Duplicates are permitted and
/// folded with the semiring add in input order; zeros are dropped.
template <SemiringLike SR>
CscMatrix<SR> coo_to_csc(const CooMatrix<SR>& m) {
  using Tuple = typename CooMatrix<SR>::Tuple;
  for (const auto& t : m.tuples) {
    if (t.row < 0 || t.row >= m.nrows || t.col < 0 || t.col >= m.ncols) {
      throw MalformedInputError(
          "coo tuple (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
          ") outside a " + std::to_string(m.nrows) + "x" +
          std::to_string(m.ncols) + " matrix");
    }
  }
  std::vector<Tuple> sorted = m.tuples;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) {
                     return a.col != b.col ? a.col < b.col : a.row < b.row;
                   });

  CscMatrix<SR> out;
  out.nrows = m.nrows;
  out.ncols = m.ncols;
  out.colptr.assign(static_cast<std::size_t>(m.ncols) + 1, 0);
  out.rowids.reserve(sorted.size());
  out.values.reserve(sorted.size());
  for (std::size_t i = 0; i < sorted.size();) {
    auto acc = sorted[i];
    std::size_t j = i + 1;
    for (; j < sorted.size() && sorted[j].col == acc.col &&
           sorted[j].row == acc.row;
         ++j) {
      acc.value = SR::add(acc.value, sorted[j].value);
    }
    if (!SR::is_zero(acc.value)) {
      out.rowids.push_back(acc.row);
      out.values.push_back(acc.value);
      ++out.colptr[static_cast<std::size_t>(acc.col) + 1];
    }
    i = j;
  }
  for (index_t c = 0; c < m.ncols; ++c) {
    out.colptr[static_cast<std::size_t>(c) + 1] +=
        out.colptr[static_cast<std::size_t>(c)];
  }
  return out;
}

template <SemiringLike SR>
CooMatrix<SR> csc_to_coo(const CscMatrix<SR>& m) {
  CooMatrix<SR> out;
  out.nrows = m.nrows;
  out.ncols = m.ncols;
  out.tuples.reserve(m.rowids.size());
  for (index_t c = 0; c < m.ncols; ++c) {
    for (index_t k = m.colptr[static_cast<std::size_t>(c)];
         k < m.colptr[static_cast<std::size_t>(c) + 1]; ++k) {
      out.tuples.push_back({m.rowids[static_cast<std::size_t>(k)], c,
                            m.values[static_cast<std::size_t>(k)]});
    }
  }
  return out;
}

/// Elides empty columns. Per-column entry runs are copied verbatim.
template <SemiringLike SR>
DcscMatrix<SR> csc_to_dcsc(const CscMatrix<SR>& m) {
  detail::check_offsets(m.colptr, m.ncols, m.nnz(), "csc_to_dcsc");
  DcscMatrix<SR> out;
  out.nrows = m.nrows;
  out.ncols = m.ncols;
  out.rowids = m.rowids;
  out.values = m.values;
  out.cp.assign(1, 0);
  for (index_t c = 0; c < m.ncols; ++c) {
    const index_t hi = m.colptr[static_cast<std::size_t>(c) + 1];
    if (hi > m.colptr[static_cast<std::size_t>(c)]) {
      out.jc.push_back(c);
      out.cp.push_back(hi);
    }
  }
  return out;
}

/// Rebuilds the full column pointer array, inserting empty segments for
/// the columns that the doubly compressed form skipped.
template <SemiringLike SR>
CscMatrix<SR> dcsc_decompress(const DcscMatrix<SR>& m) {
  if (m.cp.empty() || m.cp.front() != 0 ||
      m.cp.size() != m.jc.size() + 1 ||
      !std::is_sorted(m.cp.begin(), m.cp.end()) ||
      m.cp.back() != m.nnz()) {
    throw MalformedInputError("dcsc_decompress: bad cp offset array");
  }
  CscMatrix<SR> out;
  out.nrows = m.nrows;
  out.ncols = m.ncols;
  out.rowids = m.rowids;
  out.values = m.values;
  out.colptr.assign(static_cast<std::size_t>(m.ncols) + 1, 0);
  index_t prev = -1;
  for (std::size_t i = 0; i < m.jc.size(); ++i) {
    const index_t c = m.jc[i];
    if (c <= prev || c >= m.ncols) {
      throw MalformedInputError(
          "dcsc_decompress: jc column id " + std::to_string(c) +
          " out of range or not strictly increasing");
    }
    prev = c;
    out.colptr[static_cast<std::size_t>(c) + 1] = m.cp[i + 1] - m.cp[i];
  }
  for (index_t c = 0; c < m.ncols; ++c) {
    out.colptr[static_cast<std::size_t>(c) + 1] +=
        out.colptr[static_cast<std::size_t>(c)];
  }
  return out;
}

/// Reads a CSC matrix's arrays as CSR. The result is the transpose of the
/// input with zero per-entry work: the column pointer array becomes the
/// row pointer array and the row ids become column ids.
template <SemiringLike SR>
CsrMatrix<SR> reinterpret_transpose(const CscMatrix<SR>& m) {
  CsrMatrix<SR> out;
  out.nrows = m.ncols;
  out.ncols = m.nrows;
  out.rowptr = m.colptr;
  out.colids = m.rowids;
  out.values = m.values;
  return out;
}

/// The reverse reading: CSR arrays reinterpreted as CSC, again yielding
/// the transpose. Applying both directions reproduces the original arrays.
template <SemiringLike SR>
CscMatrix<SR> reinterpret_transpose(const CsrMatrix<SR>& m) {
  CscMatrix<SR> out;
  out.nrows = m.ncols;
  out.ncols = m.nrows;
  out.colptr = m.rowptr;
  out.rowids = m.colids;
  out.values = m.values;
  return out;
}

/// Swaps the row and column of each tuple.
template <SemiringLike SR>
CooMatrix<SR> coo_transpose_swap(const CooMatrix<SR>& m) {
  CooMatrix<SR> out;
  out.nrows = m.ncols;
  out.ncols = m.nrows;
  out.tuples.reserve(m.tuples.size());
  for (const auto& t : m.tuples) out.tuples.push_back({t.col, t.row, t.value});
  return out;
}

/// Proper (re-sorting) conversion from column-major to row-major storage.
template <SemiringLike SR>
CsrMatrix<SR> csc_to_csr(const CscMatrix<SR>& m) {
  CsrMatrix<SR> out;
  out.nrows = m.nrows;
  out.ncols = m.ncols;
  out.rowptr.assign(static_cast<std::size_t>(m.nrows) + 1, 0);
  out.colids.resize(m.rowids.size());
  out.values.resize(m.values.size());
  for (index_t r : m.rowids) ++out.rowptr[static_cast<std::size_t>(r) + 1];
  for (index_t r = 0; r < m.nrows; ++r) {
    out.rowptr[static_cast<std::size_t>(r) + 1] +=
        out.rowptr[static_cast<std::size_t>(r)];
  }
  std::vector<index_t> cursor(out.rowptr.begin(), out.rowptr.end() - 1);
  for (index_t c = 0; c < m.ncols; ++c) {
    for (index_t k = m.colptr[static_cast<std::size_t>(c)];
         k < m.colptr[static_cast<std::size_t>(c) + 1]; ++k) {
      const auto r = static_cast<std::size_t>(
          m.rowids[static_cast<std::size_t>(k)]);
      const auto slot = static_cast<std::size_t>(cursor[r]++);
      out.colids[slot] = c;
      out.values[slot] = m.values[static_cast<std::size_t>(k)];
    }
  }
  return out;
}

template <SemiringLike SR>
CooMatrix<SR> csr_to_coo(const CsrMatrix<SR>& m) {
  CooMatrix<SR> out;
  out.nrows = m.nrows;
  out.ncols = m.ncols;
  out.tuples.reserve(m.colids.size());
  for (index_t r = 0; r < m.nrows; ++r) {
    for (index_t k = m.rowptr[static_cast<std::size_t>(r)];
         k < m.rowptr[static_cast<std::size_t>(r) + 1]; ++k) {
      out.tuples.push_back({r, m.colids[static_cast<std::size_t>(k)],
                            m.values[static_cast<std::size_t>(k)]});
    }
  }
  return out;
}

/// Structural sanity check used by tests and ingestion.
template <SemiringLike SR>
void validate(const CscMatrix<SR>& m) {
  detail::check_offsets(m.colptr, m.ncols, m.nnz(), "csc");
  if (m.values.size() != m.rowids.size()) {
    throw MalformedInputError("csc: rowids/values length mismatch");
  }
  for (index_t c = 0; c < m.ncols; ++c) {
    index_t prev = -1;
    for (index_t k = m.colptr[static_cast<std::size_t>(c)];
         k < m.colptr[static_cast<std::size_t>(c) + 1]; ++k) {
      const index_t r = m.rowids[static_cast<std::size_t>(k)];
      if (r <= prev || r >= m.nrows) {
        throw MalformedInputError("csc: rows not strictly increasing in column " +
                                  std::to_string(c));
      }
      if (SR::is_zero(m.values[static_cast<std::size_t>(k)])) {
        throw MalformedInputError("csc: stored zero in column " +
                                  std::to_string(c));
      }
      prev = r;
    }
  }
}

template <SemiringLike SR>
void validate(const CsrMatrix<SR>& m) {
  validate(reinterpret_transpose(m));
}

}  // namespace spsumma
