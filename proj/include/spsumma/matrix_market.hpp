#pragma once

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "spsumma/formats.hpp"

namespace spsumma {

namespace detail {

inline std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream iss(line);
  std::string tok;
  while (iss >> tok) out.push_back(tok);
  return out;
}

[[noreturn]] inline void mm_fail(const std::string& path, std::size_t line_no,
                                 const std::string& what) {
  throw MalformedInputError(path + ":" + std::to_string(line_no) + ": " + what);
}

}  // namespace detail

/// Parses an ASCII Matrix Market coordinate file. One-based file indices
/// become zero-based; `symmetric` files have their off-diagonal entries
/// mirrored into both triangles; `pattern` entries take the semiring one.
/// The result is normalized (duplicates folded, zeros dropped).
///
/// Supported headers: object `matrix`, format `coordinate`, field
/// `real`/`integer`/`pattern`, symmetry `general`/`symmetric`.
template <SemiringLike SR>
CooMatrix<SR> read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedInputError(path + ": cannot open file");

  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) detail::mm_fail(path, 1, "empty file");
  ++line_no;

  auto header = detail::split_fields(detail::lower(line));
  if (header.size() < 5 || header[0] != "%%matrixmarket") {
    detail::mm_fail(path, line_no, "missing %%MatrixMarket header");
  }
  if (header[1] != "matrix") {
    throw UnsupportedFormatError(path + ": unsupported object '" + header[1] + "'");
  }
  if (header[2] != "coordinate") {
    throw UnsupportedFormatError(path + ": unsupported format '" + header[2] +
                                 "' (only coordinate files are accepted)");
  }
  const std::string field = header[3];
  if (field != "real" && field != "integer" && field != "pattern") {
    throw UnsupportedFormatError(path + ": unsupported field '" + field + "'");
  }
  const std::string symmetry = header[4];
  if (symmetry != "general" && symmetry != "symmetric") {
    throw UnsupportedFormatError(path + ": unsupported symmetry '" + symmetry + "'");
  }
  const bool pattern = field == "pattern";
  const bool mirror = symmetry == "symmetric";

  // Comment and blank lines may precede the size line.
  std::vector<std::string> size_fields;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line[0] == '%') continue;
    size_fields = detail::split_fields(line);
    if (!size_fields.empty()) break;
  }
  if (size_fields.size() != 3) {
    detail::mm_fail(path, line_no, "expected size line 'nrows ncols nnz'");
  }

  CooMatrix<SR> out;
  index_t declared_nnz = 0;
  try {
    out.nrows = std::stoll(size_fields[0]);
    out.ncols = std::stoll(size_fields[1]);
    declared_nnz = std::stoll(size_fields[2]);
  } catch (const std::exception&) {
    detail::mm_fail(path, line_no, "non-numeric size line");
  }
  if (out.nrows < 0 || out.ncols < 0 || declared_nnz < 0) {
    detail::mm_fail(path, line_no, "negative size field");
  }

  out.tuples.reserve(static_cast<std::size_t>(declared_nnz) * (mirror ? 2 : 1));
  index_t seen = 0;
  while (seen < declared_nnz && std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line[0] == '%') continue;
    auto fields = detail::split_fields(line);
    if (fields.empty()) continue;
    const std::size_t expected = pattern ? 2 : 3;
    if (fields.size() != expected) {
      detail::mm_fail(path, line_no,
                      "expected " + std::to_string(expected) + " fields, got " +
                          std::to_string(fields.size()));
    }
    index_t r = 0;
    index_t c = 0;
    double v = 1.0;
    try {
      r = std::stoll(fields[0]);
      c = std::stoll(fields[1]);
      if (!pattern) v = std::stod(fields[2]);
    } catch (const std::exception&) {
      detail::mm_fail(path, line_no, "non-numeric entry");
    }
    if (r < 1 || r > out.nrows || c < 1 || c > out.ncols) {
      detail::mm_fail(path, line_no,
                      "entry (" + std::to_string(r) + ", " + std::to_string(c) +
                          ") outside declared dimensions");
    }
    const auto value = pattern ? SR::one() : SR::from_real(v);
    out.tuples.push_back({r - 1, c - 1, value});
    if (mirror && r != c) out.tuples.push_back({c - 1, r - 1, value});
    ++seen;
  }
  if (seen < declared_nnz) {
    detail::mm_fail(path, line_no, "file ends after " + std::to_string(seen) +
                                       " of " + std::to_string(declared_nnz) +
                                       " entries");
  }

  normalize_coo(out);
  return out;
}

}  // namespace spsumma
