#pragma once

#include <cstdint>

#include "spsumma/formats.hpp"
#include "spsumma/serialize.hpp"

namespace spsumma {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Order-independent 64-bit content hash: each (row, col, canonical value
/// bytes) tuple is mixed independently and the per-tuple hashes are
/// summed, so block-by-block and run-by-run enumeration orders agree.
template <SemiringLike SR>
std::uint64_t matrix_checksum(const CooMatrix<SR>& m) {
  using Codec = ValueCodec<typename SR::value_type>;
  std::uint64_t total = splitmix64(static_cast<std::uint64_t>(m.nrows) * 31 +
                                   static_cast<std::uint64_t>(m.ncols));
  for (const auto& t : m.tuples) {
    std::byte enc[Codec::size];
    Codec::encode(t.value, enc);
    std::uint64_t v = 0xcbf29ce484222325ULL;  // FNV-1a over the value bytes
    for (std::size_t i = 0; i < Codec::size; ++i) {
      v = (v ^ std::to_integer<std::uint8_t>(enc[i])) * 0x100000001b3ULL;
    }
    std::uint64_t h = splitmix64(static_cast<std::uint64_t>(t.row));
    h ^= splitmix64(static_cast<std::uint64_t>(t.col) + 0x9e3779b97f4a7c15ULL);
    h ^= v;
    total += splitmix64(h);
  }
  return total;
}

template <SemiringLike SR>
std::uint64_t matrix_checksum(const CscMatrix<SR>& m) {
  return matrix_checksum(csc_to_coo(m));
}

template <SemiringLike SR>
std::uint64_t matrix_checksum(const CsrMatrix<SR>& m) {
  return matrix_checksum(csr_to_coo(m));
}

}  // namespace spsumma
