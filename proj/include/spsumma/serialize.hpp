#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstring>

#include "spsumma/comm.hpp"
#include "spsumma/formats.hpp"

namespace spsumma {

inline void store_u64le(std::byte* out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    out[i] = static_cast<std::byte>((v >> (8 * i)) & 0xff);
  }
}

inline std::uint64_t load_u64le(const std::byte* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(std::to_integer<std::uint8_t>(p[i])) << (8 * i);
  }
  return v;
}

/// Fixed-width canonical encoding of semiring values, used both on the
/// broadcast wire and as the value bytes inside content checksums.
template <class T>
struct ValueCodec;

template <>
struct ValueCodec<double> {
  static constexpr std::size_t size = 8;
  static void encode(double v, std::byte* out) {
    store_u64le(out, std::bit_cast<std::uint64_t>(v));
  }
  static double decode(const std::byte* p) {
    return std::bit_cast<double>(load_u64le(p));
  }
};

template <>
struct ValueCodec<std::int64_t> {
  static constexpr std::size_t size = 8;
  static void encode(std::int64_t v, std::byte* out) {
    store_u64le(out, static_cast<std::uint64_t>(v));
  }
  static std::int64_t decode(const std::byte* p) {
    return static_cast<std::int64_t>(load_u64le(p));
  }
};

template <>
struct ValueCodec<bool> {
  static constexpr std::size_t size = 1;
  static void encode(bool v, std::byte* out) {
    *out = static_cast<std::byte>(v ? 1 : 0);
  }
  static bool decode(const std::byte* p) {
    return std::to_integer<std::uint8_t>(*p) != 0;
  }
};

template <>
struct ValueCodec<MinSelect> {
  static constexpr std::size_t size = 16;
  static void encode(const MinSelect& v, std::byte* out) {
    store_u64le(out, std::bit_cast<std::uint64_t>(v.weight));
    store_u64le(out + 8, static_cast<std::uint64_t>(v.payload));
  }
  static MinSelect decode(const std::byte* p) {
    return {std::bit_cast<double>(load_u64le(p)),
            static_cast<std::int64_t>(load_u64le(p + 8))};
  }
};

/// Byte size of a CSR panel on the wire: the row pointer, column id, and
/// value arrays as one contiguous message.
template <SemiringLike SR>
std::uint64_t csr_payload_bytes(index_t nrows, index_t nnz) {
  using Codec = ValueCodec<typename SR::value_type>;
  return 8 * (static_cast<std::uint64_t>(nrows) + 1) +
         8 * static_cast<std::uint64_t>(nnz) +
         Codec::size * static_cast<std::uint64_t>(nnz);
}

template <SemiringLike SR>
DeviceBuffer serialize_csr(const CsrMatrix<SR>& m) {
  using Codec = ValueCodec<typename SR::value_type>;
  DeviceBuffer buf;
  buf.bytes.resize(csr_payload_bytes<SR>(m.nrows, m.nnz()));
  std::byte* out = buf.bytes.data();
  for (index_t v : m.rowptr) {
    store_u64le(out, static_cast<std::uint64_t>(v));
    out += 8;
  }
  for (index_t v : m.colids) {
    store_u64le(out, static_cast<std::uint64_t>(v));
    out += 8;
  }
  for (std::size_t i = 0; i < m.values.size(); ++i) {
    Codec::encode(m.values[i], out);
    out += Codec::size;
  }
  return buf;
}

template <SemiringLike SR>
CsrMatrix<SR> deserialize_csr(const DeviceBuffer& buf, index_t nrows,
                              index_t ncols, index_t nnz) {
  using Codec = ValueCodec<typename SR::value_type>;
  if (buf.size() != csr_payload_bytes<SR>(nrows, nnz)) {
    throw ProtocolError("csr payload size does not match the exchanged triple");
  }
  CsrMatrix<SR> m;
  m.nrows = nrows;
  m.ncols = ncols;
  m.rowptr.resize(static_cast<std::size_t>(nrows) + 1);
  m.colids.resize(static_cast<std::size_t>(nnz));
  m.values.resize(static_cast<std::size_t>(nnz));
  const std::byte* in = buf.bytes.data();
  for (auto& v : m.rowptr) {
    v = static_cast<index_t>(load_u64le(in));
    in += 8;
  }
  for (auto& v : m.colids) {
    v = static_cast<index_t>(load_u64le(in));
    in += 8;
  }
  for (std::size_t i = 0; i < m.values.size(); ++i) {
    m.values[i] = Codec::decode(in);
    in += Codec::size;
  }
  return m;
}

}  // namespace spsumma
