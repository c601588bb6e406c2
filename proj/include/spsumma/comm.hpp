#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "spsumma/common.hpp"

namespace spsumma {

/// Each process owns two memory spaces; compute kernels consume
/// device-resident operands, the fabric charges copies when data crosses
/// the boundary.
enum class MemorySpace { host, device };

/// A raw byte buffer tagged with the memory space it lives in. The tag is
/// part of the type, so handing a host buffer to a device-only interface
/// is a compile error.
template <MemorySpace S>
struct Buffer {
  static constexpr MemorySpace space = S;
  std::vector<std::byte> bytes;

  std::uint64_t size() const { return bytes.size(); }
};

using HostBuffer = Buffer<MemorySpace::host>;
using DeviceBuffer = Buffer<MemorySpace::device>;

enum class PathKind { host, device };

enum class CommMode { host_only, device_only, hybrid };

/// Routing configuration for payload broadcasts. `threshold_bytes` is
/// consulted only in hybrid mode.
struct CommConfig {
  CommMode mode = CommMode::hybrid;
  std::uint64_t threshold_bytes = 0;
};

constexpr std::uint64_t kInfiniteThreshold = ~std::uint64_t{0};

/// The hybrid rule: messages at or above the threshold take the device
/// path, smaller ones the host path. Forced modes ignore the threshold.
inline PathKind choose_path(std::uint64_t bytes, const CommConfig& cfg) {
  switch (cfg.mode) {
    case CommMode::host_only:
      return PathKind::host;
    case CommMode::device_only:
      return PathKind::device;
    case CommMode::hybrid:
      return bytes >= cfg.threshold_bytes ? PathKind::device : PathKind::host;
  }
  throw InternalError("invalid comm mode");
}

}  // namespace spsumma
