#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "spsumma/comm.hpp"

namespace spsumma {

/// Accounting phases. `copy` holds only the host-path staging copies that
/// broadcasts incur; the one-time block upload is charged to `prepare`
/// and the per-stage result download to `merge`.
enum class Phase : std::size_t {
  prepare = 0,
  broadcast,
  local_multiply,
  merge,
  copy,
};

constexpr std::size_t kPhaseCount = 5;

constexpr std::array<std::string_view, kPhaseCount> kPhaseNames = {
    "prepare", "broadcast", "local_multiply", "merge", "copy"};

/// Per-rank (and, after a run, merged) cost accounting. Simulated seconds
/// come from the latency model; wall seconds are measured around the real
/// local kernels. Counters cover payload broadcasts only; metadata size
/// exchanges are tallied separately.
struct CostLedger {
  std::array<double, kPhaseCount> sim{};
  std::array<double, kPhaseCount> wall{};

  std::uint64_t host_bcasts = 0;
  std::uint64_t device_bcasts = 0;
  std::uint64_t bytes_host_path = 0;
  std::uint64_t bytes_device_path = 0;
  std::uint64_t size_exchanges = 0;
  std::uint64_t local_multiply_calls = 0;
  std::uint64_t skipped_stages = 0;
  std::uint64_t peak_bcast_buffer_bytes = 0;

  double& sim_at(Phase p) { return sim[static_cast<std::size_t>(p)]; }
  double sim_at(Phase p) const { return sim[static_cast<std::size_t>(p)]; }
  double& wall_at(Phase p) { return wall[static_cast<std::size_t>(p)]; }
  double wall_at(Phase p) const { return wall[static_cast<std::size_t>(p)]; }

  std::uint64_t payload_bcasts() const { return host_bcasts + device_bcasts; }

  /// Aggregate simulated communication time: broadcasts plus the copies
  /// the host path requires.
  double sim_comm_seconds() const {
    return sim_at(Phase::broadcast) + sim_at(Phase::copy);
  }
};

/// One collective instance as charged by the fabric; the merged ledger is
/// folded from these in a deterministic order, and tests use them to
/// check per-message routing optimality.
struct InstanceRecord {
  int scope_kind = 0;
  int scope_index = 0;
  std::uint64_t seq = 0;
  bool payload = false;
  PathKind path = PathKind::host;
  std::uint64_t bytes = 0;
  int fanout = 1;
  double bcast_cost = 0.0;
  double copy_cost = 0.0;
};

}  // namespace spsumma
