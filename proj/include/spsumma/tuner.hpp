#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spsumma/checksum.hpp"
#include "spsumma/summa.hpp"

namespace spsumma {

/// Smallest message size in [lo, hi] at which the host path stops being
/// cheaper than the device path, located by bisection on the interpolated
/// curves to 1-byte resolution. Requires a proper sign change across the
/// endpoints (host cheaper at lo, device cheaper or equal at hi);
/// otherwise there is no crossover in range and nothing is returned.
inline std::optional<std::uint64_t> find_crossover(const LatencyModel& model,
                                                   int fanout,
                                                   std::uint64_t lo_bytes,
                                                   std::uint64_t hi_bytes) {
  if (lo_bytes >= hi_bytes) {
    throw InvalidRangeError("find_crossover needs lo_bytes < hi_bytes, got [" +
                            std::to_string(lo_bytes) + ", " +
                            std::to_string(hi_bytes) + "]");
  }
  auto host_minus_device = [&](std::uint64_t b) {
    return model.host_path_total(b, fanout) - model.device_path_total(b, fanout);
  };
  if (host_minus_device(lo_bytes) >= 0.0 || host_minus_device(hi_bytes) < 0.0) {
    return std::nullopt;
  }
  std::uint64_t lo = lo_bytes;
  std::uint64_t hi = hi_bytes;
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (host_minus_device(mid) >= 0.0 ? hi : lo) = mid;
  }
  return hi;
}

/// Hybrid routing assumes the host path wins for small messages and loses
/// for large ones. User-supplied models are allowed to violate that; this
/// produces the warning text when they do.
inline std::optional<std::string> crossover_warning(const LatencyModel& model,
                                                    int fanout = 2) {
  const auto [lo, hi] = model.sample_range();
  const auto lo_b = static_cast<std::uint64_t>(std::max(lo, 1.0));
  const auto hi_b = static_cast<std::uint64_t>(hi);
  if (lo_b < hi_b && find_crossover(model, fanout, lo_b, hi_b)) {
    return std::nullopt;
  }
  return "latency model has no host/device crossover in its sampled range; "
         "hybrid routing will degenerate to a single path";
}

/// One sweep measurement. `threshold_bytes` equal to kInfiniteThreshold
/// denotes the all-host extreme.
struct SweepRow {
  std::uint64_t threshold_bytes = 0;
  double pct_host_bcasts = 0.0;
  double sim_comm_seconds = 0.0;
  double wall_local_seconds = 0.0;
  std::uint64_t result_checksum = 0;
};

/// Runs A*A once per threshold under hybrid routing and tabulates the
/// host-handled broadcast percentage, the aggregate simulated
/// communication cost, and the measured local-multiply wall time. Every
/// run must produce the identical product; diverging checksums abort the
/// sweep.
template <SemiringLike SR>
std::vector<SweepRow> sweep_thresholds(const DistMatrix<SR>& a,
                                       const LatencyModel& model,
                                       const std::vector<std::uint64_t>& thresholds,
                                       const SummaOptions& opts = {}) {
  std::vector<SweepRow> rows;
  rows.reserve(thresholds.size());
  for (const std::uint64_t threshold : thresholds) {
    const CommConfig cfg{CommMode::hybrid, threshold};
    auto res = summa25_multiply(a, a, model, cfg, opts);
    const std::uint64_t checksum = matrix_checksum(gather(res.product));
    if (!rows.empty() && checksum != rows.front().result_checksum) {
      throw InternalError(
          "threshold sweep runs produced different products; routing must "
          "not affect results");
    }
    const auto total = res.ledger.payload_bcasts();
    rows.push_back(
        {threshold,
         total == 0 ? 0.0
                    : 100.0 * static_cast<double>(res.ledger.host_bcasts) /
                          static_cast<double>(total),
         res.ledger.sim_comm_seconds(),
         res.ledger.wall_at(Phase::local_multiply), checksum});
  }
  return rows;
}

/// Geometric threshold ladder bracketing the model's crossover, with the
/// forced extremes 0 (all-device) and infinity (all-host) included.
inline std::vector<std::uint64_t> default_threshold_ladder(
    const LatencyModel& model, int fanout) {
  const std::uint64_t star =
      find_crossover(model, std::max(fanout, 2), 1, std::uint64_t{1} << 30)
          .value_or(std::uint64_t{1} << 16);
  std::vector<std::uint64_t> ladder{0};
  for (int shift = 5; shift >= 1; --shift) {
    const std::uint64_t t = star >> shift;
    if (t > 0 && t != ladder.back()) ladder.push_back(t);
  }
  for (int shift = 0; shift <= 4; ++shift) {
    const std::uint64_t t = star << shift;
    if (t != ladder.back()) ladder.push_back(t);
  }
  ladder.push_back(kInfiniteThreshold);
  return ladder;
}

}  // namespace spsumma
