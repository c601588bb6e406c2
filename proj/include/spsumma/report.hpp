#pragma once

#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "spsumma/cost_ledger.hpp"
#include "spsumma/tuner.hpp"

namespace spsumma {

namespace detail {

inline std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9f", s);
  return buf;
}

inline std::string fmt_hex64(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline std::string fmt_threshold(std::uint64_t t) {
  return t == kInfiniteThreshold ? "inf" : std::to_string(t);
}

}  // namespace detail

/// Per-run timing summary the CLI writes. Simulated seconds come from the
/// latency model and are identical across repeat iterations; wall seconds
/// are measured around the local kernels and vary.
struct TimingReport {
  std::string matrix;
  std::string semiring;
  int procs = 1;
  std::string comm_mode;
  std::uint64_t threshold_bytes = 0;
  index_t result_rows = 0;
  index_t result_cols = 0;
  index_t result_nnz = 0;
  std::uint64_t result_checksum = 0;
  std::vector<CostLedger> iterations;  // timed iterations, in order
  std::optional<bool> oracle_match;

  std::string to_text() const {
    std::ostringstream out;
    out << "spsumma multiply report\n";
    out << "matrix: " << matrix << "\n";
    out << "semiring: " << semiring << "\n";
    out << "procs: " << procs << "\n";
    out << "comm: " << comm_mode
        << " threshold_bytes=" << detail::fmt_threshold(threshold_bytes) << "\n";
    out << "iterations: " << iterations.size() << " timed (after 1 untimed warm-up)\n";
    out << "result: rows=" << result_rows << " cols=" << result_cols
        << " nnz=" << result_nnz << " checksum="
        << detail::fmt_hex64(result_checksum) << "\n";
    if (oracle_match) {
      out << "oracle: " << (*oracle_match ? "PASS" : "FAIL") << "\n";
    }

    auto phase_lines = [&out](const char* tag, const CostLedger& led) {
      for (std::size_t i = 0; i < kPhaseCount; ++i) {
        out << tag << " " << kPhaseNames[i]
            << ": sim=" << detail::fmt_seconds(led.sim[i])
            << " wall=" << detail::fmt_seconds(led.wall[i]) << "\n";
      }
      out << tag << " payload_bcasts: host=" << led.host_bcasts
          << " device=" << led.device_bcasts
          << " bytes_host=" << led.bytes_host_path
          << " bytes_device=" << led.bytes_device_path << "\n";
    };

    if (!iterations.empty()) {
      out << "first_iteration:\n";
      phase_lines("  first", iterations.front());
      CostLedger mean;
      for (const auto& it : iterations) {
        for (std::size_t i = 0; i < kPhaseCount; ++i) {
          mean.sim[i] += it.sim[i] / static_cast<double>(iterations.size());
          mean.wall[i] += it.wall[i] / static_cast<double>(iterations.size());
        }
      }
      mean.host_bcasts = iterations.front().host_bcasts;
      mean.device_bcasts = iterations.front().device_bcasts;
      mean.bytes_host_path = iterations.front().bytes_host_path;
      mean.bytes_device_path = iterations.front().bytes_device_path;
      out << "mean_over_timed_iterations:\n";
      phase_lines("  mean", mean);
    }
    return out.str();
  }
};

/// Tab-delimited sweep table, one row per threshold.
inline std::string sweep_table_text(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "threshold_bytes\tpct_host_bcasts\tsim_comm_seconds\t"
         "wall_local_seconds\tresult_checksum\n";
  for (const auto& r : rows) {
    char pct[16];
    std::snprintf(pct, sizeof(pct), "%.2f", r.pct_host_bcasts);
    out << detail::fmt_threshold(r.threshold_bytes) << "\t" << pct << "\t"
        << detail::fmt_seconds(r.sim_comm_seconds) << "\t"
        << detail::fmt_seconds(r.wall_local_seconds) << "\t"
        << detail::fmt_hex64(r.result_checksum) << "\n";
  }
  return out.str();
}

}  // namespace spsumma
