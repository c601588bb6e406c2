#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "spsumma/common.hpp"

namespace spsumma {

/// One latency curve: (message bytes, seconds) sample points interpolated
/// piecewise-linearly in log-log space and extrapolated by the end
/// segment slopes. Samples must have strictly increasing byte sizes and
/// strictly positive, non-decreasing latencies.
class LatencyCurve {
 public:
  LatencyCurve() = default;

  explicit LatencyCurve(std::vector<std::pair<double, double>> points)
      : points_(std::move(points)) {
    if (points_.size() < 2) {
      throw MalformedInputError("latency curve needs at least two sample points");
    }
    double prev_b = 0.0;
    double prev_t = 0.0;
    for (const auto& [b, t] : points_) {
      if (b < 1.0 || b <= prev_b) {
        throw MalformedInputError(
            "latency curve sample sizes must be >= 1 byte and strictly "
            "increasing");
      }
      if (t <= 0.0 || t < prev_t) {
        throw MalformedInputError(
            "latency curve latencies must be positive and non-decreasing");
      }
      prev_b = b;
      prev_t = t;
    }
  }

  double at(double bytes) const {
    const double x = std::log(std::max(bytes, 1.0));
    std::size_t hi = 1;
    while (hi + 1 < points_.size() && std::log(points_[hi].first) < x) ++hi;
    const double x0 = std::log(points_[hi - 1].first);
    const double x1 = std::log(points_[hi].first);
    const double y0 = std::log(points_[hi - 1].second);
    const double y1 = std::log(points_[hi].second);
    const double y = y0 + (x - x0) / (x1 - x0) * (y1 - y0);
    return std::exp(y);
  }

  const std::vector<std::pair<double, double>>& points() const { return points_; }

 private:
  std::vector<std::pair<double, double>> points_;
};

/// Broadcast fanout enters the cost as a stage count: a scope of f ranks
/// pays ceil(log2(f)) curve evaluations. A one-rank scope has no stages
/// and costs nothing to broadcast.
inline int broadcast_stages(int fanout) {
  if (fanout < 1) throw InvalidRangeError("broadcast fanout must be >= 1");
  return std::bit_width(static_cast<unsigned>(fanout - 1));
}

/// Cost model for the two communication paths. The host path for a
/// device-resident payload is a device-to-host copy, a host broadcast,
/// and a host-to-device copy at every receiver; the device path is a
/// direct device broadcast.
class LatencyModel {
 public:
  LatencyModel() : LatencyModel(bundled_default()) {}

  LatencyModel(LatencyCurve host_bcast, LatencyCurve device_bcast,
               LatencyCurve copy_h2d, LatencyCurve copy_d2h)
      : host_bcast_(std::move(host_bcast)),
        device_bcast_(std::move(device_bcast)),
        copy_h2d_(std::move(copy_h2d)),
        copy_d2h_(std::move(copy_d2h)) {}

  double host_bcast(std::uint64_t bytes, int fanout) const {
    return broadcast_stages(fanout) * host_bcast_.at(static_cast<double>(bytes));
  }
  double device_bcast(std::uint64_t bytes, int fanout) const {
    return broadcast_stages(fanout) *
           device_bcast_.at(static_cast<double>(bytes));
  }
  double copy_h2d(std::uint64_t bytes) const {
    return copy_h2d_.at(static_cast<double>(bytes));
  }
  double copy_d2h(std::uint64_t bytes) const {
    return copy_d2h_.at(static_cast<double>(bytes));
  }

  /// Total simulated seconds to move a device-resident payload via host
  /// memory: the copies are paid even when the scope has a single rank.
  double host_path_total(std::uint64_t bytes, int fanout) const {
    return copy_d2h(bytes) + host_bcast(bytes, fanout) + copy_h2d(bytes);
  }
  double device_path_total(std::uint64_t bytes, int fanout) const {
    return device_bcast(bytes, fanout);
  }

  std::pair<double, double> sample_range() const {
    return {host_bcast_.points().front().first,
            host_bcast_.points().back().first};
  }

  /// Synthetic default model: affine latency curves sampled at powers of
  /// two. Host broadcasts start cheaper (30us + B / 12 GiB/s) than device
  /// broadcasts (85us + B / 40 GiB/s) but have less bandwidth, producing
  /// a single host/device crossover per fanout; staging copies cost
  /// 8us + B / 20 GiB/s.
  static LatencyModel bundled_default() {
    constexpr double kGiB = 1024.0 * 1024.0 * 1024.0;
    auto sample = [](double base_s, double bytes_per_s) {
      std::vector<std::pair<double, double>> pts;
      for (int e = 0; e <= 31; ++e) {
        const double b = static_cast<double>(std::uint64_t{1} << e);
        pts.emplace_back(b, base_s + b / bytes_per_s);
      }
      return LatencyCurve(std::move(pts));
    };
    return LatencyModel(sample(30e-6, 12.0 * kGiB), sample(85e-6, 40.0 * kGiB),
                        sample(8e-6, 20.0 * kGiB), sample(8e-6, 20.0 * kGiB));
  }

  nlohmann::json to_json() const {
    auto curve = [](const LatencyCurve& c) {
      nlohmann::json pts = nlohmann::json::array();
      for (const auto& [b, t] : c.points()) pts.push_back({b, t});
      return pts;
    };
    return {{"curves",
             {{"host_bcast", curve(host_bcast_)},
              {"device_bcast", curve(device_bcast_)},
              {"copy_h2d", curve(copy_h2d_)},
              {"copy_d2h", curve(copy_d2h_)}}}};
  }

  static LatencyModel from_json(const nlohmann::json& j) {
    auto curve = [&j](const char* name) {
      if (!j.contains("curves") || !j["curves"].contains(name)) {
        throw MalformedInputError(std::string("latency model: missing curve '") +
                                  name + "'");
      }
      std::vector<std::pair<double, double>> pts;
      for (const auto& p : j["curves"][name]) {
        if (!p.is_array() || p.size() != 2) {
          throw MalformedInputError(
              std::string("latency model: curve '") + name +
              "' samples must be [bytes, seconds] pairs");
        }
        pts.emplace_back(p[0].get<double>(), p[1].get<double>());
      }
      return LatencyCurve(std::move(pts));
    };
    return LatencyModel(curve("host_bcast"), curve("device_bcast"),
                        curve("copy_h2d"), curve("copy_d2h"));
  }

  static LatencyModel load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MalformedInputError(path + ": cannot open latency model");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw MalformedInputError(path + ": " + e.what());
    }
    return from_json(j);
  }

  void save_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw MalformedInputError(path + ": cannot write latency model");
    out << to_json().dump(2) << "\n";
  }

 private:
  LatencyCurve host_bcast_;
  LatencyCurve device_bcast_;
  LatencyCurve copy_h2d_;
  LatencyCurve copy_d2h_;
};

}  // namespace spsumma
