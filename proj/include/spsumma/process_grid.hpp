#pragma once

#include <cmath>
#include <string>

#include "spsumma/common.hpp"

namespace spsumma {

/// Square 2D arrangement of p = q*q ranks, row-major. Each rank owns one
/// block per distributed operand; broadcasts run along grid rows/columns.
class ProcessGrid {
 public:
  explicit ProcessGrid(int process_count) : p_(process_count) {
    if (process_count < 1) {
      throw GridError("process count must be positive, got " +
                      std::to_string(process_count));
    }
    q_ = static_cast<int>(std::lround(std::sqrt(static_cast<double>(p_))));
    if (q_ * q_ != p_) {
      throw GridError("process count " + std::to_string(p_) +
                      " is not a perfect square; the 2D grid requires a "
                      "square number of processes");
    }
  }

  int size() const { return p_; }
  int side() const { return q_; }

  int row_of(int rank) const { return rank / q_; }
  int col_of(int rank) const { return rank % q_; }
  int rank_at(int row, int col) const { return row * q_ + col; }

  bool operator==(const ProcessGrid&) const = default;

 private:
  int p_;
  int q_;
};

}  // namespace spsumma
