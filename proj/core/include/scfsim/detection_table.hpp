#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>

#include "scfsim/rng.hpp"

namespace scfsim {

// Raised when table-driven detection is asked about concurrency it has no
// data for.  Callers surface this as a capacity failure (CLI exit code 3).
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Empirical per-slot decode statistics for the two-cluster deployment:
// given n1 near-cluster and n2 far-cluster concurrent transmissions in a
// slot (each ≤ 3), the marginal distribution of how many of each
// cluster's packets are decoded.  Used as a fast drop-in replacement for
// the physical-layer Monte Carlo.
class DetectionTable {
 public:
  static constexpr int kMaxConcurrency = 3;
  static constexpr int kClusters = 2;

  // P(exactly `k` decoded from `cluster` | n1, n2 transmissions).
  static double prob(int n1, int n2, int cluster, int k);

  // Expected decoded count for `cluster` given (n1, n2).
  static double mean(int n1, int n2, int cluster);

  // Samples a decoded count for `cluster` given (n1, n2).
  static int sample(int n1, int n2, int cluster, Rng& rng);

  // Throws CapacityError unless 0 ≤ n ≤ kMaxConcurrency for both clusters.
  static void check_concurrency(int n1, int n2);
};

}  // namespace scfsim
