#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "scfsim/phy.hpp"

namespace scfsim {

// Result of tuning the receiver noise bandwidth so the physical layer's
// lone-near-device decode probability matches the detection table's
// reference value.  The scan holds (bandwidth_hz, decode probability)
// pairs for every candidate, for auditability.
struct CalibrationResult {
  PhyConfig phy;           // input config with bandwidth_hz replaced
  double achieved = 0.0;   // decode probability at the chosen bandwidth
  double target = 0.0;
  std::vector<std::pair<double, double>> scan;
};

// Monte-Carlo estimate of the probability that a single transmission
// from a device placed uniformly in `geom` is decoded (no interference).
double lone_decode_probability(const PhyConfig& phy, const ClusterGeometry& geom,
                               std::uint64_t samples, std::uint64_t master_seed);

// Scans log-spaced bandwidth candidates (1 kHz to 10 MHz) with common
// random numbers and picks the one whose lone-device decode probability
// is closest to `target`.  The configured bandwidth is evaluated first
// and kept unless a candidate is strictly closer: when the objective is
// flat (the sensitivity-bound regime) the noise level still matters for
// multi-signal detection, so it must not drift on ties.
CalibrationResult calibrate_noise(const PhyConfig& phy,
                                  const ClusterGeometry& geom,
                                  double target = 0.837,
                                  std::uint64_t samples = 100000,
                                  std::uint64_t master_seed = 1);

}  // namespace scfsim
