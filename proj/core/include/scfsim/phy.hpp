#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "scfsim/rng.hpp"

namespace scfsim {

// Link-budget and receiver parameters.  Powers are handled in linear
// milliwatts internally; dB fields are converted on use.
struct PhyConfig {
  double tx_power_mw = 200.0;
  double sinr_threshold_db = 10.0;
  double shadow_std_db = 8.0;
  double receiver_sensitivity_dbm = -104.0;
  double noise_psd_dbm_hz = -174.0;
  double bandwidth_hz = 180000.0;
  int antenna_count = 1;
  double bs_height_m = 30.0;
  // When true, each device draws one shadow value at placement time and
  // keeps it; otherwise shadowing is redrawn per transmission.
  bool shadow_static_per_device = false;

  double noise_power_mw() const;
  double sinr_threshold_linear() const;
  double sensitivity_mw() const;
};

// A circular device cluster at a fixed ground distance from the base
// station.
struct ClusterGeometry {
  double center_distance_m = 450.0;
  double radius_m = 25.0;
  std::uint32_t device_count = 8;
};

// One transmission as seen by the receiver in a single slot.
struct Signal {
  std::uint64_t device_id = 0;
  int cluster = 0;
  double power_mw = 0.0;
};

struct DetectionResult {
  std::vector<Signal> decoded;  // in decode order (descending power)
  std::vector<Signal> failed;
};

// 3D distance from the base-station antenna to a device whose planar
// position is `offset_x/offset_y` meters from the cluster center (the
// cluster center lies on the x-axis at `geometry.center_distance_m`).
double device_distance_m(const ClusterGeometry& geometry, double offset_x_m,
                         double offset_y_m, double bs_height_m);

// Urban-macro style distance law; `distance_m` in meters, result in dB.
double path_loss_db(double distance_m);

// Deterministic core of the link budget: received power given explicit
// shadow (dB) and fading gain values.
double received_power_mw(const PhyConfig& phy, double distance_m,
                         double shadow_db, double fading_gain);

// Random link-budget sample: shadow ~ Normal(0, shadow_std²) in dB and
// fading = sum over antennas of unit-mean exponential power gains.
double sample_received_power(const PhyConfig& phy, double distance_m, Rng& rng);

// Sum of `antenna_count` unit-mean exponential gains.
double sample_fading_gain(const PhyConfig& phy, Rng& rng);

// Successive interference cancellation over one slot's signals: decode
// the strongest remaining signal while its SINR clears the threshold and
// its power clears the receiver sensitivity; on the first failure all
// remaining signals fail.  Ties in power break by ascending device_id.
DetectionResult sic_detect(std::vector<Signal> signals, const PhyConfig& phy);

// Monte-Carlo joint distribution of (C1 successes, C2 successes) for a
// slot carrying n1 + n2 concurrent transmissions, devices placed fresh
// per realization.  Result indexed [u1][u2]; entries sum to 1.
struct OutcomeDistribution {
  std::array<std::array<double, 4>, 4> joint{};

  double marginal(int cluster, int k) const;
};

OutcomeDistribution outcome_distribution(int n1, int n2, const PhyConfig& phy,
                                         const ClusterGeometry& geom1,
                                         const ClusterGeometry& geom2,
                                         std::uint64_t samples, Rng& rng);

}  // namespace scfsim
