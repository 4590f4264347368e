#include "scfsim/phy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scfsim {

double PhyConfig::noise_power_mw() const {
  const double noise_dbm = noise_psd_dbm_hz + 10.0 * std::log10(bandwidth_hz);
  return std::pow(10.0, noise_dbm / 10.0);
}

double PhyConfig::sinr_threshold_linear() const {
  return std::pow(10.0, sinr_threshold_db / 10.0);
}

double PhyConfig::sensitivity_mw() const {
  return std::pow(10.0, receiver_sensitivity_dbm / 10.0);
}

double device_distance_m(const ClusterGeometry& geometry, double offset_x_m,
                         double offset_y_m, double bs_height_m) {
  const double x = geometry.center_distance_m + offset_x_m;
  const double horizontal_sq = x * x + offset_y_m * offset_y_m;
  return std::sqrt(horizontal_sq + bs_height_m * bs_height_m);
}

double path_loss_db(double distance_m) {
  if (!(distance_m > 0.0)) {
    throw std::invalid_argument("path_loss_db: distance must be positive");
  }
  return 128.0 + 37.6 * std::log10(distance_m / 1000.0);
}

double received_power_mw(const PhyConfig& phy, double distance_m,
                         double shadow_db, double fading_gain) {
  const double loss_db = path_loss_db(distance_m) + shadow_db;
  return phy.tx_power_mw * std::pow(10.0, -loss_db / 10.0) * fading_gain;
}

double sample_fading_gain(const PhyConfig& phy, Rng& rng) {
  double gain = 0.0;
  for (int m = 0; m < phy.antenna_count; ++m) gain += rng.exponential();
  return gain;
}

double sample_received_power(const PhyConfig& phy, double distance_m, Rng& rng) {
  const double shadow_db = phy.shadow_std_db * rng.normal();
  const double fading = sample_fading_gain(phy, rng);
  return received_power_mw(phy, distance_m, shadow_db, fading);
}

DetectionResult sic_detect(std::vector<Signal> signals, const PhyConfig& phy) {
  DetectionResult result;
  if (signals.empty()) return result;

  std::sort(signals.begin(), signals.end(), [](const Signal& a, const Signal& b) {
    if (a.power_mw != b.power_mw) return a.power_mw > b.power_mw;
    return a.device_id < b.device_id;
  });

  const double noise_mw = phy.noise_power_mw();
  const double threshold = phy.sinr_threshold_linear();
  const double sensitivity = phy.sensitivity_mw();

  double residual = 0.0;
  for (const Signal& s : signals) residual += s.power_mw;

  std::size_t i = 0;
  for (; i < signals.size(); ++i) {
    const double p = signals[i].power_mw;
    const double interference = residual - p;
    const double sinr = p / (interference + noise_mw);
    if (sinr >= threshold && p >= sensitivity) {
      result.decoded.push_back(signals[i]);
      residual -= p;
    } else {
      break;  // all weaker signals face strictly worse SINR
    }
  }
  result.failed.assign(signals.begin() + static_cast<std::ptrdiff_t>(i),
                       signals.end());
  return result;
}

double OutcomeDistribution::marginal(int cluster, int k) const {
  double p = 0.0;
  for (int u1 = 0; u1 < 4; ++u1) {
    for (int u2 = 0; u2 < 4; ++u2) {
      const int u = (cluster == 0) ? u1 : u2;
      if (u == k) p += joint[u1][u2];
    }
  }
  return p;
}

OutcomeDistribution outcome_distribution(int n1, int n2, const PhyConfig& phy,
                                         const ClusterGeometry& geom1,
                                         const ClusterGeometry& geom2,
                                         std::uint64_t samples, Rng& rng) {
  if (samples == 0) {
    throw std::invalid_argument("outcome_distribution: samples must be >= 1");
  }
  OutcomeDistribution out;
  std::vector<Signal> signals;
  signals.reserve(static_cast<std::size_t>(n1 + n2));

  for (std::uint64_t it = 0; it < samples; ++it) {
    signals.clear();
    std::uint64_t id = 0;
    for (int c = 0; c < 2; ++c) {
      const ClusterGeometry& g = (c == 0) ? geom1 : geom2;
      const int n = (c == 0) ? n1 : n2;
      for (int k = 0; k < n; ++k, ++id) {
        const double r = g.radius_m * std::sqrt(rng.u01());
        const double ang = 6.283185307179586476925286766559 * rng.u01();
        const double dist = device_distance_m(g, r * std::cos(ang),
                                              r * std::sin(ang), phy.bs_height_m);
        signals.push_back({id, c, sample_received_power(phy, dist, rng)});
      }
    }
    const DetectionResult det = sic_detect(signals, phy);
    int u1 = 0, u2 = 0;
    for (const Signal& s : det.decoded) (s.cluster == 0 ? u1 : u2)++;
    out.joint[std::min(u1, 3)][std::min(u2, 3)] += 1.0;
  }

  const double norm = 1.0 / static_cast<double>(samples);
  for (auto& row : out.joint) {
    for (double& v : row) v *= norm;
  }
  return out;
}

}  // namespace scfsim
