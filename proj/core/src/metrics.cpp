#include "scfsim/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace scfsim {

double packet_energy_j(const EnergyParams& p, std::uint64_t transmit_attempts,
                       std::uint64_t idle_frames, std::uint32_t slots_per_frame) {
  if (transmit_attempts == 0) {
    throw std::invalid_argument(
        "packet_energy_j: a delivered packet has at least one attempt");
  }
  const double t_tx = p.packet_size_bytes * 8.0 / p.data_rate_bps;
  const double t_rx = p.ack_size_bytes * 8.0 / p.data_rate_bps;
  const double p_rx = p.rx_current_a * p.voltage_v;
  const double p_idle = p.idle_current_a * p.voltage_v;
  return p.tx_power_w * t_tx * static_cast<double>(transmit_attempts) +
         p_rx * t_rx +
         p_idle * p.slot_duration_s * static_cast<double>(slots_per_frame) *
             static_cast<double>(idle_frames);
}

double jain_fairness(const std::vector<double>& values) {
  double sum = 0.0, sumsq = 0.0;
  for (const double v : values) {
    sum += v;
    sumsq += v * v;
  }
  if (sumsq == 0.0) return 1.0;  // degenerate all-equal (all-zero) input
  return (sum * sum) / (static_cast<double>(values.size()) * sumsq);
}

MetricsAccumulator::MetricsAccumulator(std::size_t clusters)
    : successes_(clusters, 0),
      ack_count_(clusters, 0),
      delay_sum_(clusters, 0.0),
      energy_sum_j_(clusters, 0.0) {}

void MetricsAccumulator::record_frame(
    const std::vector<std::uint32_t>& successes_per_cluster) {
  std::uint32_t total = 0;
  for (std::size_t c = 0; c < successes_.size(); ++c) {
    successes_[c] += successes_per_cluster[c];
    total += successes_per_cluster[c];
  }
  frames_++;
  frame_total_sum_ += total;
  frame_total_sumsq_ += static_cast<double>(total) * total;
}

void MetricsAccumulator::record_ack(std::size_t cluster,
                                    std::uint64_t delay_frames, double energy_j) {
  ack_count_[cluster]++;
  delay_sum_[cluster] += static_cast<double>(delay_frames);
  energy_sum_j_[cluster] += energy_j;
}

double MetricsAccumulator::throughput(std::size_t cluster) const {
  if (frames_ == 0) {
    throw std::invalid_argument("throughput: no measured frames");
  }
  return static_cast<double>(successes_[cluster]) / static_cast<double>(frames_);
}

double MetricsAccumulator::system_throughput() const {
  double g = 0.0;
  for (std::size_t c = 0; c < successes_.size(); ++c) g += throughput(c);
  return g;
}

double MetricsAccumulator::system_throughput_std_error() const {
  if (frames_ < 2) return 0.0;
  const double n = static_cast<double>(frames_);
  const double mean = frame_total_sum_ / n;
  const double var = (frame_total_sumsq_ - n * mean * mean) / (n - 1.0);
  return std::sqrt(std::max(var, 0.0) / n);
}

double MetricsAccumulator::mean_delay(std::size_t cluster) const {
  if (ack_count_[cluster] == 0) return std::numeric_limits<double>::quiet_NaN();
  return delay_sum_[cluster] / static_cast<double>(ack_count_[cluster]);
}

double MetricsAccumulator::mean_energy_mj(std::size_t cluster) const {
  if (ack_count_[cluster] == 0) return std::numeric_limits<double>::quiet_NaN();
  return 1000.0 * energy_sum_j_[cluster] / static_cast<double>(ack_count_[cluster]);
}

MetricsReport finalize(const MetricsAccumulator& acc, std::uint64_t master_seed) {
  MetricsReport r;
  const std::size_t C = acc.clusters();
  r.gamma.resize(C);
  r.delay.resize(C);
  r.energy_mj.resize(C);
  for (std::size_t c = 0; c < C; ++c) {
    r.gamma[c] = acc.frames() ? acc.throughput(c) : 0.0;
    r.delay[c] = acc.mean_delay(c);
    r.energy_mj[c] = acc.mean_energy_mj(c);
  }
  r.gamma_s = 0.0;
  for (const double g : r.gamma) r.gamma_s += g;
  r.jain = jain_fairness(r.gamma);
  r.measured_frames = acc.frames();
  r.master_seed = master_seed;
  r.gamma_s_std_error = acc.system_throughput_std_error();
  return r;
}

}  // namespace scfsim
