#pragma once

#include <cstdint>
#include <vector>

namespace scfsim {

// Radio energy model parameters.  Power terms derive as
// P_rx = rx_current · voltage and P_idle = idle_current · voltage;
// time terms as T_tx = packet_size·8/data_rate, T_rx = ack_size·8/data_rate.
struct EnergyParams {
  double slot_duration_s = 0.020;
  double packet_size_bytes = 128.0;
  double ack_size_bytes = 16.0;
  double data_rate_bps = 60000.0;
  double tx_power_w = 0.200;
  double rx_current_a = 0.035;
  double idle_current_a = 2.7e-6;
  double voltage_v = 3.7;
};

// Total energy (joules) spent delivering one packet that needed
// `transmit_attempts` transmissions and sat deferred at the head of the
// queue for `idle_frames` frames of `slots_per_frame` slots.  The ACK
// receive term is charged once (for the single successful attempt).
double packet_energy_j(const EnergyParams& params, std::uint64_t transmit_attempts,
                       std::uint64_t idle_frames, std::uint32_t slots_per_frame);

// (Σx)² / (C·Σx²), in [1/C, 1]; equals 1 iff all entries are equal.
// The all-zero vector is treated as degenerate equality and returns 1.
double jain_fairness(const std::vector<double>& values);

// Streaming per-run statistics.  Success counts accumulate only within
// the measurement window; delay and energy samples are recorded at ACK
// time for packets ACKed inside the window.
class MetricsAccumulator {
 public:
  explicit MetricsAccumulator(std::size_t clusters);

  void record_frame(const std::vector<std::uint32_t>& successes_per_cluster);
  void record_ack(std::size_t cluster, std::uint64_t delay_frames,
                  double energy_j);

  std::uint64_t frames() const { return frames_; }
  std::uint64_t successes(std::size_t cluster) const { return successes_[cluster]; }
  std::size_t clusters() const { return successes_.size(); }

  // Packets per frame for one cluster, and summed over clusters.
  double throughput(std::size_t cluster) const;
  double system_throughput() const;

  // Per-frame variance of total successes (for Monte-Carlo error bars).
  double system_throughput_std_error() const;

  // Mean frames from packet arrival to ACK, inclusive.  NaN when the
  // cluster delivered nothing.
  double mean_delay(std::size_t cluster) const;

  // Mean delivery energy in millijoules.  NaN when nothing delivered.
  double mean_energy_mj(std::size_t cluster) const;

 private:
  std::vector<std::uint64_t> successes_;
  std::vector<std::uint64_t> ack_count_;
  std::vector<double> delay_sum_;
  std::vector<double> energy_sum_j_;
  std::uint64_t frames_ = 0;
  double frame_total_sum_ = 0.0;
  double frame_total_sumsq_ = 0.0;
};

// Final per-run results in reporting units.
struct MetricsReport {
  std::vector<double> gamma;      // packets/frame per cluster
  double gamma_s = 0.0;           // system packets/frame
  double jain = 1.0;              // fairness of `gamma`
  std::vector<double> delay;      // frames, NaN if absent
  std::vector<double> energy_mj;  // millijoules, NaN if absent
  std::uint64_t measured_frames = 0;
  std::uint64_t master_seed = 0;
  double gamma_s_std_error = 0.0;
};

MetricsReport finalize(const MetricsAccumulator& acc, std::uint64_t master_seed);

}  // namespace scfsim
