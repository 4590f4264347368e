#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "scfsim/metrics.hpp"
#include "scfsim/pg_agent.hpp"
#include "scfsim/phy.hpp"
#include "scfsim/rng.hpp"

namespace scfsim {

// Access-control schemes: A = both clusters contention-based; B = near
// cluster hashed, far cluster contention-based; BothHashed = hashed
// everywhere; WAC = no access control (every active device transmits,
// uniform slot choice, no learning agent).
enum class Scheme { A, B, BothHashed, WAC };

enum class DetectionMode { Physical, Table };

constexpr std::uint64_t kNeverSwitch = std::numeric_limits<std::uint64_t>::max();

struct SimConfig {
  std::uint32_t slot_count = 4;
  std::vector<ClusterGeometry> clusters = {{450.0, 25.0, 8}, {900.0, 25.0, 8}};
  double lambda = 1.0;
  Scheme scheme = Scheme::A;
  RewardKind reward = RewardKind::R1;
  std::uint32_t update_interval = 1;  // frames per agent decision epoch
  std::uint64_t frames = 1000000;
  std::uint64_t master_seed = 1;
  DetectionMode detection = DetectionMode::Table;
  PhyConfig phy;
  EnergyParams energy;
  AgentHyper hyper;
  double warmup_fraction = 0.5;  // metrics start after this fraction of frames
  // Mid-run arrival-rate change (for warm-start / regime-shift studies).
  std::uint64_t lambda_switch_frame = kNeverSwitch;
  double lambda_after = 0.0;

  bool cluster_is_hashed(std::size_t cluster) const;
  std::size_t total_devices() const;
  double lambda_at(std::uint64_t frame) const;
  void validate() const;  // throws std::invalid_argument naming the field
};

// Concrete per-frame broadcast values (seed indices already resolved to
// 64-bit seed values).  `clairvoyant_seed` replaces the fixed seed with
// the per-frame collision-minimal candidate, given full knowledge of the
// frame's transmitting devices.
struct ActionValues {
  std::vector<double> access_prob;
  std::vector<std::uint64_t> seed_value;
  bool clairvoyant_seed = false;
};

struct FrameOutcome {
  std::vector<std::uint32_t> successes;      // per cluster
  std::uint32_t total = 0;                   // sum of successes
  std::vector<std::uint32_t> transmissions;  // per cluster
  // Transmission count per (slot, cluster), flattened slot * C + cluster.
  std::vector<std::uint32_t> slot_cluster_count;
};

// One network instance run frame by frame.  All randomness derives from
// the config's master seed through named substreams, so two Simulations
// with equal configs evolve identically regardless of environment.
//
// Queue bookkeeping holds O(1) state per device: packets are counted,
// not stored, and each packet's arrival frame is recovered at ACK time
// by replaying the device's arrival stream through a lagging cursor.
class Simulation {
 public:
  explicit Simulation(const SimConfig& cfg);

  const FrameOutcome& step(const ActionValues& actions);

  std::uint64_t frame_index() const { return frame_; }
  const SimConfig& config() const { return cfg_; }
  const MetricsAccumulator& metrics() const { return acc_; }
  MetricsReport report() const { return finalize(acc_, cfg_.master_seed); }
  const std::vector<std::uint64_t>& seed_candidates() const {
    return seed_candidates_;
  }

  // Conservation counters (whole run, not warm-up gated).
  std::uint64_t total_arrivals() const { return arrivals_; }
  std::uint64_t total_acked() const { return acked_; }
  std::uint64_t total_queued() const;

 private:
  struct DeviceState {
    std::uint64_t id = 0;
    std::uint32_t cluster = 0;
    double distance_m = 0.0;
    double static_shadow_db = 0.0;
    std::uint64_t pending = 0;
    std::uint64_t acked = 0;
    std::uint64_t head_attempts = 0;
    std::uint64_t head_idle = 0;
    Rng arrival_rng{0};
    Rng mac_rng{0};
    Rng chan_rng{0};
    // Arrival-replay cursor: `replayed` arrivals found in frames
    // [0, replay_frame).  Advancing it recovers the arrival frame of the
    // k-th packet without storing per-packet state.
    Rng replay_rng{0};
    std::uint64_t replay_frame = 0;
    std::uint64_t replayed = 0;
  };

  std::uint64_t arrival_frame_of(DeviceState& d, std::uint64_t k);
  void ack(DeviceState& d);
  double transmit_power_mw(DeviceState& d);

  SimConfig cfg_;
  std::vector<DeviceState> devices_;
  std::vector<std::uint64_t> seed_candidates_;
  Rng detection_rng_{0};
  MetricsAccumulator acc_;
  std::uint64_t warmup_frames_ = 0;
  std::uint64_t frame_ = 0;
  std::uint64_t arrivals_ = 0;
  std::uint64_t acked_ = 0;
  FrameOutcome outcome_;
  // Scratch buffers reused across frames.
  std::vector<std::vector<Signal>> slot_signals_;
  std::vector<std::size_t> transmitters_;
  std::vector<std::uint64_t> hashed_ids_;
  std::vector<std::uint64_t> scratch_seeds_;
};

// Runs a complete experiment: a Simulation driven either by a learning
// agent (schemes A/B/BothHashed) or by the fixed all-transmit policy
// (WAC).  `trace`, when set, receives (frame index, total successes)
// every frame.  `warm_start` continues from a previous agent snapshot
// (parameters and state; fresh actions are sampled from it).
struct ExperimentResult {
  MetricsReport report;
  std::optional<PgAgent> agent;
};

using TraceFn = std::function<void(std::uint64_t, std::uint32_t)>;

ExperimentResult run_experiment(const SimConfig& cfg, const TraceFn& trace = {},
                                const PgAgent* warm_start = nullptr);

// Runs `cfg.frames` frames under a fixed broadcast (no learning).
MetricsReport run_fixed(const SimConfig& cfg, const ActionValues& actions);

}  // namespace scfsim
