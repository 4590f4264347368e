#include "scfsim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "scfsim/detection_table.hpp"
#include "scfsim/slot_hash.hpp"

namespace scfsim {

bool SimConfig::cluster_is_hashed(std::size_t cluster) const {
  switch (scheme) {
    case Scheme::A:
    case Scheme::WAC:
      return false;
    case Scheme::B:
      return cluster == 0;
    case Scheme::BothHashed:
      return true;
  }
  return false;
}

std::size_t SimConfig::total_devices() const {
  std::size_t n = 0;
  for (const ClusterGeometry& g : clusters) n += g.device_count;
  return n;
}

double SimConfig::lambda_at(std::uint64_t frame) const {
  return frame < lambda_switch_frame ? lambda : lambda_after;
}

void SimConfig::validate() const {
  if (slot_count == 0) throw std::invalid_argument("slot_count: must be >= 1");
  if (clusters.empty()) throw std::invalid_argument("clusters: must be non-empty");
  for (const ClusterGeometry& g : clusters) {
    if (g.device_count == 0) {
      throw std::invalid_argument("clusters: device_count must be >= 1");
    }
    if (!(g.center_distance_m > g.radius_m) || g.radius_m < 0.0) {
      throw std::invalid_argument(
          "clusters: require center_distance > radius >= 0");
    }
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("lambda: must be in [0, 1]");
  }
  if (lambda_switch_frame != kNeverSwitch &&
      !(lambda_after >= 0.0 && lambda_after <= 1.0)) {
    throw std::invalid_argument("lambda_after: must be in [0, 1]");
  }
  if (frames == 0) throw std::invalid_argument("frames: must be >= 1");
  if (update_interval == 0) {
    throw std::invalid_argument("update_interval: must be >= 1");
  }
  if (detection == DetectionMode::Table && clusters.size() != 2) {
    throw std::invalid_argument("detection: table mode requires exactly 2 clusters");
  }
  if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0)) {
    throw std::invalid_argument("warmup_fraction: must be in [0, 1)");
  }
  if (!(phy.tx_power_mw > 0.0)) throw std::invalid_argument("tx_power: must be > 0");
  if (!(phy.bandwidth_hz > 0.0)) throw std::invalid_argument("bandwidth: must be > 0");
  if (phy.antenna_count < 1) throw std::invalid_argument("antennas: must be >= 1");
  if (!std::isfinite(phy.sinr_threshold_db)) {
    throw std::invalid_argument("sinr_threshold: must be finite");
  }
}

Simulation::Simulation(const SimConfig& cfg)
    : cfg_(cfg),
      seed_candidates_(candidate_seeds(cfg.hyper.seed_candidates_q, cfg.master_seed)),
      detection_rng_(substream_seed(cfg.master_seed, stream::detection, 0)),
      acc_(cfg.clusters.size()) {
  cfg_.validate();
  warmup_frames_ = static_cast<std::uint64_t>(
      cfg_.warmup_fraction * static_cast<double>(cfg_.frames));

  const std::size_t n = cfg_.total_devices();
  devices_.reserve(n);
  std::uint64_t id = 0;
  for (std::uint32_t c = 0; c < cfg_.clusters.size(); ++c) {
    const ClusterGeometry& g = cfg_.clusters[c];
    for (std::uint32_t k = 0; k < g.device_count; ++k, ++id) {
      DeviceState d;
      d.id = id;
      d.cluster = c;
      Rng place(substream_seed(cfg_.master_seed, stream::placement, id));
      const double r = g.radius_m * std::sqrt(place.u01());
      const double ang = 6.283185307179586476925286766559 * place.u01();
      d.distance_m = device_distance_m(g, r * std::cos(ang), r * std::sin(ang),
                                       cfg_.phy.bs_height_m);
      d.static_shadow_db = cfg_.phy.shadow_std_db * place.normal();
      const std::uint64_t arrival_seed =
          substream_seed(cfg_.master_seed, stream::arrival, id);
      d.arrival_rng = Rng(arrival_seed);
      d.replay_rng = Rng(arrival_seed);
      d.mac_rng = Rng(substream_seed(cfg_.master_seed, stream::mac, id));
      d.chan_rng = Rng(substream_seed(cfg_.master_seed, stream::channel, id));
      devices_.push_back(d);
    }
  }
  outcome_.successes.assign(cfg_.clusters.size(), 0);
  outcome_.transmissions.assign(cfg_.clusters.size(), 0);
  outcome_.slot_cluster_count.assign(
      std::size_t{cfg_.slot_count} * cfg_.clusters.size(), 0);
  slot_signals_.resize(cfg_.slot_count);
}

std::uint64_t Simulation::total_queued() const {
  std::uint64_t q = 0;
  for (const DeviceState& d : devices_) q += d.pending;
  return q;
}

std::uint64_t Simulation::arrival_frame_of(DeviceState& d, std::uint64_t k) {
  // The k-th arrival exists in [0, frame_] whenever it is queued, so this
  // scan terminates.  Amortized O(1) per frame per device over a run.
  while (d.replayed < k) {
    if (d.replay_rng.u01() < cfg_.lambda_at(d.replay_frame)) d.replayed++;
    d.replay_frame++;
  }
  return d.replay_frame - 1;
}

void Simulation::ack(DeviceState& d) {
  const std::uint64_t arrival = arrival_frame_of(d, d.acked + 1);
  if (frame_ >= warmup_frames_) {
    const std::uint64_t delay = frame_ - arrival + 1;
    const double energy =
        packet_energy_j(cfg_.energy, d.head_attempts, d.head_idle, cfg_.slot_count);
    acc_.record_ack(d.cluster, delay, energy);
  }
  d.acked++;
  d.pending--;
  d.head_attempts = 0;
  d.head_idle = 0;
  acked_++;
  outcome_.successes[d.cluster]++;
}

double Simulation::transmit_power_mw(DeviceState& d) {
  const double shadow_db = cfg_.phy.shadow_static_per_device
                               ? d.static_shadow_db
                               : cfg_.phy.shadow_std_db * d.chan_rng.normal();
  const double fading = sample_fading_gain(cfg_.phy, d.chan_rng);
  return received_power_mw(cfg_.phy, d.distance_m, shadow_db, fading);
}

const FrameOutcome& Simulation::step(const ActionValues& actions) {
  std::fill(outcome_.successes.begin(), outcome_.successes.end(), 0u);
  std::fill(outcome_.transmissions.begin(), outcome_.transmissions.end(), 0u);
  std::fill(outcome_.slot_cluster_count.begin(),
            outcome_.slot_cluster_count.end(), 0u);
  outcome_.total = 0;
  const double lam = cfg_.lambda_at(frame_);

  // Arrivals: exactly one draw per device per frame keeps the arrival
  // stream in lock-step with its replay cursor.
  for (DeviceState& d : devices_) {
    if (d.arrival_rng.u01() < lam) {
      d.pending++;
      arrivals_++;
      if (d.pending == 1) {
        d.head_attempts = 0;
        d.head_idle = 0;
      }
    }
  }

  // Access decisions: active devices transmit iff their uniform draw
  // falls at or below the cluster's access probability.
  transmitters_.clear();
  for (std::size_t i = 0; i < devices_.size(); ++i) {
    DeviceState& d = devices_[i];
    if (d.pending == 0) continue;
    const double alpha = d.mac_rng.u01();
    if (alpha <= actions.access_prob[d.cluster]) {
      transmitters_.push_back(i);
    } else {
      d.head_idle++;
    }
  }

  // Seed resolution, optionally clairvoyant (collision-minimal candidate
  // for this frame's transmitter set).
  const std::vector<std::uint64_t>* seeds = &actions.seed_value;
  if (actions.clairvoyant_seed) {
    scratch_seeds_ = actions.seed_value;
    for (std::size_t c = 0; c < cfg_.clusters.size(); ++c) {
      if (!cfg_.cluster_is_hashed(c)) continue;
      hashed_ids_.clear();
      for (const std::size_t i : transmitters_) {
        if (devices_[i].cluster == c) hashed_ids_.push_back(devices_[i].id);
      }
      std::size_t best = collision_count(seed_candidates_[0], hashed_ids_,
                                         cfg_.slot_count);
      std::uint64_t best_seed = seed_candidates_[0];
      for (std::size_t j = 1; j < seed_candidates_.size(); ++j) {
        const std::size_t col =
            collision_count(seed_candidates_[j], hashed_ids_, cfg_.slot_count);
        if (col < best) {
          best = col;
          best_seed = seed_candidates_[j];
        }
      }
      scratch_seeds_[c] = best_seed;
    }
    seeds = &scratch_seeds_;
  }

  // Slot selection (and, in physical mode, link-budget sampling) in
  // device-index order for reproducibility.
  for (auto& sl : slot_signals_) sl.clear();
  for (const std::size_t i : transmitters_) {
    DeviceState& d = devices_[i];
    const std::uint32_t slot =
        cfg_.cluster_is_hashed(d.cluster)
            ? hash_slot(d.id, (*seeds)[d.cluster], cfg_.slot_count)
            : static_cast<std::uint32_t>(d.mac_rng.below(cfg_.slot_count));
    d.head_attempts++;
    const double power =
        cfg_.detection == DetectionMode::Physical ? transmit_power_mw(d) : 0.0;
    slot_signals_[slot].push_back({d.id, static_cast<int>(d.cluster), power});
    outcome_.transmissions[d.cluster]++;
    outcome_.slot_cluster_count[std::size_t{slot} * cfg_.clusters.size() +
                                d.cluster]++;
  }

  // Detection per slot.
  for (std::uint32_t slot = 0; slot < cfg_.slot_count; ++slot) {
    auto& sig = slot_signals_[slot];
    if (sig.empty()) continue;
    if (cfg_.detection == DetectionMode::Physical) {
      const DetectionResult det = sic_detect(sig, cfg_.phy);
      for (const Signal& s : det.decoded) ack(devices_[s.device_id]);
    } else {
      int n[2] = {0, 0};
      for (const Signal& s : sig) n[s.cluster]++;
      DetectionTable::check_concurrency(n[0], n[1]);
      for (int c = 0; c < 2; ++c) {
        if (n[c] == 0) continue;
        const int u = DetectionTable::sample(n[0], n[1], c, detection_rng_);
        if (u == 0) continue;
        // Choose which u of the cluster's transmissions succeed,
        // uniformly without replacement.
        hashed_ids_.clear();
        for (const Signal& s : sig) {
          if (s.cluster == c) hashed_ids_.push_back(s.device_id);
        }
        for (int k = 0; k < u; ++k) {
          const std::uint64_t pick =
              k + detection_rng_.below(hashed_ids_.size() - k);
          std::swap(hashed_ids_[k], hashed_ids_[pick]);
          ack(devices_[hashed_ids_[k]]);
        }
      }
    }
  }

  for (const std::uint32_t s : outcome_.successes) outcome_.total += s;
  if (frame_ >= warmup_frames_) acc_.record_frame(outcome_.successes);
  frame_++;
  return outcome_;
}

namespace {

void resolve_actions(const SimConfig& cfg, const ActionBundle& bundle,
                     const std::vector<std::uint64_t>& candidates,
                     ActionValues& av) {
  av.access_prob = bundle.access_prob;
  av.seed_value.assign(cfg.clusters.size(), 0);
  for (std::size_t c = 0; c < cfg.clusters.size(); ++c) {
    if (cfg.cluster_is_hashed(c)) {
      av.seed_value[c] = candidates[static_cast<std::size_t>(bundle.seed_index[c])];
    }
  }
}

}  // namespace

ExperimentResult run_experiment(const SimConfig& cfg, const TraceFn& trace,
                                const PgAgent* warm_start) {
  cfg.validate();
  Simulation sim(cfg);

  if (cfg.scheme == Scheme::WAC) {
    ActionValues av;
    av.access_prob.assign(cfg.clusters.size(), 1.0);
    av.seed_value.assign(cfg.clusters.size(), 0);
    for (std::uint64_t t = 0; t < cfg.frames; ++t) {
      const FrameOutcome& out = sim.step(av);
      if (trace) trace(t, out.total);
    }
    return {sim.report(), std::nullopt};
  }

  std::vector<bool> hashed(cfg.clusters.size());
  for (std::size_t c = 0; c < cfg.clusters.size(); ++c) {
    hashed[c] = cfg.cluster_is_hashed(c);
  }
  PgAgent agent = warm_start
                      ? *warm_start
                      : PgAgent(cfg.clusters.size(), hashed,
                                cfg.total_devices() + 1, cfg.reward, cfg.hyper);
  Rng agent_rng(substream_seed(cfg.master_seed, stream::agent, 0));
  ActionValues av;
  resolve_actions(cfg, agent.begin(agent_rng), sim.seed_candidates(), av);

  std::vector<std::uint32_t> epoch(cfg.clusters.size(), 0);
  for (std::uint64_t t = 0; t < cfg.frames; ++t) {
    const FrameOutcome& out = sim.step(av);
    for (std::size_t c = 0; c < epoch.size(); ++c) epoch[c] += out.successes[c];
    if (trace) trace(t, out.total);
    if ((t + 1) % cfg.update_interval == 0) {
      resolve_actions(cfg, agent.step(epoch, out.total, agent_rng),
                      sim.seed_candidates(), av);
      std::fill(epoch.begin(), epoch.end(), 0u);
    }
  }
  return {sim.report(), std::move(agent)};
}

MetricsReport run_fixed(const SimConfig& cfg, const ActionValues& actions) {
  cfg.validate();
  Simulation sim(cfg);
  for (std::uint64_t t = 0; t < cfg.frames; ++t) sim.step(actions);
  return sim.report();
}

}  // namespace scfsim
