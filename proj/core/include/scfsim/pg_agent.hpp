#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "scfsim/rng.hpp"

namespace scfsim {

enum class RewardKind { R1, R2 };

// Actor-critic step sizes and policy shape parameters.
struct AgentHyper {
  double sigma = 0.1;          // log-normal access-policy spread
  double epsilon = 0.5;        // TD discount
  double alpha_theta = 0.001;  // access-policy step
  double alpha_phi = 0.01;     // seed-policy step
  double alpha_omega = 0.001;  // value step
  std::size_t seed_candidates_q = 10;
};

// One broadcast: per-cluster access probability, plus the chosen index
// into the candidate-seed list for clusters running hashed slot
// selection (-1 for contention-based clusters).
struct ActionBundle {
  std::vector<double> access_prob;
  std::vector<int> seed_index;
};

// Base-station learning agent.  State s is the total number of decoded
// packets in the previous frame (n = total devices + 1 states).  Each
// state has: one value entry ω^(s); per cluster an access-policy mean
// θ^(s) (log-normal over transformed probabilities); and per hashed
// cluster a soft-max row φ^(s,·) over the q candidate seeds.
//
// Action sampling order (fixed, and load-bearing for reproducibility):
// for each cluster in index order, draw the access probability (one
// normal, i.e. two raw draws), then — if the cluster is hashed — the
// seed index (one raw draw).
class PgAgent {
 public:
  PgAgent(std::size_t clusters, std::vector<bool> hashed_cluster,
          std::size_t n_states, RewardKind kind, AgentHyper hyper = {});

  // Cold start: parameters all zero, state 0; samples and stores the
  // first action bundle.
  const ActionBundle& begin(Rng& rng);

  // One decision-epoch update: reward from the successes accumulated
  // over the epoch, state transition to the last frame's total, policy
  // and value updates, then fresh actions for the next epoch.
  const ActionBundle& step(const std::vector<std::uint32_t>& epoch_successes,
                           std::uint32_t last_frame_total, Rng& rng);

  // --- individual pieces (exercised directly by tests) ---
  double sample_access_prob(std::size_t cluster, std::size_t s, Rng& rng) const;
  std::size_t sample_seed_index(std::size_t cluster, std::size_t s, Rng& rng) const;
  std::vector<double> seed_distribution(std::size_t cluster, std::size_t s) const;
  double td_error(std::size_t s, std::size_t s_next, double r) const;
  void update_value(std::size_t s, double delta);
  void update_access_policy(std::size_t cluster, std::size_t s, double a,
                            double delta);
  void update_seed_policy(std::size_t cluster, std::size_t s,
                          std::size_t chosen_j, double delta);
  static double reward(RewardKind kind,
                       const std::vector<std::uint32_t>& successes);

  // --- inspection ---
  std::size_t state() const { return s_; }
  std::size_t n_states() const { return n_; }
  std::size_t clusters() const { return clusters_; }
  bool hashed(std::size_t cluster) const { return hashed_[cluster]; }
  const ActionBundle& actions() const { return actions_; }
  double theta(std::size_t cluster, std::size_t s) const;
  double omega(std::size_t s) const;
  double phi(std::size_t cluster, std::size_t s, std::size_t j) const;
  const AgentHyper& hyper() const { return hyper_; }

  // Flat text snapshot (round-trips exactly); format documented in the
  // README.  Used for warm starts.
  void save(std::ostream& out) const;
  static PgAgent load(std::istream& in, RewardKind kind, AgentHyper hyper = {});

 private:
  std::size_t theta_idx(std::size_t c, std::size_t s) const { return c * n_ + s; }
  std::size_t phi_idx(std::size_t c, std::size_t s, std::size_t j) const {
    return (c * n_ + s) * hyper_.seed_candidates_q + j;
  }
  void sample_actions(Rng& rng);

  std::size_t clusters_;
  std::vector<bool> hashed_;
  std::size_t n_;
  RewardKind kind_;
  AgentHyper hyper_;
  std::vector<double> theta_;  // clusters × n
  std::vector<double> phi_;    // clusters × n × q
  std::vector<double> omega_;  // n
  std::size_t s_ = 0;
  ActionBundle actions_;
};

}  // namespace scfsim
