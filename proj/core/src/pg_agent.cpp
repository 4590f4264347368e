#include "scfsim/pg_agent.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace scfsim {

PgAgent::PgAgent(std::size_t clusters, std::vector<bool> hashed_cluster,
                 std::size_t n_states, RewardKind kind, AgentHyper hyper)
    : clusters_(clusters),
      hashed_(std::move(hashed_cluster)),
      n_(n_states),
      kind_(kind),
      hyper_(hyper),
      theta_(clusters * n_states, 0.0),
      phi_(clusters * n_states * hyper.seed_candidates_q, 0.0),
      omega_(n_states, 0.0) {
  if (clusters_ == 0 || n_ == 0 || hashed_.size() != clusters_) {
    throw std::invalid_argument("PgAgent: inconsistent dimensions");
  }
  actions_.access_prob.assign(clusters_, 0.0);
  actions_.seed_index.assign(clusters_, -1);
}

double PgAgent::theta(std::size_t c, std::size_t s) const {
  return theta_[theta_idx(c, s)];
}
double PgAgent::omega(std::size_t s) const { return omega_[s]; }
double PgAgent::phi(std::size_t c, std::size_t s, std::size_t j) const {
  return phi_[phi_idx(c, s, j)];
}

double PgAgent::sample_access_prob(std::size_t cluster, std::size_t s,
                                   Rng& rng) const {
  // log a' ~ Normal(θ^(s), σ²); a = (0.1 + a')/(1 + a').  The exponent is
  // clamped so the transform stays strictly inside (0.1, 1) in floating
  // point; |x| ≤ 35 is far outside any trained parameter range.
  double x = theta_[theta_idx(cluster, s)] + hyper_.sigma * rng.normal();
  x = std::clamp(x, -35.0, 35.0);
  const double ap = std::exp(x);
  return (0.1 + ap) / (1.0 + ap);
}

std::vector<double> PgAgent::seed_distribution(std::size_t cluster,
                                               std::size_t s) const {
  const std::size_t q = hyper_.seed_candidates_q;
  std::vector<double> p(q);
  double maxv = phi_[phi_idx(cluster, s, 0)];
  for (std::size_t j = 1; j < q; ++j) {
    maxv = std::max(maxv, phi_[phi_idx(cluster, s, j)]);
  }
  double norm = 0.0;
  for (std::size_t j = 0; j < q; ++j) {
    p[j] = std::exp(phi_[phi_idx(cluster, s, j)] - maxv);
    norm += p[j];
  }
  for (double& v : p) v /= norm;
  return p;
}

std::size_t PgAgent::sample_seed_index(std::size_t cluster, std::size_t s,
                                       Rng& rng) const {
  const std::vector<double> p = seed_distribution(cluster, s);
  const double u = rng.u01();
  double acc = 0.0;
  for (std::size_t j = 0; j + 1 < p.size(); ++j) {
    acc += p[j];
    if (u < acc) return j;
  }
  return p.size() - 1;
}

double PgAgent::td_error(std::size_t s, std::size_t s_next, double r) const {
  return r + hyper_.epsilon * omega_[s_next] - omega_[s];
}

void PgAgent::update_value(std::size_t s, double delta) {
  omega_[s] += hyper_.alpha_omega * delta;
}

void PgAgent::update_access_policy(std::size_t cluster, std::size_t s, double a,
                                   double delta) {
  if (!(a > 0.1 && a < 1.0)) {
    throw std::invalid_argument(
        "update_access_policy: action outside (0.1, 1) — corrupted record");
  }
  const double log_ap = std::log((a - 0.1) / (1.0 - a));
  const double score =
      (log_ap - theta_[theta_idx(cluster, s)]) / (hyper_.sigma * hyper_.sigma);
  theta_[theta_idx(cluster, s)] += hyper_.alpha_theta * delta * score;
}

void PgAgent::update_seed_policy(std::size_t cluster, std::size_t s,
                                 std::size_t chosen_j, double delta) {
  const std::vector<double> tau = seed_distribution(cluster, s);
  for (std::size_t j = 0; j < tau.size(); ++j) {
    const double indicator = (j == chosen_j) ? 1.0 : 0.0;
    phi_[phi_idx(cluster, s, j)] +=
        hyper_.alpha_phi * delta * (indicator - tau[j]);
  }
}

double PgAgent::reward(RewardKind kind,
                       const std::vector<std::uint32_t>& successes) {
  double sum = 0.0, sumsq = 0.0;
  for (const std::uint32_t s : successes) {
    sum += s;
    sumsq += static_cast<double>(s) * s;
  }
  if (kind == RewardKind::R1) return sum;
  if (sumsq == 0.0) return 0.0;  // all-idle epoch carries no fairness signal
  const double jain =
      (sum * sum) / (static_cast<double>(successes.size()) * sumsq);
  return sum * jain;
}

void PgAgent::sample_actions(Rng& rng) {
  for (std::size_t c = 0; c < clusters_; ++c) {
    actions_.access_prob[c] = sample_access_prob(c, s_, rng);
    actions_.seed_index[c] =
        hashed_[c] ? static_cast<int>(sample_seed_index(c, s_, rng)) : -1;
  }
}

const ActionBundle& PgAgent::begin(Rng& rng) {
  sample_actions(rng);
  return actions_;
}

const ActionBundle& PgAgent::step(
    const std::vector<std::uint32_t>& epoch_successes,
    std::uint32_t last_frame_total, Rng& rng) {
  const double r = reward(kind_, epoch_successes);
  const std::size_t s_next =
      std::min<std::size_t>(last_frame_total, n_ - 1);
  const double delta = td_error(s_, s_next, r);
  for (std::size_t c = 0; c < clusters_; ++c) {
    update_access_policy(c, s_, actions_.access_prob[c], delta);
    if (hashed_[c]) {
      update_seed_policy(c, s_, static_cast<std::size_t>(actions_.seed_index[c]),
                         delta);
    }
  }
  update_value(s_, delta);
  s_ = s_next;
  sample_actions(rng);
  return actions_;
}

void PgAgent::save(std::ostream& out) const {
  char buf[64];
  out << "policy 1 " << clusters_ << ' ' << n_ << ' '
      << hyper_.seed_candidates_q << ' ' << s_ << '\n';
  for (std::size_t c = 0; c < clusters_; ++c) {
    out << "hashed " << c << ' ' << (hashed_[c] ? 1 : 0) << '\n';
  }
  for (std::size_t s = 0; s < n_; ++s) {
    std::snprintf(buf, sizeof buf, "%.17g", omega_[s]);
    out << "omega " << s << ' ' << buf << '\n';
  }
  for (std::size_t c = 0; c < clusters_; ++c) {
    for (std::size_t s = 0; s < n_; ++s) {
      std::snprintf(buf, sizeof buf, "%.17g", theta_[theta_idx(c, s)]);
      out << "theta " << c << ' ' << s << ' ' << buf << '\n';
      for (std::size_t j = 0; j < hyper_.seed_candidates_q; ++j) {
        std::snprintf(buf, sizeof buf, "%.17g", phi_[phi_idx(c, s, j)]);
        out << "phi " << c << ' ' << s << ' ' << j << ' ' << buf << '\n';
      }
    }
  }
}

PgAgent PgAgent::load(std::istream& in, RewardKind kind, AgentHyper hyper) {
  std::string tag;
  int version = 0;
  std::size_t clusters = 0, n = 0, q = 0, state = 0;
  if (!(in >> tag >> version >> clusters >> n >> q >> state) ||
      tag != "policy" || version != 1) {
    throw std::runtime_error("policy snapshot: bad header");
  }
  hyper.seed_candidates_q = q;
  std::vector<bool> hashed(clusters, false);
  for (std::size_t c = 0; c < clusters; ++c) {
    std::size_t idx = 0;
    int flag = 0;
    if (!(in >> tag >> idx >> flag) || tag != "hashed" || idx != c) {
      throw std::runtime_error("policy snapshot: bad hashed flags");
    }
    hashed[c] = (flag != 0);
  }
  PgAgent agent(clusters, hashed, n, kind, hyper);
  agent.s_ = state;
  std::size_t a = 0, b = 0, c3 = 0;
  double v = 0.0;
  while (in >> tag) {
    if (tag == "omega") {
      if (!(in >> a >> v) || a >= n) throw std::runtime_error("bad omega row");
      agent.omega_[a] = v;
    } else if (tag == "theta") {
      if (!(in >> a >> b >> v) || a >= clusters || b >= n) {
        throw std::runtime_error("bad theta row");
      }
      agent.theta_[agent.theta_idx(a, b)] = v;
    } else if (tag == "phi") {
      if (!(in >> a >> b >> c3 >> v) || a >= clusters || b >= n || c3 >= q) {
        throw std::runtime_error("bad phi row");
      }
      agent.phi_[agent.phi_idx(a, b, c3)] = v;
    } else {
      throw std::runtime_error("policy snapshot: unknown tag " + tag);
    }
  }
  return agent;
}

}  // namespace scfsim
