#include "scfsim/bench.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "scfsim/detection_table.hpp"
#include "scfsim/parallel.hpp"
#include "scfsim/slot_hash.hpp"

namespace scfsim {

std::vector<double> default_access_grid(double step) {
  if (!(step > 0.0 && step <= 0.9)) {
    throw std::invalid_argument("access grid step must be in (0, 0.9]");
  }
  std::vector<double> values;
  const int k_max = static_cast<int>(std::floor(0.9 / step + 1e-9));
  for (int k = 0; k <= k_max; ++k) values.push_back(0.1 + k * step);
  if (values.back() < 1.0 - 1e-9) values.push_back(1.0);
  return values;
}

namespace {

struct PointEval {
  double throughput = 0.0;
  double std_error = 0.0;
};

PointEval eval_point(const SimConfig& base, const ActionValues& av,
                     std::uint64_t eval_frames) {
  SimConfig cfg = base;
  cfg.frames = eval_frames;
  Simulation sim(cfg);
  for (std::uint64_t t = 0; t < cfg.frames; ++t) sim.step(av);
  PointEval pe;
  pe.throughput = sim.metrics().system_throughput();
  pe.std_error = sim.metrics().system_throughput_std_error();
  return pe;
}

// Enumerates access tuples in lexicographic order; `seed_count` of 0
// means no seed dimension.  The argmax keeps the first (lexicographically
// smallest) maximizer.
BenchPoint grid_search(const SimConfig& cfg, const BenchmarkGrid& grid,
                       std::size_t seed_count,
                       const std::vector<std::uint64_t>& candidates) {
  if (grid.access_values.empty() || grid.eval_frames == 0) {
    throw std::invalid_argument("benchmark grid must be non-empty");
  }
  const std::size_t C = cfg.clusters.size();
  std::size_t tuples = 1;
  for (std::size_t c = 0; c < C; ++c) tuples *= grid.access_values.size();
  const std::size_t points = tuples * (seed_count ? seed_count : 1);
  if (points > grid.max_points) {
    throw std::invalid_argument(
        "benchmark grid has " + std::to_string(points) +
        " points, exceeding the cap of " + std::to_string(grid.max_points) +
        "; raise max_points to at least " + std::to_string(points) +
        " or coarsen the grid");
  }

  std::vector<PointEval> evals(points);
  parallel_for(points, grid.workers, [&](std::size_t p) {
    ActionValues av;
    av.access_prob.resize(C);
    std::size_t rest = p;
    const std::size_t seed_idx = seed_count ? rest % seed_count : 0;
    if (seed_count) rest /= seed_count;
    // Decode in little-endian digit order, last cluster fastest, so that
    // ascending p is lexicographic in (a_1..a_C, seed).
    for (std::size_t c = C; c-- > 0;) {
      av.access_prob[c] = grid.access_values[rest % grid.access_values.size()];
      rest /= grid.access_values.size();
    }
    av.seed_value.assign(C, 0);
    if (seed_count) {
      for (std::size_t c = 0; c < C; ++c) {
        if (cfg.cluster_is_hashed(c)) av.seed_value[c] = candidates[seed_idx];
      }
    }
    av.clairvoyant_seed = grid.clairvoyant_seeds;
    evals[p] = eval_point(cfg, av, grid.eval_frames);
  });

  // Recover lexicographic order over (a_1..a_C, seed): p iterates seed
  // fastest, so re-rank: lexicographic tuple order is p with seed as the
  // least significant digit — which matches ascending p exactly.
  std::size_t best = 0;
  for (std::size_t p = 1; p < points; ++p) {
    if (evals[p].throughput > evals[best].throughput) best = p;
  }

  BenchPoint result;
  result.access.resize(C);
  std::size_t rest = best;
  const std::size_t seed_idx = seed_count ? rest % seed_count : 0;
  if (seed_count) rest /= seed_count;
  for (std::size_t c = C; c-- > 0;) {
    result.access[c] = grid.access_values[rest % grid.access_values.size()];
    rest /= grid.access_values.size();
  }
  result.seed_index = seed_count ? static_cast<int>(seed_idx) : -1;
  result.throughput = evals[best].throughput;
  result.std_error = evals[best].std_error;
  return result;
}

}  // namespace

BenchPoint benchmark_best_access(const SimConfig& cfg, const BenchmarkGrid& grid) {
  return grid_search(cfg, grid, 0, {});
}

BenchPoint benchmark_best_access_and_seed(const SimConfig& cfg,
                                          const BenchmarkGrid& grid) {
  bool any_hashed = false;
  for (std::size_t c = 0; c < cfg.clusters.size(); ++c) {
    any_hashed = any_hashed || cfg.cluster_is_hashed(c);
  }
  if (!any_hashed) {
    throw std::invalid_argument(
        "seed search requires a scheme with a hashed cluster");
  }
  if (grid.clairvoyant_seeds) return grid_search(cfg, grid, 0, {});
  const std::vector<std::uint64_t> candidates =
      grid.seed_candidates.empty()
          ? candidate_seeds(cfg.hyper.seed_candidates_q, cfg.master_seed)
          : grid.seed_candidates;
  return grid_search(cfg, grid, candidates.size(), candidates);
}

double exact_small_frame_oracle(const std::vector<int>& device_clusters,
                                const std::vector<double>& access_prob,
                                const std::vector<bool>& hashed_cluster,
                                std::uint32_t slot_count, std::uint64_t seed) {
  const std::size_t n = device_clusters.size();
  if (n > 4 || slot_count > 4 || slot_count == 0) {
    throw std::invalid_argument(
        "exact oracle handles at most 4 devices and 4 slots");
  }
  for (const int c : device_clusters) {
    if (c < 0 || c > 1) {
      throw std::invalid_argument("exact oracle requires clusters 0 and 1");
    }
  }

  // Per device: option 0 = defer, option 1+s = transmit in slot s.  A
  // hashed device's slot is pinned by the hash, so only two options
  // carry probability mass.
  std::vector<std::uint32_t> fixed_slot(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (hashed_cluster[static_cast<std::size_t>(device_clusters[i])]) {
      fixed_slot[i] = hash_slot(i, seed, slot_count);
    }
  }

  double expected = 0.0;
  std::vector<std::uint32_t> option(n, 0);
  while (true) {
    double prob = 1.0;
    int n1[4] = {0, 0, 0, 0};
    int n2[4] = {0, 0, 0, 0};
    bool feasible = true;
    for (std::size_t i = 0; i < n && prob > 0.0; ++i) {
      const int cluster = device_clusters[i];
      const double a = access_prob[static_cast<std::size_t>(cluster)];
      const bool hashed = hashed_cluster[static_cast<std::size_t>(cluster)];
      if (option[i] == 0) {
        prob *= 1.0 - a;
      } else {
        const std::uint32_t slot = option[i] - 1;
        if (hashed) {
          if (slot != fixed_slot[i]) {
            feasible = false;
            break;
          }
          prob *= a;
        } else {
          prob *= a / static_cast<double>(slot_count);
        }
        (cluster == 0 ? n1 : n2)[slot]++;
      }
    }
    if (feasible && prob > 0.0) {
      double successes = 0.0;
      for (std::uint32_t s = 0; s < slot_count; ++s) {
        DetectionTable::check_concurrency(n1[s], n2[s]);
        if (n1[s]) successes += DetectionTable::mean(n1[s], n2[s], 0);
        if (n2[s]) successes += DetectionTable::mean(n1[s], n2[s], 1);
      }
      expected += prob * successes;
    }
    // Odometer over option vectors.
    std::size_t i = 0;
    for (; i < n; ++i) {
      if (++option[i] <= slot_count) break;
      option[i] = 0;
    }
    if (i == n) break;
  }
  return expected;
}

}  // namespace scfsim
