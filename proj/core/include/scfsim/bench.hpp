#pragma once

#include <cstdint>
#include <vector>

#include "scfsim/sim.hpp"

namespace scfsim {

// Exhaustive-search configuration for the fixed-policy throughput upper
// bound.  Every grid point is evaluated with substreams derived from the
// same master seed (common random numbers), so comparisons between
// points — and between nested grids — are exact, not just unbiased.
struct BenchmarkGrid {
  std::vector<double> access_values;          // ascending, within [0.1, 1]
  std::vector<std::uint64_t> seed_candidates; // empty → the sim's own candidates
  std::uint64_t eval_frames = 50000;
  bool clairvoyant_seeds = false;  // per-frame collision-minimal seed instead
                                   // of a fixed one (joint grid drops the
                                   // seed dimension)
  std::size_t max_points = 1000000;
  unsigned workers = 1;
};

// Access grid {0.1, 0.1+step, ...} up to 1.0 inclusive.  Values are
// computed by multiplication so grids with nested steps share exact
// floating-point values.
std::vector<double> default_access_grid(double step = 0.05);

struct BenchPoint {
  std::vector<double> access;  // per-cluster access probabilities
  int seed_index = -1;         // index into candidates; -1 when unused
  double throughput = 0.0;     // packets/frame at this point
  double std_error = 0.0;      // Monte-Carlo error of the winning point
};

// Best fixed access-probability tuple under contention-based slot
// selection in every cluster.  Ties break toward the lexicographically
// smallest tuple.
BenchPoint benchmark_best_access(const SimConfig& cfg, const BenchmarkGrid& grid);

// Joint search over access tuples and hash-seed candidates for the
// hashed cluster(s).  With clairvoyant_seeds the seed dimension is
// replaced by per-frame best-seed selection.
BenchPoint benchmark_best_access_and_seed(const SimConfig& cfg,
                                          const BenchmarkGrid& grid);

// Exact expected decoded packets per frame for a tiny saturated network
// (every device always active), by full enumeration of access decisions
// and slot choices, weighting slot outcomes by the detection table's
// marginal means.  Limits: ≤ 4 devices, ≤ 4 slots, 2 clusters.
double exact_small_frame_oracle(const std::vector<int>& device_clusters,
                                const std::vector<double>& access_prob,
                                const std::vector<bool>& hashed_cluster,
                                std::uint32_t slot_count, std::uint64_t seed);

}  // namespace scfsim
