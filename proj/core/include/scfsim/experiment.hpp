#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "scfsim/bench.hpp"
#include "scfsim/calibrate.hpp"
#include "scfsim/config.hpp"
#include "scfsim/sim.hpp"

namespace scfsim {

// A full campaign description: the base network plus sweep/replication
// structure and benchmark settings.
struct ExperimentSpec {
  SimConfig base;
  std::vector<double> lambdas = {0.1, 0.2, 0.3, 0.4, 0.5,
                                 0.6, 0.7, 0.8, 0.9, 1.0};
  std::uint32_t replications = 1;
  unsigned workers = 1;
  std::uint64_t window = 10000;  // convergence averaging window (frames)
  double bench_access_step = 0.05;
  std::uint64_t bench_eval_frames = 50000;
  bool bench_clairvoyant = false;
  std::size_t bench_max_points = 1000000;
  std::string canonical;  // canonical config text, hashed into CSV metadata
};

// Builds a spec from parsed key-value config (defaults fill gaps); throws
// ConfigError naming any invalid field.
ExperimentSpec experiment_from_config(const KeyValueConfig& cfg);

// Per-run master seed, derived so each CSV row is independently
// reproducible from the values it records.
std::uint64_t run_master_seed(std::uint64_t master, std::size_t lambda_index,
                              std::uint32_t replication);

// --- λ sweep of full experiments ---
struct SweepRow {
  double lambda = 0.0;
  std::uint32_t replication = 0;
  MetricsReport report;
};

std::vector<SweepRow> run_sweep(const ExperimentSpec& spec);
void write_sweep_csv(std::ostream& out, const ExperimentSpec& spec,
                     const std::vector<SweepRow>& rows);

// --- λ sweep of the exhaustive-search upper bound ---
struct BenchRow {
  double lambda = 0.0;
  BenchPoint point;
};

std::vector<BenchRow> run_benchmark_sweep(const ExperimentSpec& spec);
void write_benchmark_csv(std::ostream& out, const ExperimentSpec& spec,
                         const std::vector<BenchRow>& rows);

// --- windowed convergence series ---
struct ConvergenceSeries {
  std::uint64_t window = 0;
  std::vector<double> throughput;  // mean packets/frame per window,
                                   // averaged over replications
};

ConvergenceSeries run_convergence(const ExperimentSpec& spec);
void write_convergence_csv(std::ostream& out, const ExperimentSpec& spec,
                           const ConvergenceSeries& series);

// --- detection-probability reproduction and calibration reports ---
void write_phy_table_csv(std::ostream& out, const ExperimentSpec& spec,
                         int n_max, std::uint64_t samples);
void write_calibration_csv(std::ostream& out, const ExperimentSpec& spec,
                           const CalibrationResult& result);

// %.6g with NaN rendered as an empty field (absent measurement).
std::string format_value(double v);

const char* scheme_name(Scheme s);
const char* reward_name(RewardKind r);

}  // namespace scfsim
