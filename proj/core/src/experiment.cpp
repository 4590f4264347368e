#include "scfsim/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "scfsim/parallel.hpp"

namespace scfsim {
namespace {

Scheme parse_scheme(const std::string& raw) {
  if (raw == "A" || raw == "a") return Scheme::A;
  if (raw == "B" || raw == "b") return Scheme::B;
  if (raw == "both" || raw == "both_hashed" || raw == "B_both" ||
      raw == "B_both_SCF") {
    return Scheme::BothHashed;
  }
  if (raw == "WAC" || raw == "wac") return Scheme::WAC;
  throw ConfigError("field 'sim.scheme': unknown scheme '" + raw +
                    "' (expected A, B, both_hashed, or wac)");
}

RewardKind parse_reward(const std::string& raw) {
  if (raw == "R1" || raw == "r1") return RewardKind::R1;
  if (raw == "R2" || raw == "r2") return RewardKind::R2;
  throw ConfigError("field 'sim.reward': unknown reward '" + raw +
                    "' (expected R1 or R2)");
}

DetectionMode parse_detection(const std::string& raw) {
  if (raw == "physical") return DetectionMode::Physical;
  if (raw == "table") return DetectionMode::Table;
  throw ConfigError("field 'sim.detection': unknown mode '" + raw +
                    "' (expected physical or table)");
}

// "L;N1+N2" (braces optional): slot count plus two cluster sizes.
void apply_network_tuple(const std::string& raw, SimConfig& cfg) {
  std::string s;
  for (const char c : raw) {
    if (c != '{' && c != '}' && c != ' ') s.push_back(c);
  }
  const std::size_t semi = s.find(';');
  const std::size_t plus = s.find('+');
  if (semi == std::string::npos || plus == std::string::npos || plus < semi) {
    throw ConfigError("field 'experiment.network': expected '{L;N1+N2}', got '" +
                      raw + "'");
  }
  try {
    cfg.slot_count = static_cast<std::uint32_t>(std::stoul(s.substr(0, semi)));
    cfg.clusters[0].device_count =
        static_cast<std::uint32_t>(std::stoul(s.substr(semi + 1, plus - semi - 1)));
    cfg.clusters[1].device_count =
        static_cast<std::uint32_t>(std::stoul(s.substr(plus + 1)));
  } catch (const std::exception&) {
    throw ConfigError("field 'experiment.network': expected '{L;N1+N2}', got '" +
                      raw + "'");
  }
}

void metadata_header(std::ostream& out, const char* schema,
                     const ExperimentSpec& spec) {
  char digest[32];
  std::snprintf(digest, sizeof digest, "%016llx",
                static_cast<unsigned long long>(spec_digest(spec.canonical)));
  out << "# scfsim-csv schema=" << schema << " spec_digest=0x" << digest
      << " master_seed=" << spec.base.master_seed << '\n';
}

}  // namespace

std::string format_value(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::A: return "A";
    case Scheme::B: return "B";
    case Scheme::BothHashed: return "both_hashed";
    case Scheme::WAC: return "wac";
  }
  return "?";
}

const char* reward_name(RewardKind r) {
  return r == RewardKind::R1 ? "R1" : "R2";
}

ExperimentSpec experiment_from_config(const KeyValueConfig& cfg) {
  ExperimentSpec spec;
  SimConfig& sim = spec.base;

  if (cfg.has("experiment.network")) {
    apply_network_tuple(cfg.get_string("experiment.network", ""), sim);
  }
  sim.slot_count = cfg.get_u32("sim.slot_count", sim.slot_count);
  sim.clusters[0].device_count =
      cfg.get_u32("clusters.devices_1", sim.clusters[0].device_count);
  sim.clusters[1].device_count =
      cfg.get_u32("clusters.devices_2", sim.clusters[1].device_count);
  sim.clusters[0].center_distance_m =
      cfg.get_double("clusters.distance_1", sim.clusters[0].center_distance_m);
  sim.clusters[1].center_distance_m =
      cfg.get_double("clusters.distance_2", sim.clusters[1].center_distance_m);
  sim.clusters[0].radius_m =
      cfg.get_double("clusters.radius_1", sim.clusters[0].radius_m);
  sim.clusters[1].radius_m =
      cfg.get_double("clusters.radius_2", sim.clusters[1].radius_m);

  sim.lambda = cfg.get_double("sim.lambda", sim.lambda);
  sim.scheme = parse_scheme(cfg.get_string("sim.scheme", "A"));
  sim.reward = parse_reward(cfg.get_string("sim.reward", "R1"));
  sim.update_interval = cfg.get_u32("sim.update_interval", sim.update_interval);
  sim.frames = cfg.get_u64("sim.frames", sim.frames);
  sim.master_seed = cfg.get_u64("sim.master_seed", sim.master_seed);
  sim.detection = parse_detection(cfg.get_string("sim.detection", "table"));
  sim.warmup_fraction = cfg.get_double("sim.warmup_fraction", sim.warmup_fraction);
  sim.lambda_switch_frame =
      cfg.get_u64("sim.lambda_switch_frame", sim.lambda_switch_frame);
  sim.lambda_after = cfg.get_double("sim.lambda_after", sim.lambda_after);

  sim.phy.tx_power_mw = cfg.get_double("phy.tx_power_mw", sim.phy.tx_power_mw);
  sim.phy.sinr_threshold_db =
      cfg.get_double("phy.sinr_threshold_db", sim.phy.sinr_threshold_db);
  sim.phy.shadow_std_db = cfg.get_double("phy.shadow_std_db", sim.phy.shadow_std_db);
  sim.phy.receiver_sensitivity_dbm = cfg.get_double(
      "phy.receiver_sensitivity_dbm", sim.phy.receiver_sensitivity_dbm);
  sim.phy.noise_psd_dbm_hz =
      cfg.get_double("phy.noise_psd_dbm_hz", sim.phy.noise_psd_dbm_hz);
  sim.phy.bandwidth_hz = cfg.get_double("phy.bandwidth_hz", sim.phy.bandwidth_hz);
  sim.phy.antenna_count =
      static_cast<int>(cfg.get_u32("phy.antennas", static_cast<std::uint32_t>(
                                                       sim.phy.antenna_count)));
  sim.phy.bs_height_m = cfg.get_double("phy.bs_height_m", sim.phy.bs_height_m);
  sim.phy.shadow_static_per_device =
      cfg.get_bool("phy.shadow_static", sim.phy.shadow_static_per_device);

  sim.energy.slot_duration_s =
      cfg.get_double("energy.slot_duration_s", sim.energy.slot_duration_s);
  sim.energy.packet_size_bytes =
      cfg.get_double("energy.packet_size_bytes", sim.energy.packet_size_bytes);
  sim.energy.ack_size_bytes =
      cfg.get_double("energy.ack_size_bytes", sim.energy.ack_size_bytes);
  sim.energy.data_rate_bps =
      cfg.get_double("energy.data_rate_bps", sim.energy.data_rate_bps);
  sim.energy.tx_power_w = cfg.get_double("energy.tx_power_w", sim.energy.tx_power_w);
  sim.energy.rx_current_a =
      cfg.get_double("energy.rx_current_a", sim.energy.rx_current_a);
  sim.energy.idle_current_a =
      cfg.get_double("energy.idle_current_a", sim.energy.idle_current_a);
  sim.energy.voltage_v = cfg.get_double("energy.voltage_v", sim.energy.voltage_v);

  sim.hyper.sigma = cfg.get_double("agent.sigma", sim.hyper.sigma);
  sim.hyper.epsilon = cfg.get_double("agent.epsilon", sim.hyper.epsilon);
  sim.hyper.alpha_theta = cfg.get_double("agent.alpha_theta", sim.hyper.alpha_theta);
  sim.hyper.alpha_phi = cfg.get_double("agent.alpha_phi", sim.hyper.alpha_phi);
  sim.hyper.alpha_omega = cfg.get_double("agent.alpha_omega", sim.hyper.alpha_omega);
  sim.hyper.seed_candidates_q = cfg.get_u32(
      "agent.seed_candidates",
      static_cast<std::uint32_t>(sim.hyper.seed_candidates_q));

  spec.lambdas = cfg.get_double_list("experiment.lambdas", spec.lambdas);
  for (const double l : spec.lambdas) {
    if (!(l >= 0.0 && l <= 1.0)) {
      throw ConfigError("field 'experiment.lambdas': value " + std::to_string(l) +
                        " outside [0, 1]");
    }
  }
  spec.replications = cfg.get_u32("experiment.replications", spec.replications);
  if (spec.replications == 0) {
    throw ConfigError("field 'experiment.replications': must be >= 1");
  }
  spec.workers = cfg.get_u32("experiment.workers", spec.workers);
  spec.window = cfg.get_u64("experiment.window", spec.window);

  spec.bench_access_step = cfg.get_double("bench.access_step", spec.bench_access_step);
  spec.bench_eval_frames = cfg.get_u64("bench.eval_frames", spec.bench_eval_frames);
  spec.bench_clairvoyant = cfg.get_bool("bench.clairvoyant", spec.bench_clairvoyant);
  spec.bench_max_points =
      cfg.get_u64("bench.max_points", spec.bench_max_points);

  try {
    sim.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid field ") + e.what());
  }
  spec.canonical = cfg.canonical();
  return spec;
}

std::uint64_t run_master_seed(std::uint64_t master, std::size_t lambda_index,
                              std::uint32_t replication) {
  return substream_seed(master, stream::run,
                        static_cast<std::uint64_t>(lambda_index) * 100000 +
                            replication);
}

std::vector<SweepRow> run_sweep(const ExperimentSpec& spec) {
  const std::size_t tasks = spec.lambdas.size() * spec.replications;
  std::vector<SweepRow> rows(tasks);
  parallel_for(tasks, spec.workers, [&](std::size_t i) {
    const std::size_t li = i / spec.replications;
    const std::uint32_t rep = static_cast<std::uint32_t>(i % spec.replications);
    SimConfig cfg = spec.base;
    cfg.lambda = spec.lambdas[li];
    cfg.master_seed = run_master_seed(spec.base.master_seed, li, rep);
    rows[i].lambda = cfg.lambda;
    rows[i].replication = rep;
    rows[i].report = run_experiment(cfg).report;
  });
  return rows;
}

void write_sweep_csv(std::ostream& out, const ExperimentSpec& spec,
                     const std::vector<SweepRow>& rows) {
  if (spec.base.clusters.size() != 2) {
    throw ConfigError("field 'clusters': the sweep CSV schema is two-cluster");
  }
  metadata_header(out, "simulate", spec);
  out << "lambda,scheme,reward,gamma_s,gamma_1,gamma_2,jain_hat,delay_1,"
         "delay_2,energy_1_mJ,energy_2_mJ,frames,master_seed\n";
  for (const SweepRow& r : rows) {
    out << format_value(r.lambda) << ',' << scheme_name(spec.base.scheme) << ','
        << reward_name(spec.base.reward) << ',' << format_value(r.report.gamma_s)
        << ',' << format_value(r.report.gamma[0]) << ','
        << format_value(r.report.gamma[1]) << ',' << format_value(r.report.jain)
        << ',' << format_value(r.report.delay[0]) << ','
        << format_value(r.report.delay[1]) << ','
        << format_value(r.report.energy_mj[0]) << ','
        << format_value(r.report.energy_mj[1]) << ',' << spec.base.frames << ','
        << r.report.master_seed << '\n';
  }
}

std::vector<BenchRow> run_benchmark_sweep(const ExperimentSpec& spec) {
  BenchmarkGrid grid;
  grid.access_values = default_access_grid(spec.bench_access_step);
  grid.eval_frames = spec.bench_eval_frames;
  grid.clairvoyant_seeds = spec.bench_clairvoyant;
  grid.max_points = spec.bench_max_points;
  grid.workers = spec.workers;

  bool any_hashed = false;
  for (std::size_t c = 0; c < spec.base.clusters.size(); ++c) {
    any_hashed = any_hashed || spec.base.cluster_is_hashed(c);
  }

  std::vector<BenchRow> rows(spec.lambdas.size());
  for (std::size_t li = 0; li < spec.lambdas.size(); ++li) {
    SimConfig cfg = spec.base;
    cfg.lambda = spec.lambdas[li];
    rows[li].lambda = cfg.lambda;
    rows[li].point = any_hashed ? benchmark_best_access_and_seed(cfg, grid)
                                : benchmark_best_access(cfg, grid);
  }
  return rows;
}

void write_benchmark_csv(std::ostream& out, const ExperimentSpec& spec,
                         const std::vector<BenchRow>& rows) {
  if (spec.base.clusters.size() != 2) {
    throw ConfigError("field 'clusters': the benchmark CSV schema is two-cluster");
  }
  metadata_header(out, "benchmark", spec);
  out << "lambda,best_a1,best_a2,best_seed,throughput\n";
  for (const BenchRow& r : rows) {
    out << format_value(r.lambda) << ',' << format_value(r.point.access[0])
        << ',' << format_value(r.point.access[1]) << ',' << r.point.seed_index
        << ',' << format_value(r.point.throughput) << '\n';
  }
}

ConvergenceSeries run_convergence(const ExperimentSpec& spec) {
  if (spec.window == 0 || spec.base.frames < spec.window) {
    throw ConfigError("field 'experiment.window': need frames >= window >= 1");
  }
  const std::size_t n_windows =
      static_cast<std::size_t>(spec.base.frames / spec.window);
  std::vector<std::vector<double>> per_rep(
      spec.replications, std::vector<double>(n_windows, 0.0));

  parallel_for(spec.replications, spec.workers, [&](std::size_t rep) {
    SimConfig cfg = spec.base;
    cfg.master_seed = run_master_seed(spec.base.master_seed, 0,
                                      static_cast<std::uint32_t>(rep));
    std::vector<double>& sums = per_rep[rep];
    run_experiment(cfg, [&](std::uint64_t t, std::uint32_t total) {
      const std::size_t w = static_cast<std::size_t>(t / spec.window);
      if (w < n_windows) sums[w] += total;
    });
  });

  ConvergenceSeries series;
  series.window = spec.window;
  series.throughput.assign(n_windows, 0.0);
  // Sequential merge in replication order keeps the result independent of
  // thread completion order.
  for (const std::vector<double>& sums : per_rep) {
    for (std::size_t w = 0; w < n_windows; ++w) series.throughput[w] += sums[w];
  }
  const double norm =
      1.0 / (static_cast<double>(spec.replications) * static_cast<double>(spec.window));
  for (double& v : series.throughput) v *= norm;
  return series;
}

void write_convergence_csv(std::ostream& out, const ExperimentSpec& spec,
                           const ConvergenceSeries& series) {
  metadata_header(out, "convergence", spec);
  out << "frame,gamma_s\n";
  for (std::size_t w = 0; w < series.throughput.size(); ++w) {
    out << (static_cast<std::uint64_t>(w + 1) * series.window) << ','
        << format_value(series.throughput[w]) << '\n';
  }
}

void write_phy_table_csv(std::ostream& out, const ExperimentSpec& spec,
                         int n_max, std::uint64_t samples) {
  if (samples < 10000) {
    throw ConfigError("field 'samples': detection-table reproduction needs >= 10000");
  }
  if (spec.base.clusters.size() != 2) {
    throw ConfigError("field 'clusters': detection table is two-cluster");
  }
  metadata_header(out, "phy-table", spec);
  out << "n1,n2,cluster,S0,S1,S2,S3\n";
  for (int n1 = 0; n1 <= n_max; ++n1) {
    for (int n2 = 0; n2 <= n_max; ++n2) {
      Rng rng(substream_seed(spec.base.master_seed, stream::detection,
                             static_cast<std::uint64_t>(n1) * 64 +
                                 static_cast<std::uint64_t>(n2)));
      const OutcomeDistribution dist =
          outcome_distribution(n1, n2, spec.base.phy, spec.base.clusters[0],
                               spec.base.clusters[1], samples, rng);
      for (int cluster = 0; cluster < 2; ++cluster) {
        out << n1 << ',' << n2 << ',' << (cluster + 1);
        for (int k = 0; k < 4; ++k) {
          out << ',' << format_value(dist.marginal(cluster, k));
        }
        out << '\n';
      }
    }
  }
}

void write_calibration_csv(std::ostream& out, const ExperimentSpec& spec,
                           const CalibrationResult& result) {
  metadata_header(out, "calibrate", spec);
  out << "bandwidth_hz,decode_prob,selected\n";
  for (const auto& [bw, p] : result.scan) {
    out << format_value(bw) << ',' << format_value(p) << ','
        << (bw == result.phy.bandwidth_hz ? 1 : 0) << '\n';
  }
}

}  // namespace scfsim
