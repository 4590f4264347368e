#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "scfsim/detection_table.hpp"
#include "scfsim/experiment.hpp"
#include "scfsim/svg.hpp"

namespace {

using namespace scfsim;

struct GlobalArgs {
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::uint64_t frames = 0;
  bool frames_set = false;
  unsigned workers = 0;
  bool workers_set = false;
};

ExperimentSpec build_spec(const GlobalArgs& args) {
  KeyValueConfig kv = args.config_path.empty()
                          ? KeyValueConfig{}
                          : KeyValueConfig::parse_file(args.config_path);
  if (args.seed_set) kv.set("sim.master_seed", std::to_string(args.seed));
  if (args.frames_set) kv.set("sim.frames", std::to_string(args.frames));
  if (args.workers_set) kv.set("experiment.workers", std::to_string(args.workers));
  if (const char* env = std::getenv("NOMA_SIM_WORKERS")) {
    kv.set("experiment.workers", env);  // environment wins over the flag
  }
  return experiment_from_config(kv);
}

// Writes through `fn` to the chosen sink: --out path or stdout.
template <typename Fn>
void with_output(const std::string& out_path, Fn&& fn) {
  if (out_path.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file '" + out_path + "'");
  fn(out);
}

std::string svg_sibling_path(const std::string& csv_path) {
  const std::size_t dot = csv_path.find_last_of('.');
  const std::size_t slash = csv_path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return csv_path + ".svg";
  }
  return csv_path.substr(0, dot) + ".svg";
}

int dispatch(const std::string& command, const GlobalArgs& args, int n_max,
             std::uint64_t samples) {
  ExperimentSpec spec = build_spec(args);

  if (command == "simulate") {
    const std::vector<SweepRow> rows = run_sweep(spec);
    with_output(args.out_path,
                [&](std::ostream& out) { write_sweep_csv(out, spec, rows); });
  } else if (command == "benchmark") {
    const std::vector<BenchRow> rows = run_benchmark_sweep(spec);
    with_output(args.out_path,
                [&](std::ostream& out) { write_benchmark_csv(out, spec, rows); });
  } else if (command == "phy-table") {
    with_output(args.out_path, [&](std::ostream& out) {
      write_phy_table_csv(out, spec, n_max, samples);
    });
  } else if (command == "convergence") {
    const ConvergenceSeries series = run_convergence(spec);
    with_output(args.out_path, [&](std::ostream& out) {
      write_convergence_csv(out, spec, series);
    });
    if (!args.out_path.empty()) {
      SvgSeries line;
      line.label = "scheme " + std::string(scheme_name(spec.base.scheme));
      line.color = "#1a6fb5";
      for (std::size_t w = 0; w < series.throughput.size(); ++w) {
        line.points.emplace_back(
            static_cast<double>((w + 1) * series.window), series.throughput[w]);
      }
      const std::string svg_path = svg_sibling_path(args.out_path);
      std::ofstream svg(svg_path, std::ios::binary);
      if (!svg) throw ConfigError("cannot open output file '" + svg_path + "'");
      write_line_chart(svg, "Windowed system throughput", "frame",
                       "packets/frame", {line});
    }
  } else if (command == "calibrate") {
    const CalibrationResult result =
        calibrate_noise(spec.base.phy, spec.base.clusters[0], 0.837, samples,
                        spec.base.master_seed);
    with_output(args.out_path, [&](std::ostream& out) {
      write_calibration_csv(out, spec, result);
    });
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clustered-uplink random-access simulator with a learning base station"};
  app.require_subcommand(1);

  GlobalArgs args;
  int n_max = 3;
  std::uint64_t samples = 100000;

  app.add_option("--config", args.config_path, "Key-value config file");
  app.add_option("--out", args.out_path, "Output CSV path (default: stdout)");
  auto* seed_opt = app.add_option("--seed", args.seed, "Master seed override");
  auto* frames_opt = app.add_option("--frames", args.frames, "Frame-count override");
  auto* workers_opt =
      app.add_option("--workers", args.workers,
                     "Worker threads (env NOMA_SIM_WORKERS overrides)");

  const char* descriptions[][2] = {
      {"simulate", "Run a lambda sweep of full experiments; emit results CSV"},
      {"benchmark", "Exhaustive-search throughput upper bound per lambda"},
      {"phy-table", "Reproduce per-slot decode probabilities as CSV"},
      {"convergence", "Windowed throughput time series (CSV + SVG)"},
      {"calibrate", "Tune noise bandwidth to the decode-probability target"},
  };
  for (const auto& d : descriptions) {
    auto* sub = app.add_subcommand(d[0], d[1]);
    sub->fallthrough();
    if (std::string(d[0]) == "phy-table") {
      sub->add_option("--n-max", n_max, "Max concurrency per cluster (default 3)");
      sub->add_option("--samples", samples, "Monte-Carlo samples per cell");
    }
    if (std::string(d[0]) == "calibrate") {
      sub->add_option("--samples", samples, "Monte-Carlo samples per candidate");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage problems are config errors
  }

  args.seed_set = seed_opt->count() > 0;
  args.frames_set = frames_opt->count() > 0;
  args.workers_set = workers_opt->count() > 0;

  try {
    return dispatch(app.get_subcommands().front()->get_name(), args, n_max,
                    samples);
  } catch (const scfsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const scfsim::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
