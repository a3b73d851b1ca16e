// Command-line front end: run samplers, emit the quadrature reference
// posterior, and compute metric series from trace files.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "resgld/config.hpp"
#include "resgld/diagnostics.hpp"
#include "resgld/errors.hpp"
#include "resgld/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitIo = 4;

resgld::RunConfig load_config(const std::string& preset_name, const std::string& config_path,
                              bool seed_set, std::uint64_t seed) {
  resgld::RunConfig cfg;
  if (!preset_name.empty()) cfg = resgld::preset(preset_name);
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw resgld::io_error("cannot open config file: " + config_path);
    // file keys override the preset, line by line
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream probe(line);
      std::string rest;
      if (!(probe >> rest)) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw resgld::config_error("line " + std::to_string(lineno) + ": expected 'key = value'");
      auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
      };
      try {
        resgld::set_config_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
      } catch (const resgld::config_error& e) {
        throw resgld::config_error("line " + std::to_string(lineno) + ": " + e.what());
      }
    }
  }
  resgld::apply_env_overrides(cfg);
  if (seed_set) cfg.master_seed = seed;
  cfg.validate();
  return cfg;
}

int cmd_run(const std::string& preset_name, const std::string& config_path, bool seed_set,
            std::uint64_t seed, const std::string& out_dir) {
  resgld::RunConfig cfg = load_config(preset_name, config_path, seed_set, seed);
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    cfg.trace_path = out_dir + "/trace.csv";
  }
  const resgld::RunResult res = resgld::run(cfg);

  if (!out_dir.empty()) {
    std::ofstream samples(out_dir + "/samples.csv");
    if (!samples) throw resgld::io_error("cannot write samples: " + out_dir);
    samples << "theta\n";
    char buf[40];
    for (const double v : res.samples.values) {
      std::snprintf(buf, sizeof buf, "%.17g\n", v);
      samples << buf;
    }
    std::ofstream summary(out_dir + "/summary.txt");
    if (!summary) throw resgld::io_error("cannot write summary: " + out_dir);
    summary << "steps = " << res.summary.steps << "\n"
            << "sample_count = " << res.summary.sample_count << "\n"
            << "swap_attempts = " << res.summary.swap_attempts << "\n"
            << "accepted_swaps = " << res.summary.accepted_swaps << "\n"
            << "refresh_count = " << res.summary.refresh_count << "\n"
            << "overflow_events = " << res.summary.overflow_events << "\n"
            << "final_theta_low = " << res.summary.final_theta_low << "\n"
            << "final_theta_high = " << res.summary.final_theta_high << "\n"
            << "final_sigma2 = " << res.summary.final_sigma2 << "\n"
            << "mean_sigma2_second_half = " << res.summary.mean_sigma2_second_half << "\n";
  }
  std::cout << "sampler=" << resgld::to_string(cfg.sampler) << " steps=" << res.summary.steps
            << " samples=" << res.summary.sample_count
            << " accepted_swaps=" << res.summary.accepted_swaps
            << " sigma2=" << res.summary.final_sigma2 << "\n";
  return kExitOk;
}

int cmd_reference(const std::string& preset_name, const std::string& config_path,
                  const std::string& out_path) {
  const resgld::RunConfig cfg = load_config(preset_name, config_path, false, 0);
  const resgld::MixturePosterior model = resgld::build_model(cfg);
  const resgld::ReferencePosterior ref =
      resgld::build_reference(model, cfg.grid_lo, cfg.grid_hi, cfg.grid_n);

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw resgld::io_error("cannot write reference: " + out_path);
    out = &file;
  }
  (*out) << "theta,log_density,cdf\n";
  char buf[128];
  for (std::size_t i = 0; i < ref.grid.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", ref.grid[i], ref.log_density[i],
                  ref.cdf[i]);
    (*out) << buf;
  }
  return kExitOk;
}

struct TraceData {
  std::vector<long> steps;
  std::vector<double> theta1;
};

TraceData read_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw resgld::io_error("cannot open trace: " + path);
  std::string line;
  if (!std::getline(in, line)) throw resgld::io_error("empty trace: " + path);
  TraceData t;
  while (std::getline(in, line)) {
    long step = 0;
    double th1 = 0.0;
    if (std::sscanf(line.c_str(), "%ld,%lg", &step, &th1) != 2)
      throw resgld::io_error("malformed trace row: " + line);
    t.steps.push_back(step);
    t.theta1.push_back(th1);
  }
  return t;
}

resgld::ReferencePosterior read_reference(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw resgld::io_error("cannot open reference: " + path);
  std::string line;
  if (!std::getline(in, line)) throw resgld::io_error("empty reference: " + path);
  resgld::ReferencePosterior ref;
  while (std::getline(in, line)) {
    double g = 0.0, ld = 0.0, c = 0.0;
    if (std::sscanf(line.c_str(), "%lg,%lg,%lg", &g, &ld, &c) != 3)
      throw resgld::io_error("malformed reference row: " + line);
    ref.grid.push_back(g);
    ref.log_density.push_back(ld);
    ref.cdf.push_back(c);
  }
  return ref;
}

int cmd_metrics(const std::string& trace_path, const std::string& reference_path, long every,
                double burn_frac, long thin, std::vector<double> centers, double radius,
                const std::string& out_path) {
  const TraceData trace = read_trace(trace_path);
  const resgld::ReferencePosterior ref = read_reference(reference_path);

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw resgld::io_error("cannot write metrics: " + out_path);
    out = &file;
  }
  (*out) << "metric,step,value\n";
  const long last = trace.steps.empty() ? 0 : trace.steps.back();
  char buf[96];
  for (long checkpoint = every; checkpoint <= last; checkpoint += every) {
    resgld::SampleSet set;
    const long lo = static_cast<long>(burn_frac * static_cast<double>(checkpoint));
    long kept = 0;
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
      if (trace.steps[i] <= lo || trace.steps[i] > checkpoint) continue;
      if (++kept % thin == 0) set.values.push_back(trace.theta1[i]);
    }
    if (set.values.empty()) continue;
    std::snprintf(buf, sizeof buf, "w2,%ld,%.17g\n", checkpoint,
                  resgld::w2_empirical_vs_reference(set, ref));
    (*out) << buf;
    const auto occ = resgld::mode_occupancy(set, centers, radius);
    for (std::size_t c = 0; c < occ.size(); ++c) {
      std::snprintf(buf, sizeof buf, "occupancy%zu,%ld,%.17g\n", c, checkpoint, occ[c]);
      (*out) << buf;
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Replica-exchange stochastic gradient Langevin sampler toolkit"};
  app.require_subcommand(1);

  std::string preset_name, config_path, out_dir, out_path;
  std::uint64_t seed = 0;
  bool seed_set = false;

  auto* run_cmd = app.add_subcommand("run", "Run a sampler and write trace/samples/summary");
  run_cmd->add_option("--preset", preset_name, "Start from a named preset (sec51, sec51-paper, cyc51)");
  run_cmd->add_option("--config", config_path, "Flat key = value config file");
  run_cmd->add_option("--seed", seed, "Override master_seed")->each([&](const std::string&) {
    seed_set = true;
  });
  run_cmd->add_option("--out-dir", out_dir, "Directory for trace.csv, samples.csv, summary.txt");

  auto* ref_cmd = app.add_subcommand("reference", "Emit the quadrature posterior CSV");
  ref_cmd->add_option("--preset", preset_name, "Start from a named preset");
  ref_cmd->add_option("--config", config_path, "Flat key = value config file");
  ref_cmd->add_option("--out", out_path, "Output path (default stdout)");

  std::string trace_path, reference_path;
  long every = 5000, thin = 1;
  double burn_frac = 0.2, radius = 3.0;
  std::vector<double> centers{-5.0, 25.0};
  auto* met_cmd = app.add_subcommand("metrics", "Distance/occupancy series from a trace");
  met_cmd->add_option("--trace", trace_path, "Trace CSV from `run`")->required();
  met_cmd->add_option("--reference", reference_path, "Reference CSV from `reference`")->required();
  met_cmd->add_option("--every", every, "Checkpoint stride in steps");
  met_cmd->add_option("--burn", burn_frac, "Fraction of each prefix to discard");
  met_cmd->add_option("--thin", thin, "Keep every t-th retained row");
  met_cmd->add_option("--centers", centers, "Mode centers for occupancy");
  met_cmd->add_option("--radius", radius, "Occupancy ball radius");
  met_cmd->add_option("--out", out_path, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(preset_name, config_path, seed_set, seed, out_dir);
    if (ref_cmd->parsed()) return cmd_reference(preset_name, config_path, out_path);
    if (met_cmd->parsed())
      return cmd_metrics(trace_path, reference_path, every, burn_frac, thin, centers, radius,
                         out_path);
  } catch (const resgld::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const resgld::divergence_error& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const resgld::io_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}
