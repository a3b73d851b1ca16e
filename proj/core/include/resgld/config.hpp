#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "resgld/kernels.hpp"
#include "resgld/model.hpp"

namespace resgld {

enum class SamplerKind { sgld, cyc_sgld, re_sgld, vr_re_sgld, avr_re_sgld };

const char* to_string(SamplerKind kind);
SamplerKind sampler_from_string(const std::string& name);

/// Everything one run needs. Flat key = value text format; see parse_config.
struct RunConfig {
  SamplerKind sampler = SamplerKind::vr_re_sgld;
  MixtureSpec model;

  double eta1 = 1e-4;
  double eta2 = 1e-4;
  double tau1 = 1.0;
  double tau2 = 1000.0;

  ScheduleKind lr_kind = ScheduleKind::constant;
  double lr_decay = 1.0;
  long lr_cycles = 1;
  long lr_start_step = 0;

  std::size_t batch_size = 128;
  long cv_period = 50;       // 0 disables refreshes and variance probes
  double gamma = 0.3;        // smoothing step of the variance / coefficient trackers
  double f0 = 2.0;           // correction factor
  double f_growth = 1.0;     // per-epoch growth of the correction factor
  double intensity_r = -1.0; // -1: 1/eta_k; 0: swaps disabled; >0: literal
  long swap_period = 1;      // attempt swaps every j-th step
  long steps = 10000;
  long thinning = 1;
  double burn_in_frac = 0.2;
  int probe_count = 10;      // batches per variance probe
  double coeff_c = -1.0;     // fixed control-variate coefficient (vr_re_sgld)
  std::uint64_t master_seed = 0;
  double theta0_low = 0.0;
  double theta0_high = 0.0;
  double collect_threshold = 0.25;  // cyc_sgld: sampling phase of each cycle

  double grid_lo = -30.0;
  double grid_hi = 50.0;
  std::size_t grid_n = 4000;

  std::string trace_path;  // empty: no trace file

  void validate() const;  // throws config_error naming the offending keys
};

/// Parses `key = value` lines ('#' starts a comment). Unknown keys, type
/// mismatches and constraint violations throw config_error with the line.
RunConfig parse_config(std::istream& in);
RunConfig parse_config_file(const std::string& path);

/// One `key = value` line per field; parse_config round-trips the output.
std::string serialize_config(const RunConfig& cfg);

/// Applies RESGLD_<UPPERCASE KEY> environment variables over `cfg`.
void apply_env_overrides(RunConfig& cfg, const std::string& prefix = "RESGLD_");

/// Sets one key on an existing config (the parser and env overrides share it).
void set_config_key(RunConfig& cfg, const std::string& key, const std::string& value);

/// Named experiment presets; throws config_error for unknown names.
///   sec51        bimodal-mixture benchmark at benchmark scale (the
///                configuration the acceptance suite runs)
///   sec51-paper  literature parameter values for the same experiment
///   cyc51        cyclic-schedule single-chain baseline
RunConfig preset(const std::string& name);

}  // namespace resgld
