#pragma once

#include <cstdint>
#include <string>

#include "resgld/config.hpp"
#include "resgld/diagnostics.hpp"
#include "resgld/model.hpp"

namespace resgld {

struct RunSummary {
  long steps = 0;
  long burn_in_steps = 0;
  long sample_count = 0;
  long swap_attempts = 0;
  long accepted_swaps = 0;
  long refresh_count = 0;
  long overflow_events = 0;
  double final_theta_low = 0.0;
  double final_theta_high = 0.0;
  double final_sigma2 = 0.0;
  double final_coeff = 0.0;
  /// Time average of the smoothed variance estimate over the second half of
  /// the run (the stationary-phase figure of merit).
  double mean_sigma2_second_half = 0.0;
};

struct RunResult {
  SampleSet samples;
  RunSummary summary;
};

/// Executes the configured sampler for cfg.steps iterations. Per step: draw a
/// mini-batch, advance the chain(s), every cv_period steps probe the
/// estimator-difference variance and refresh the control variates, then
/// attempt a position swap and record a trace row. Returns the thinned
/// low-temperature samples. Writes a CSV trace when cfg.trace_path is set.
RunResult run(const RunConfig& cfg);

/// Convenience: build the model a config describes (dataset from gen_seed;
/// a gen_seed of 0 derives one from master_seed's data-generation stream).
MixturePosterior build_model(const RunConfig& cfg);

/// Trace CSV header, in column order.
const char* trace_header();

}  // namespace resgld
