#include "resgld/runner.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>

#include "resgld/errors.hpp"
#include "resgld/estimators.hpp"
#include "resgld/exchange.hpp"
#include "resgld/kernels.hpp"
#include "resgld/rng.hpp"

namespace resgld {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class TraceWriter {
public:
  explicit TraceWriter(const std::string& path) {
    if (path.empty()) return;
    file_ = std::fopen(path.c_str(), "wb");
    if (!file_) throw io_error("cannot open trace file: " + path);
    std::fputs(trace_header(), file_);
    std::fputc('\n', file_);
  }
  ~TraceWriter() {
    if (file_) std::fclose(file_);
  }
  TraceWriter(const TraceWriter&) = delete;
  TraceWriter& operator=(const TraceWriter&) = delete;

  bool enabled() const { return file_ != nullptr; }

  void row(long step, double th1, double th2, double e1, double e2, double sigma2, double coeff,
           double raw_rate, double trunc_rate, bool accepted, double eta, double tau1,
           double tau2, double f) {
    if (!file_) return;
    char buf[512];
    const int len = std::snprintf(
        buf, sizeof buf,
        "%ld,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%.17g,%.17g,%.17g,%.17g\n",
        step, th1, th2, e1, e2, sigma2, coeff, raw_rate, trunc_rate, accepted ? 1 : 0, eta,
        tau1, tau2, f);
    if (len < 0 || std::fwrite(buf, 1, static_cast<std::size_t>(len), file_) !=
                       static_cast<std::size_t>(len))
      throw io_error("short write to trace file");
  }

private:
  std::FILE* file_ = nullptr;
};

Schedule lr_schedule(const RunConfig& cfg, double base) {
  Schedule s;
  s.kind = cfg.lr_kind;
  s.base = base;
  s.decay = cfg.lr_decay;
  s.cycles = cfg.lr_cycles;
  s.horizon = cfg.steps > 0 ? cfg.steps : 1;
  s.start_step = cfg.lr_start_step;
  s.validate();
  return s;
}

}  // namespace

const char* trace_header() {
  return "step,theta1,theta2,energy1,energy2,sigma2,coeff,raw_rate,trunc_rate,accepted,"
         "eta,tau1,tau2,f";
}

MixturePosterior build_model(const RunConfig& cfg) {
  MixtureSpec spec = cfg.model;
  if (spec.gen_seed == 0) {
    RngStreams streams = RngStreams::make(cfg.master_seed);
    spec.gen_seed = streams.data_gen.next_u64();
  }
  return MixturePosterior(spec, make_dataset(spec));
}

RunResult run(const RunConfig& cfg) {
  cfg.validate();
  const MixturePosterior model = build_model(cfg);
  const std::size_t data_size = model.data_size();
  const long steps_per_epoch =
      static_cast<long>((data_size + cfg.batch_size - 1) / cfg.batch_size);

  RngStreams streams = RngStreams::make(cfg.master_seed);
  TraceWriter trace(cfg.trace_path);

  const bool two_chain = cfg.sampler == SamplerKind::re_sgld ||
                         cfg.sampler == SamplerKind::vr_re_sgld ||
                         cfg.sampler == SamplerKind::avr_re_sgld;
  const bool vr_family =
      cfg.sampler == SamplerKind::vr_re_sgld || cfg.sampler == SamplerKind::avr_re_sgld;
  const bool adaptive = cfg.sampler == SamplerKind::avr_re_sgld;

  ReplicaPair pair;
  pair.low = ChainState{cfg.theta0_low, cfg.tau1, cfg.eta1, ChainId::low};
  pair.high = ChainState{cfg.theta0_high, cfg.tau2, cfg.eta2, ChainId::high};
  pair.cv_low.period = pair.cv_high.period = cfg.cv_period;

  RunResult res;
  res.summary.steps = cfg.steps;
  const long burn = static_cast<long>(cfg.burn_in_frac * static_cast<double>(cfg.steps));
  res.summary.burn_in_steps = burn;

  if (vr_family) {
    pair.cv_low = refresh_control_variate(model, pair.cv_low, pair.low.position, 0);
    pair.cv_high = refresh_control_variate(model, pair.cv_high, pair.high.position, 0);
  }

  SwapState swap_state;
  swap_state.smoothing = cfg.gamma;
  swap_state.correction_factor = cfg.f0;
  swap_state.probe_count = cfg.probe_count;
  swap_state.coeff = cfg.coeff_c;
  double c_use = vr_family ? cfg.coeff_c : 0.0;

  const Schedule sched_low = lr_schedule(cfg, cfg.eta1);
  const Schedule sched_high = lr_schedule(cfg, cfg.eta2);

  double sigma2_sum = 0.0;
  long sigma2_count = 0;
  long eligible_count = 0;  // cyc_sgld collection counter

  for (long k = 1; k <= cfg.steps; ++k) {
    const double eta1_k = schedule_at(sched_low, k - 1);
    pair.low.lr = eta1_k;
    const MiniBatch batch = sample_batch(streams.batch, cfg.batch_size, data_size);
    pair.low = sgld_step(pair.low, batch_grad(model, pair.low.position, batch),
                         streams.chain1_noise, k);
    if (two_chain) {
      pair.high.lr = schedule_at(sched_high, k - 1);
      pair.high = sgld_step(pair.high, batch_grad(model, pair.high.position, batch),
                            streams.chain2_noise, k);
    }

    if (two_chain && cfg.cv_period > 0 && k % cfg.cv_period == 0) {
      if (cfg.probe_count >= 2) {
        // Variance of the estimator difference over the expiring window,
        // measured on fresh batches before the snapshots move.
        const double probe = probe_variance(model, pair.low.position, pair.high.position,
                                            pair.cv_low, pair.cv_high, c_use, cfg.batch_size,
                                            cfg.probe_count, streams.probe);
        swap_state.var_estimate = swap_state.var_initialized
                                      ? smooth_update(swap_state.var_estimate, probe, cfg.gamma)
                                      : probe;
        swap_state.var_initialized = true;
        if (adaptive) {
          const double c1 = estimate_coeff(model, pair.low.position, pair.cv_low,
                                           cfg.batch_size, cfg.probe_count, streams.probe);
          const double c2 = estimate_coeff(model, pair.high.position, pair.cv_high,
                                           cfg.batch_size, cfg.probe_count, streams.probe);
          const double c_new = 0.5 * (c1 + c2);
          swap_state.coeff = swap_state.coeff_initialized
                                 ? smooth_update(swap_state.coeff, c_new, cfg.gamma)
                                 : c_new;
          swap_state.coeff_initialized = true;
          c_use = swap_state.coeff;
        }
      }
      if (vr_family) {
        pair.cv_low = refresh_control_variate(model, pair.cv_low, pair.low.position, k);
        pair.cv_high = refresh_control_variate(model, pair.cv_high, pair.high.position, k);
        ++res.summary.refresh_count;
      }
    }

    double e1 = kNaN, e2 = kNaN, raw = kNaN, trunc = kNaN;
    bool accepted = false;
    const double f_k = cfg.f0 * std::pow(cfg.f_growth, static_cast<double>((k - 1) / steps_per_epoch));
    if (two_chain && cfg.swap_period > 0 && k % cfg.swap_period == 0 &&
        cfg.intensity_r != 0.0) {
      if (vr_family) {
        e1 = vr_energy(model, pair.low.position, batch, pair.cv_low, c_use);
        e2 = vr_energy(model, pair.high.position, batch, pair.cv_high, c_use);
        raw = vr_rate(e1, e2, swap_state.var_estimate, f_k, cfg.tau1, cfg.tau2);
      } else {
        e1 = batch_energy(model, pair.low.position, batch);
        e2 = batch_energy(model, pair.high.position, batch);
        raw = corrected_rate(e1, e2, swap_state.var_estimate, f_k, cfg.tau1, cfg.tau2);
      }
      const double r_eff = cfg.intensity_r < 0.0 ? 1.0 / eta1_k : cfg.intensity_r;
      const SwapDecision d = attempt_swap(pair, k, raw, r_eff, eta1_k, streams.swap);
      ++res.summary.swap_attempts;
      if (d.accepted) ++res.summary.accepted_swaps;
      if (d.overflowed) ++res.summary.overflow_events;
      trunc = d.truncated_rate;
      accepted = d.accepted;
    }

    if (cfg.sampler == SamplerKind::cyc_sgld) {
      if (cycle_phase(sched_low, k - 1) >= cfg.collect_threshold && k > burn) {
        ++eligible_count;
        if (eligible_count % cfg.thinning == 0) res.samples.values.push_back(pair.low.position);
      }
    } else if (k > burn && (k - burn) % cfg.thinning == 0) {
      res.samples.values.push_back(pair.low.position);
    }

    if (k > cfg.steps / 2) {
      sigma2_sum += swap_state.var_estimate;
      ++sigma2_count;
    }

    if (trace.enabled()) {
      if (!two_chain && std::isnan(e1)) e1 = batch_energy(model, pair.low.position, batch);
      trace.row(k, pair.low.position, two_chain ? pair.high.position : kNaN, e1, e2,
                two_chain ? swap_state.var_estimate : kNaN, two_chain ? c_use : kNaN, raw,
                trunc, accepted, eta1_k, cfg.tau1, two_chain ? cfg.tau2 : kNaN, f_k);
    }
  }

  res.samples.burn_in = burn;
  res.samples.thinning = cfg.thinning;
  res.summary.sample_count = static_cast<long>(res.samples.values.size());
  res.summary.final_theta_low = pair.low.position;
  res.summary.final_theta_high = pair.high.position;
  res.summary.final_sigma2 = swap_state.var_estimate;
  res.summary.final_coeff = c_use;
  res.summary.mean_sigma2_second_half =
      sigma2_count > 0 ? sigma2_sum / static_cast<double>(sigma2_count) : 0.0;
  return res;
}

}  // namespace resgld
