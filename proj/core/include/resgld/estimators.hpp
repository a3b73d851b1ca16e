#pragma once

#include "resgld/model.hpp"
#include "resgld/rng.hpp"

namespace resgld {

/// Snapshot parameter with cached full-data energy, refreshed every `period`
/// iterations. Used as a control variate to cancel mini-batch energy noise.
struct ControlVariate {
  double snapshot = 0.0;
  double cached_full_energy = 0.0;
  long refreshed_at = 0;
  long period = 1;
};

/// State of the stochastic-approximation trackers feeding the swap correction.
struct SwapState {
  double var_estimate = 0.0;   // smoothed sigma^2
  double coeff = -1.0;         // control-variate coefficient in use
  double smoothing = 0.3;      // gamma of the geometric smoothing
  double correction_factor = 2.0;
  int probe_count = 10;        // batches per variance probe
  bool var_initialized = false;
  bool coeff_initialized = false;
};

/// Variance-reduced energy estimate
///   (N/n) sum_B e_i(theta) + c * ((N/n) sum_B e_i(snapshot) - cached_full).
/// Unbiased for full_energy(theta) for any fixed c; c = -1 gives the
/// difference form, c = 0 the plain estimator.
double vr_energy(const EnergyModel& model, double theta, const MiniBatch& batch,
                 const ControlVariate& cv, double c);

/// New control variate anchored at `theta`; requires k % period == 0.
ControlVariate refresh_control_variate(const EnergyModel& model, const ControlVariate& cv,
                                       double theta, long k);

/// Unbiased sample variance of J draws of
///   vr_energy(theta1, B) - vr_energy(theta2, B)
/// with the same batch B feeding both chains.
double probe_variance(const EnergyModel& model, double theta1, double theta2,
                      const ControlVariate& cv1, const ControlVariate& cv2, double c,
                      std::size_t n, int probes, Rng& rng);

/// Geometric smoothing (1 - gamma) * old + gamma * sample.
double smooth_update(double old_value, double sample, double gamma);

/// Empirical variance-minimizing coefficient -Cov(A, D) / Var(D) where
/// A = plain estimate at theta and D = plain estimate at the snapshot, over
/// J shared batches. Falls back to -1 when Var(D) degenerates.
double estimate_coeff(const EnergyModel& model, double theta, const ControlVariate& cv,
                      std::size_t n, int probes, Rng& rng);

/// Consistency check: the cached energy must match the snapshot. O(N); meant
/// for tests and debug paths.
void validate_control_variate(const EnergyModel& model, const ControlVariate& cv,
                              double rel_tol = 1e-12);

}  // namespace resgld
