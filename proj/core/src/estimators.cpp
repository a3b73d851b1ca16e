#include "resgld/estimators.hpp"

#include <cmath>
#include <vector>

#include "resgld/errors.hpp"

namespace resgld {

double vr_energy(const EnergyModel& model, double theta, const MiniBatch& batch,
                 const ControlVariate& cv, double c) {
  const double at_theta = batch_energy(model, theta, batch);
  if (c == 0.0) return at_theta;
  if (batch.size() == model.data_size()) {
    // identity batch: the snapshot term reproduces the cached full energy
    // bit for bit (same reduction tree), so the control term is exactly zero
    return at_theta;
  }
  const double at_snapshot = batch_energy(model, cv.snapshot, batch);
  return at_theta + c * (at_snapshot - cv.cached_full_energy);
}

ControlVariate refresh_control_variate(const EnergyModel& model, const ControlVariate& cv,
                                       double theta, long k) {
  if (cv.period > 0 && k % cv.period != 0)
    throw config_error("control-variate refresh at step " + std::to_string(k) +
                       " not aligned with period " + std::to_string(cv.period));
  ControlVariate next = cv;
  next.snapshot = theta;
  next.cached_full_energy = model.full_energy(theta);
  next.refreshed_at = k;
  return next;
}

double probe_variance(const EnergyModel& model, double theta1, double theta2,
                      const ControlVariate& cv1, const ControlVariate& cv2, double c,
                      std::size_t n, int probes, Rng& rng) {
  if (probes < 2) throw config_error("variance probe needs at least 2 batches");
  if (n == model.data_size()) return 0.0;  // every batch is the identity batch
  double mean = 0.0, m2 = 0.0;
  for (int j = 0; j < probes; ++j) {
    const MiniBatch batch = sample_batch(rng, n, model.data_size());
    const double d = vr_energy(model, theta1, batch, cv1, c) -
                     vr_energy(model, theta2, batch, cv2, c);
    const double delta = d - mean;
    mean += delta / static_cast<double>(j + 1);
    m2 += delta * (d - mean);
  }
  return m2 / static_cast<double>(probes - 1);
}

double smooth_update(double old_value, double sample, double gamma) {
  return (1.0 - gamma) * old_value + gamma * sample;
}

double estimate_coeff(const EnergyModel& model, double theta, const ControlVariate& cv,
                      std::size_t n, int probes, Rng& rng) {
  if (probes < 2) throw config_error("coefficient probe needs at least 2 batches");
  std::vector<double> a(probes), d(probes);
  for (int j = 0; j < probes; ++j) {
    const MiniBatch batch = sample_batch(rng, n, model.data_size());
    a[j] = batch_energy(model, theta, batch);
    d[j] = batch_energy(model, cv.snapshot, batch);
  }
  double ma = 0.0, md = 0.0;
  for (int j = 0; j < probes; ++j) {
    ma += a[j];
    md += d[j];
  }
  ma /= probes;
  md /= probes;
  double cov = 0.0, var_d = 0.0;
  for (int j = 0; j < probes; ++j) {
    cov += (a[j] - ma) * (d[j] - md);
    var_d += (d[j] - md) * (d[j] - md);
  }
  if (var_d < 1e-300) return -1.0;  // flat control term; the fixed-coefficient choice
  return -cov / var_d;
}

void validate_control_variate(const EnergyModel& model, const ControlVariate& cv,
                              double rel_tol) {
  const double actual = model.full_energy(cv.snapshot);
  const double scale = std::max(std::abs(actual), 1.0);
  if (std::abs(actual - cv.cached_full_energy) > rel_tol * scale)
    throw internal_error("stale control variate: cached energy does not match snapshot");
}

}  // namespace resgld
