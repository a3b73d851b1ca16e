#include "resgld/exchange.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "resgld/errors.hpp"
#include "resgld/numerics.hpp"

namespace resgld {

namespace {

double rate_from_exponent(double exponent) {
  if (exponent > 700.0) return std::numeric_limits<double>::infinity();
  return std::exp(exponent);
}

}  // namespace

double deterministic_rate(double e1, double e2, double tau1, double tau2) {
  const double dt = 1.0 / tau1 - 1.0 / tau2;
  return rate_from_exponent(dt * (e1 - e2));
}

double corrected_rate(double e1, double e2, double sigma2_hat, double f, double tau1,
                      double tau2) {
  const double dt = 1.0 / tau1 - 1.0 / tau2;
  return rate_from_exponent(dt * (e1 - e2 - dt * sigma2_hat / f));
}

double vr_rate(double lt1, double lt2, double sigma2_tilde, double f, double tau1, double tau2) {
  const double dt = 1.0 / tau1 - 1.0 / tau2;
  return rate_from_exponent(dt * (lt1 - lt2 - dt * sigma2_tilde / f));
}

SwapDecision attempt_swap(ReplicaPair& pair, long iteration, double rate, double intensity_r,
                          double eta, Rng& rng) {
  if (rate < 0.0) throw config_error("swap rate must be nonnegative");
  SwapDecision d;
  d.iteration = iteration;
  d.raw_rate = rate;
  d.overflowed = std::isinf(rate);
  d.truncated_rate = std::min(1.0, rate);
  const double prob = std::min(1.0, intensity_r * eta * rate);
  d.uniform_draw = rng.uniform01();
  d.accepted = d.uniform_draw < prob;
  if (d.accepted) {
    std::swap(pair.low.position, pair.high.position);
    std::swap(pair.cv_low, pair.cv_high);
  }
  return d;
}

double lognormal_truncated_mean(double u, double sigma) {
  if (sigma < 0.0) throw config_error("sigma must be nonnegative");
  if (sigma == 0.0) return std::min(1.0, std::exp(u));
  // E[S; S < 1] + P(S >= 1), S log-normal with log-mean u - sigma^2/2
  return std::exp(u) * normal_cdf(-u / sigma - 0.5 * sigma) +
         normal_cdf(u / sigma - 0.5 * sigma);
}

}  // namespace resgld
