#pragma once

#include "resgld/estimators.hpp"
#include "resgld/kernels.hpp"
#include "resgld/rng.hpp"

namespace resgld {

/// Outcome of one swap attempt.
struct SwapDecision {
  long iteration = 0;
  double raw_rate = 0.0;        // before truncation; may be +inf
  double truncated_rate = 0.0;  // min(1, raw_rate)
  double uniform_draw = 0.0;
  bool accepted = false;
  bool overflowed = false;      // exponent clamped to +inf
};

/// The two coupled chains plus their control variates. Temperatures live in
/// the chain slots; positions (and control variates) move on a swap.
struct ReplicaPair {
  ChainState low;
  ChainState high;
  ControlVariate cv_low;
  ControlVariate cv_high;
};

/// exp{(1/tau1 - 1/tau2)(e1 - e2)} for exact full-data energies.
/// Exponents above 700 overflow to +inf; truncation downstream makes that
/// semantically exact.
double deterministic_rate(double e1, double e2, double tau1, double tau2);

/// exp{(1/tau1 - 1/tau2)(e1 - e2 - (1/tau1 - 1/tau2) sigma2 / f)} for noisy
/// energy estimates with estimated difference variance sigma2.
double corrected_rate(double e1, double e2, double sigma2_hat, double f, double tau1,
                      double tau2);

/// Same correction applied to variance-reduced estimates; kept distinct so
/// traces label which estimator fed the decision.
double vr_rate(double lt1, double lt2, double sigma2_tilde, double f, double tau1, double tau2);

/// Accepts with probability min(1, intensity_r * eta * rate); intensity_r of
/// 1/eta makes that min(1, rate). On acceptance positions and control
/// variates are exchanged; temperatures and learning rates stay with their
/// slots. Consumes exactly one uniform draw.
SwapDecision attempt_swap(ReplicaPair& pair, long iteration, double rate, double intensity_r,
                          double eta, Rng& rng);

/// E[min(1, S)] for log-normal S with log-scale mean u - sigma^2/2 and
/// variance sigma^2:  e^u Phi(-u/sigma - sigma/2) + Phi(u/sigma - sigma/2).
double lognormal_truncated_mean(double u, double sigma);

}  // namespace resgld
