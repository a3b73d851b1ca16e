#pragma once

#include "resgld/rng.hpp"

namespace resgld {

enum class ChainId { low, high };

/// One Langevin chain: scalar position plus its stepping parameters.
struct ChainState {
  double position = 0.0;
  double temperature = 1.0;
  double lr = 1e-4;
  ChainId id = ChainId::low;
};

/// One SGLD transition:
///   position <- position - lr * grad_estimate + sqrt(2 lr tau) * xi.
/// At temperature 0 the noise branch is skipped exactly (pure gradient
/// descent, no rng consumption). Throws divergence_error on non-finite state.
ChainState sgld_step(const ChainState& state, double grad_estimate, Rng& rng, long step = -1);

enum class ScheduleKind { constant, geometric_decay, cosine_cyclic };

/// Learning-rate / temperature / correction schedules.
///   constant:        base
///   geometric_decay: base for k < start_step, then base * decay^(k - start_step)
///   cosine_cyclic:   (base / 2) * (cos(pi * mod(k, P) / P) + 1), P = ceil(horizon / cycles)
struct Schedule {
  ScheduleKind kind = ScheduleKind::constant;
  double base = 1.0;
  double decay = 1.0;
  long cycles = 1;
  long horizon = 1;
  long start_step = 0;

  void validate() const;  // throws config_error
};

double schedule_at(const Schedule& s, long k);  // requires 0 <= k < horizon

/// Geometrically growing correction factor f0 * growth^k.
double correction_schedule(double f0, long k, double growth = 1.02);

/// Cycle phase in [0, 1) of a cosine-cyclic schedule at step k.
double cycle_phase(const Schedule& s, long k);

}  // namespace resgld
