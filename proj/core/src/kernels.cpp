#include "resgld/kernels.hpp"

#include <cmath>
#include <string>

#include "resgld/errors.hpp"

namespace resgld {

ChainState sgld_step(const ChainState& state, double grad_estimate, Rng& rng, long step) {
  if (!std::isfinite(grad_estimate))
    throw divergence_error("non-finite gradient estimate", step);
  ChainState next = state;
  next.position = state.position - state.lr * grad_estimate;
  if (state.temperature > 0.0)
    next.position += std::sqrt(2.0 * state.lr * state.temperature) * rng.normal();
  if (!std::isfinite(next.position)) throw divergence_error("non-finite chain position", step);
  return next;
}

void Schedule::validate() const {
  if (!(base > 0.0)) throw config_error("schedule base must be > 0");
  if (horizon < 1) throw config_error("schedule horizon must be >= 1");
  switch (kind) {
    case ScheduleKind::constant:
      break;
    case ScheduleKind::geometric_decay:
      if (!(decay > 0.0 && decay <= 1.0))
        throw config_error("geometric decay must be in (0, 1]");
      break;
    case ScheduleKind::cosine_cyclic:
      if (cycles < 1 || cycles > horizon)
        throw config_error("cosine cycles must be in [1, horizon]");
      break;
  }
}

static long cycle_period(const Schedule& s) {
  return (s.horizon + s.cycles - 1) / s.cycles;  // ceil
}

double cycle_phase(const Schedule& s, long k) {
  const long p = cycle_period(s);
  return static_cast<double>(k % p) / static_cast<double>(p);
}

double schedule_at(const Schedule& s, long k) {
  if (k < 0 || k >= s.horizon)
    throw config_error("schedule step " + std::to_string(k) + " outside horizon " +
                       std::to_string(s.horizon));
  switch (s.kind) {
    case ScheduleKind::constant:
      return s.base;
    case ScheduleKind::geometric_decay:
      if (k < s.start_step) return s.base;
      return s.base * std::pow(s.decay, static_cast<double>(k - s.start_step));
    case ScheduleKind::cosine_cyclic:
      return 0.5 * s.base * (std::cos(3.141592653589793 * cycle_phase(s, k)) + 1.0);
  }
  return s.base;
}

double correction_schedule(double f0, long k, double growth) {
  if (!(f0 > 0.0)) throw config_error("correction factor f0 must be > 0");
  return f0 * std::pow(growth, static_cast<double>(k));
}

}  // namespace resgld
