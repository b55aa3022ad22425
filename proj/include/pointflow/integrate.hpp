#pragma once

#include <optional>
#include <string>

#include "pointflow/model.hpp"

namespace pointflow {

enum class TimeDirection { forward, backward };

struct IntegratorOptions {
  double initial_step = 1e-2;
  // Defaults sit well below collision_radius^2 so that the drift of a squared
  // separation never masks a radius crossing.
  double abs_tol = 1e-14;
  double rel_tol = 1e-14;
  double collision_radius = 1e-6;  // pair separation treated as a collision
  double step_floor = 1e-15;
  long max_steps = 1000000;
  TimeDirection direction = TimeDirection::forward;

  void validate() const;
};

enum class EventKind { collision, merge, termination };

struct Event {
  EventKind kind = EventKind::collision;
  double time = 0.0;
  std::vector<std::size_t> participants;  // empty for termination records
  Complex location{0.0, 0.0};
  std::string detail;
};

/// Time-ordered samples (strictly monotone in the integration direction)
/// plus the events encountered along the way.
struct Trajectory {
  std::vector<SystemState> samples;
  std::vector<Event> events;

  const SystemState& front() const { return samples.front(); }
  const SystemState& back() const { return samples.back(); }
};

/// One classical 4-stage Runge-Kutta step of the interaction field.
SystemState rk4_step(const SystemState& state, double h);

/// Dormand-Prince 5(4) with per-step error control. Records every accepted
/// step. Stops at t_end, at the first collision-radius crossing (collision
/// event appended, last sample at the refined crossing time), or on a step
/// floor stall (termination event appended). Throws NumericalError when
/// max_steps is exhausted; coincidences outside collision handling propagate
/// as CoincidenceError.
Trajectory integrate_adaptive(const SystemState& state, double t_end,
                              const IntegratorOptions& opts);

/// Refines a separation crossing inside the step [state.time, state.time + step]
/// to 1e-10 relative accuracy in time. The event carries the crossing pair and
/// the midpoint of that pair at the refined time. Throws std::invalid_argument
/// when no pair crosses the collision radius inside the bracket.
Event locate_collision(const SystemState& step_start, double step,
                       const IntegratorOptions& opts);

/// Replaces the participants by one particle of summed intensity at the
/// intensity-weighted collision point. A cluster whose intensities sum to
/// zero is removed outright.
SystemState merge_particles(const SystemState& state,
                            const std::vector<std::size_t>& participants);

/// Integrates with merge-and-continue until t_end, until fewer than two
/// particles remain, or until a step-floor termination.
Trajectory simulate(const SystemState& initial, double t_end,
                    const IntegratorOptions& opts);

namespace detail {
struct Crossing {
  Event event;
  SystemState state;  // configuration at the refined event time
};
std::optional<Crossing> refine_crossing(const SystemState& step_start, double step,
                                        const IntegratorOptions& opts);
}  // namespace detail

}  // namespace pointflow
