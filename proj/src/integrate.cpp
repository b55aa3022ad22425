#include "pointflow/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dp45.hpp"

namespace pointflow {

namespace {

// Relative slack when testing cluster membership against the collision
// radius; absorbs the roundoff asymmetry of numerically simultaneous
// collisions (equilateral triple collapse).
constexpr double kClusterSlack = 1e-6;

double direction_sign(const IntegratorOptions& opts) {
  return opts.direction == TimeDirection::forward ? 1.0 : -1.0;
}

SystemState state_at(const SystemState& reference, double time,
                     const std::vector<Complex>& positions) {
  SystemState out = reference;
  out.time = time;
  for (std::size_t k = 0; k < positions.size(); ++k) {
    out.particles[k].position = positions[k];
  }
  return out;
}

double pair_separation(const std::vector<Complex>& z, std::size_t i, std::size_t j) {
  return std::abs(z[i] - z[j]);
}

/// Indices of the pair that crossed the collision radius during a step:
/// separation >= radius before, < radius after.
std::optional<std::pair<std::size_t, std::size_t>> crossed_pair(
    const std::vector<Complex>& before, const std::vector<Complex>& after,
    double radius) {
  std::optional<std::pair<std::size_t, std::size_t>> best;
  double best_sep = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < before.size(); ++i) {
    for (std::size_t j = i + 1; j < before.size(); ++j) {
      if (pair_separation(before, i, j) >= radius &&
          pair_separation(after, i, j) < radius) {
        const double sep = pair_separation(after, i, j);
        if (sep < best_sep) {
          best_sep = sep;
          best = std::make_pair(i, j);
        }
      }
    }
  }
  return best;
}

/// Pairwise-within-radius closure seeded by the crossing pair.
std::vector<std::size_t> cluster_members(const SystemState& state, std::size_t a,
                                         std::size_t b, double radius) {
  const auto z = state.positions();
  const double threshold = radius * (1.0 + kClusterSlack);
  std::vector<bool> in(z.size(), false);
  in[a] = in[b] = true;
  bool grew = true;
  while (grew) {
    grew = false;
    for (std::size_t j = 0; j < z.size(); ++j) {
      if (in[j]) continue;
      bool close_to_all = true;
      for (std::size_t k = 0; k < z.size(); ++k) {
        if (!in[k]) continue;
        if (pair_separation(z, j, k) > threshold) {
          close_to_all = false;
          break;
        }
      }
      if (close_to_all) {
        in[j] = true;
        grew = true;
      }
    }
  }
  std::vector<std::size_t> members;
  for (std::size_t j = 0; j < z.size(); ++j) {
    if (in[j]) members.push_back(j);
  }
  return members;
}

Complex merge_location(const SystemState& state, const std::vector<std::size_t>& members) {
  Complex total{0.0, 0.0};
  double total_abs = 0.0;
  Complex weighted{0.0, 0.0};
  Complex plain{0.0, 0.0};
  for (std::size_t idx : members) {
    const Complex g = state.particles[idx].intensity.value();
    total += g;
    total_abs += std::abs(g);
    weighted += g * state.particles[idx].position;
    plain += state.particles[idx].position;
  }
  if (std::abs(total) > 1e-12 * total_abs) return weighted / total;
  return plain / static_cast<double>(members.size());
}

Event make_merge_event(const SystemState& state, const std::vector<std::size_t>& members) {
  Event evt;
  evt.kind = EventKind::merge;
  evt.time = state.time;
  evt.participants = members;
  evt.location = merge_location(state, members);
  return evt;
}

}  // namespace

void IntegratorOptions::validate() const {
  if (!(initial_step > 0.0)) throw std::invalid_argument("initial_step must be positive");
  if (!(abs_tol > 0.0)) throw std::invalid_argument("abs_tol must be positive");
  if (!(rel_tol > 0.0)) throw std::invalid_argument("rel_tol must be positive");
  if (!(collision_radius > 0.0)) {
    throw std::invalid_argument("collision_radius must be positive");
  }
  if (!(step_floor > 0.0)) throw std::invalid_argument("step_floor must be positive");
  if (!(step_floor < initial_step)) {
    throw std::invalid_argument("step_floor must be below initial_step");
  }
  if (max_steps <= 0) throw std::invalid_argument("max_steps must be positive");
}

SystemState rk4_step(const SystemState& state, double h) {
  if (h == 0.0) throw std::invalid_argument("step must be nonzero");
  if (state.size() < 2) {
    SystemState out = state;
    out.time += h;
    return out;
  }
  const auto gammas = state.intensity_values();
  auto field = [&gammas](const std::vector<Complex>& z) {
    return velocity_field_raw(z, gammas);
  };
  const auto z1 = detail::rk4_vec(field, state.positions(), h);
  return state_at(state, state.time + h, z1);
}

namespace {

/// Adaptive advance of bare positions by dt, no sampling or event handling.
std::vector<Complex> advance_positions(std::vector<Complex> z,
                                       const std::vector<Complex>& gammas, double dt,
                                       const IntegratorOptions& opts) {
  if (dt == 0.0) return z;
  auto field = [&gammas](const std::vector<Complex>& y) {
    return velocity_field_raw(y, gammas);
  };
  const double dir = dt > 0.0 ? 1.0 : -1.0;
  double t = 0.0;
  double h = dt;
  long guard = 0;
  while ((dt - t) * dir > std::abs(dt) * 1e-15) {
    if (++guard > opts.max_steps) throw NumericalError("max step count exceeded");
    if ((t + h - dt) * dir > 0.0) h = dt - t;
    auto r = detail::dp45_step(field, z, h, opts.abs_tol, opts.rel_tol);
    if (r.error_norm <= 1.0) {
      z = std::move(r.y);
      t += h;
      h *= detail::step_factor(r.error_norm);
    } else {
      h *= detail::step_factor(r.error_norm);
      if (std::abs(h) < opts.step_floor) {
        // Take the remaining interval in one shot rather than stalling; the
        // probe interval is at most one accepted integrator step.
        z = detail::rk4_vec(field, z, dt - t);
        break;
      }
    }
  }
  return z;
}

}  // namespace

std::optional<detail::Crossing> detail::refine_crossing(const SystemState& step_start,
                                                        double step,
                                                        const IntegratorOptions& opts) {
  const auto z0 = step_start.positions();
  const auto gammas = step_start.intensity_values();
  const double eps = opts.collision_radius;

  // Only pairs separated at the bracket start can cross from above; pairs
  // already inside the radius (expanding runs) are not events.
  std::vector<std::pair<std::size_t, std::size_t>> eligible;
  for (std::size_t i = 0; i < z0.size(); ++i) {
    for (std::size_t j = i + 1; j < z0.size(); ++j) {
      if (pair_separation(z0, i, j) >= eps) eligible.emplace_back(i, j);
    }
  }
  if (eligible.empty()) return std::nullopt;

  auto margin_of = [&](const std::vector<Complex>& z,
                       std::pair<std::size_t, std::size_t>& argmin) {
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& [i, j] : eligible) {
      const double m = pair_separation(z, i, j) - eps;
      if (m < margin) {
        margin = m;
        argmin = {i, j};
      }
    }
    return margin;
  };

  std::pair<std::size_t, std::size_t> pair = eligible.front();

  // Widen the bracket a little if the integrator path and the probe path
  // disagree about a marginal crossing.
  double hi = 1.0;
  std::vector<Complex> z_hi = advance_positions(z0, gammas, hi * step, opts);
  for (int attempt = 0; margin_of(z_hi, pair) >= 0.0 && attempt < 3; ++attempt) {
    hi *= 1.5;
    z_hi = advance_positions(z0, gammas, hi * step, opts);
  }
  if (margin_of(z_hi, pair) >= 0.0) return std::nullopt;

  double lo = 0.0;
  std::vector<Complex> z_lo = z0;
  if (margin_of(z_lo, pair) <= 0.0) {
    hi = 0.0;
    z_hi = z0;
  }

  const double t0 = step_start.time;
  const double time_tol = 1e-10 * std::max(1.0, std::abs(t0) + std::abs(step) * hi);
  for (int iter = 0; iter < 200 && (hi - lo) * std::abs(step) > time_tol; ++iter) {
    const double mid = 0.5 * (lo + hi);
    auto z_mid = advance_positions(z_lo, gammas, (mid - lo) * step, opts);
    if (margin_of(z_mid, pair) > 0.0) {
      lo = mid;
      z_lo = std::move(z_mid);
    } else {
      hi = mid;
      z_hi = std::move(z_mid);
    }
  }
  margin_of(z_hi, pair);

  Crossing crossing;
  crossing.state = state_at(step_start, t0 + hi * step, z_hi);
  crossing.event.kind = EventKind::collision;
  crossing.event.time = crossing.state.time;
  crossing.event.participants = {pair.first, pair.second};
  crossing.event.location = 0.5 * (z_hi[pair.first] + z_hi[pair.second]);
  return crossing;
}

Event locate_collision(const SystemState& step_start, double step,
                       const IntegratorOptions& opts) {
  if (step == 0.0) throw std::invalid_argument("bracketing step must be nonzero");
  auto crossing = detail::refine_crossing(step_start, step, opts);
  if (!crossing) throw std::invalid_argument("no separation crossing in bracket");
  return crossing->event;
}

Trajectory integrate_adaptive(const SystemState& initial, double t_end,
                              const IntegratorOptions& opts) {
  opts.validate();
  const double dir = direction_sign(opts);
  if (!((t_end - initial.time) * dir > 0.0)) {
    throw std::invalid_argument("t_end must lie in the integration direction");
  }

  Trajectory out;
  out.samples.push_back(initial);
  if (initial.size() < 2) {
    SystemState fin = initial;
    fin.time = t_end;
    out.samples.push_back(fin);
    return out;
  }

  const auto gammas = initial.intensity_values();
  auto field = [&gammas](const std::vector<Complex>& z) {
    return velocity_field_raw(z, gammas);
  };

  std::vector<Complex> z = initial.positions();
  double t = initial.time;
  double h = dir * std::min(opts.initial_step, std::abs(t_end - t));
  long steps = 0;

  while (true) {
    const double remaining = (t_end - t) * dir;
    if (remaining <= std::max(opts.step_floor,
                              4.0 * std::numeric_limits<double>::epsilon() *
                                  std::max({std::abs(t), std::abs(t_end), 1.0}))) {
      break;
    }
    if (++steps > opts.max_steps) {
      throw NumericalError("max step count exceeded");
    }
    if ((t + h - t_end) * dir > 0.0) h = t_end - t;

    double err;
    std::vector<Complex> y_new;
    try {
      auto r = detail::dp45_step(field, z, h, opts.abs_tol, opts.rel_tol);
      err = r.error_norm;
      y_new = std::move(r.y);
    } catch (const CoincidenceError&) {
      err = std::numeric_limits<double>::infinity();
    }

    if (err <= 1.0) {
      if (crossed_pair(z, y_new, opts.collision_radius)) {
        auto crossing = detail::refine_crossing(state_at(initial, t, z), h, opts);
        if (crossing) {
          out.samples.push_back(crossing->state);
          out.events.push_back(crossing->event);
          return out;
        }
      }
      z = std::move(y_new);
      t += h;
      out.samples.push_back(state_at(initial, t, z));
      h *= detail::step_factor(err);
    } else {
      h *= std::isfinite(err) ? detail::step_factor(err) : 0.2;
      if (std::abs(h) < opts.step_floor) {
        Event evt;
        evt.kind = EventKind::termination;
        evt.time = t;
        Complex centroid{0.0, 0.0};
        for (const auto& p : z) centroid += p;
        evt.location = centroid / static_cast<double>(z.size());
        evt.detail = "step floor reached; switch to the blow-up chart";
        out.events.push_back(evt);
        return out;
      }
    }
  }
  return out;
}

SystemState merge_particles(const SystemState& state,
                            const std::vector<std::size_t>& participants) {
  if (participants.empty()) throw std::invalid_argument("empty participant set");
  std::vector<std::size_t> members = participants;
  std::sort(members.begin(), members.end());
  if (std::adjacent_find(members.begin(), members.end()) != members.end()) {
    throw std::invalid_argument("duplicate participant index");
  }
  if (members.back() >= state.size()) {
    throw std::invalid_argument("participant index out of range");
  }

  Complex total{0.0, 0.0};
  double total_abs = 0.0;
  for (std::size_t idx : members) {
    total += state.particles[idx].intensity.value();
    total_abs += std::abs(state.particles[idx].intensity.value());
  }
  const bool removed = std::abs(total) <= 1e-12 * total_abs;

  SystemState out;
  out.time = state.time;
  out.particles.reserve(state.size() - members.size() + (removed ? 0 : 1));
  const Complex location = merge_location(state, members);
  for (std::size_t k = 0; k < state.size(); ++k) {
    const bool participating =
        std::binary_search(members.begin(), members.end(), k);
    if (!participating) {
      out.particles.push_back(state.particles[k]);
    } else if (!removed && k == members.front()) {
      out.particles.push_back(Particle{location, Intensity(total)});
    }
  }
  return out;
}

Trajectory simulate(const SystemState& initial, double t_end,
                    const IntegratorOptions& opts) {
  opts.validate();
  const double dir = direction_sign(opts);

  Trajectory out;
  out.samples.push_back(initial);
  SystemState cur = initial;

  // Merge clusters already inside the collision radius at the start, but only
  // when they are approaching in the integration direction; expanding
  // configurations are the solutions that begin at collision.
  if (cur.size() >= 2) {
    bool swept = false;
    while (cur.size() >= 2) {
      const auto z = cur.positions();
      const auto v = velocity_field(cur);
      std::optional<std::pair<std::size_t, std::size_t>> hit;
      for (std::size_t i = 0; i < z.size() && !hit; ++i) {
        for (std::size_t j = i + 1; j < z.size(); ++j) {
          if (pair_separation(z, i, j) < opts.collision_radius) {
            const double rate =
                2.0 * std::real(std::conj(z[i] - z[j]) * (v[i] - v[j])) * dir;
            if (rate < 0.0) {
              hit = std::make_pair(i, j);
              break;
            }
          }
        }
      }
      if (!hit) break;
      const auto members = cluster_members(cur, hit->first, hit->second,
                                           opts.collision_radius);
      out.events.push_back(make_merge_event(cur, members));
      cur = merge_particles(cur, members);
      swept = true;
    }
    if (swept) out.samples.back() = cur;
  }

  while (cur.size() >= 2) {
    Trajectory leg = integrate_adaptive(cur, t_end, opts);
    out.samples.insert(out.samples.end(), leg.samples.begin() + 1, leg.samples.end());
    out.events.insert(out.events.end(), leg.events.begin(), leg.events.end());
    if (leg.events.empty() || leg.events.back().kind != EventKind::collision) {
      break;  // reached t_end or stalled at the step floor
    }

    const Event& collision = out.events.back();
    SystemState pre = out.samples.back();
    auto members = cluster_members(pre, collision.participants[0],
                                   collision.participants[1], opts.collision_radius);
    out.events.push_back(make_merge_event(pre, members));
    SystemState post = merge_particles(pre, members);

    // Cascade: a merged particle can land inside the radius of a neighbour.
    while (post.size() >= 2) {
      const auto z = post.positions();
      std::optional<std::pair<std::size_t, std::size_t>> hit;
      for (std::size_t i = 0; i < z.size() && !hit; ++i) {
        for (std::size_t j = i + 1; j < z.size(); ++j) {
          if (pair_separation(z, i, j) < opts.collision_radius) {
            hit = std::make_pair(i, j);
            break;
          }
        }
      }
      if (!hit) break;
      const auto more = cluster_members(post, hit->first, hit->second,
                                        opts.collision_radius);
      out.events.push_back(make_merge_event(post, more));
      post = merge_particles(post, more);
    }

    // The event-time sample carries the post-merge configuration; times stay
    // strictly monotone and the solution remains continuous across the merge.
    out.samples.back() = post;
    cur = post;
    if (!((t_end - cur.time) * dir > 0.0)) break;  // merge landed at the horizon
  }
  return out;
}

}  // namespace pointflow
