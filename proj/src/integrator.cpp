#include "loggas/integrator.hpp"

#include <algorithm>
#include <cmath>

#include "loggas/errors.hpp"

namespace loggas {

namespace {

class Stepper {
 public:
  Stepper(const ModelSpec& spec, const TruncationMode& mode, const OnePointModel& rho1,
          const IntegratorSettings& settings, LabelOrder order)
      : spec_(spec), mode_(mode), rho1_(rho1), settings_(settings), order_(order), r_(radius_of(spec.window)) {}

  DriftTerms terms(const std::vector<double>& x) const {
    return drift_terms_fast(LabeledState::from_coords(spec_.dimension, x, order_), spec_, mode_, rho1_);
  }

  // y = x + b h + dw, then reflection; returns the pushes.
  std::vector<double> propose(std::vector<double>& y, const std::vector<double>& x, const std::vector<double>& b,
                              double h, const std::vector<double>& dw) const {
    y.resize(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) y[k] = x[k] + b[k] * h + dw[k];
    std::vector<double> push(x.size(), 0.0);
    if (!is_finite(spec_.window)) return push;
    if (spec_.dimension == Dimension::OneD) {
      for (std::size_t k = 0; k < y.size(); ++k) push[k] = reflect_1d(y[k], r_);
    } else {
      for (std::size_t i = 0; i < y.size() / 2; ++i) {
        Point2 p{y[2 * i], y[2 * i + 1]};
        const Point2 d = reflect_2d(p, r_);
        y[2 * i] = p.x;
        y[2 * i + 1] = p.y;
        push[2 * i] = d.x;
        push[2 * i + 1] = d.y;
      }
    }
    return push;
  }

  bool admissible(const std::vector<double>& y) const {
    for (double v : y)
      if (!std::isfinite(v)) return false;
    const double gap = settings_.min_gap;
    if (spec_.dimension == Dimension::OneD) {
      for (std::size_t k = 0; k < y.size(); ++k) {
        if (!(std::abs(y[k]) < r_)) return false;
        if (k > 0 && !(y[k] - y[k - 1] >= gap)) return false;
      }
      return true;
    }
    const std::size_t n = y.size() / 2;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(std::hypot(y[2 * i], y[2 * i + 1]) < r_)) return false;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!(std::hypot(y[2 * i] - y[2 * j], y[2 * i + 1] - y[2 * j + 1]) >= gap)) return false;
      }
    }
    return true;
  }

  bool advance(std::vector<double>& x, double h, const std::vector<double>& dw, int depth, Rng& rng,
               std::vector<SubStep>& out) const {
    const auto b = terms(x).total();
    std::vector<double> y;
    auto push = propose(y, x, b, h, dw);
    if (admissible(y)) {
      out.push_back({h, dw, std::move(push)});
      x = std::move(y);
      return true;
    }
    if (depth >= settings_.max_substep_depth) return false;
    // Brownian bridge midpoint: W(h/2) given W(h) = dw.
    std::vector<double> first(dw.size());
    std::vector<double> second(dw.size());
    const double bridge_sd = std::sqrt(h / 4.0);
    for (std::size_t k = 0; k < dw.size(); ++k) {
      first[k] = 0.5 * dw[k] + bridge_sd * rng.normal();
      second[k] = dw[k] - first[k];
    }
    return advance(x, 0.5 * h, first, depth + 1, rng, out) && advance(x, 0.5 * h, second, depth + 1, rng, out);
  }

  std::vector<SubStep> step(std::vector<double>& x, double h, Rng& rng) const {
    const double sd = std::sqrt(h);
    for (int attempt = 0; attempt <= settings_.max_retries; ++attempt) {
      std::vector<double> dw(x.size());
      for (double& w : dw) w = sd * rng.normal();
      std::vector<double> trial = x;
      std::vector<SubStep> substeps;
      if (advance(trial, h, dw, 0, rng, substeps)) {
        x = std::move(trial);
        return substeps;
      }
    }
    throw IntegrationError("step could not be resolved after substepping and " +
                           std::to_string(settings_.max_retries) + " retries");
  }

  LabelOrder order() const { return order_; }

 private:
  const ModelSpec& spec_;
  const TruncationMode& mode_;
  const OnePointModel& rho1_;
  const IntegratorSettings& settings_;
  LabelOrder order_;
  double r_;
};

LabelOrder stepping_order(const ModelSpec& spec) {
  return spec.dimension == Dimension::OneD ? LabelOrder::AscendingValue : LabelOrder::Tracked;
}

void require_settings(const IntegratorSettings& settings) {
  if (const auto v = validate_settings(settings); !v.ok()) throw SpecError(v.violations.front());
}

BrownianReconstruction empty_reconstruction(const Trajectory& traj) {
  const std::size_t dim = traj.states.front().coords().size();
  const std::size_t frames = traj.states.size();
  BrownianReconstruction r;
  r.times = traj.times;
  for (auto* v : {&r.paths, &r.potential, &r.interaction, &r.tail, &r.boundary, &r.noise})
    v->assign(dim, std::vector<double>(frames, 0.0));
  return r;
}

void finish_paths(BrownianReconstruction& r, const Trajectory& traj) {
  const auto x0 = traj.states.front().coords();
  for (std::size_t f = 0; f < traj.states.size(); ++f) {
    const auto x = traj.states[f].coords();
    for (std::size_t c = 0; c < x0.size(); ++c) {
      r.paths[c][f] = x[c] - x0[c] - r.potential[c][f] - r.interaction[c][f] - r.tail[c][f] - r.boundary[c][f];
      r.max_residual = std::max(r.max_residual, std::abs(r.paths[c][f] - r.noise[c][f]));
    }
  }
}

void check_trajectory(const Trajectory& traj) {
  if (traj.states.empty()) throw IntegrationError("empty trajectory");
  if (!is_consistent(traj)) throw IntegrationError("trajectory lacks per-step data or is inconsistent");
  const std::size_t dim = traj.states.front().coords().size();
  for (const auto& s : traj.states)
    if (s.coords().size() != dim) throw IntegrationError("particle count changes along the trajectory");
}

}  // namespace

ValidationResult validate_settings(const IntegratorSettings& s) {
  ValidationResult r;
  if (!(s.dt > 0.0)) r.violations.emplace_back("dt must be positive");
  if (!(s.t_end >= 0.0)) r.violations.emplace_back("t_end must be nonnegative");
  if (s.t_end > 0.0 && s.dt > s.t_end) r.violations.emplace_back("dt must not exceed t_end");
  if (s.max_substep_depth < 1) r.violations.emplace_back("max_substep_depth must be positive");
  if (!(s.min_gap > 0.0)) r.violations.emplace_back("min_gap must be positive");
  if (s.record_stride < 1) r.violations.emplace_back("record_stride must be positive");
  if (s.max_retries < 0) r.violations.emplace_back("max_retries must be nonnegative");
  return r;
}

double reflect_1d(double& x, double r) {
  const double before = x;
  if (x > r) {
    x = 2.0 * r - x;
  } else if (x < -r) {
    x = -2.0 * r - x;
  }
  return x - before;
}

Point2 reflect_2d(Point2& x, double r) {
  const double m = norm(x);
  if (!(m > r) || !(m < 2.0 * r)) return {};
  const Point2 before = x;
  x = ((2.0 * r - m) / m) * x;
  return x - before;
}

StepResult em_step(const LabeledState& state, double dt, const ModelSpec& spec, const TruncationMode& mode,
                   const OnePointModel& rho1, const IntegratorSettings& settings, Rng& rng) {
  require_settings(settings);
  if (!(dt > 0.0)) throw SpecError("dt must be positive");
  const Stepper stepper(spec, mode, rho1, settings, stepping_order(spec));
  std::vector<double> x(state.coords().begin(), state.coords().end());
  if (!stepper.admissible(x)) throw SpecError("state is not admissible (ordering, gap or window)");
  auto substeps = stepper.step(x, dt, rng);
  return {LabeledState::from_coords(spec.dimension, x, stepper.order()), std::move(substeps)};
}

Trajectory simulate(const ModelSpec& spec, const IntegratorSettings& settings, const TruncationMode& mode,
                    const OnePointModel& rho1, const LabeledState& initial, Rng& rng) {
  require_settings(settings);
  if (const auto v = validate_spec(spec); !v.ok()) throw SpecError(v.violations.front());
  if (initial.dimension() != spec.dimension) throw DimensionError("initial state and spec dimensions differ");
  if (spec.dimension == Dimension::OneD && initial.order() != LabelOrder::AscendingValue)
    throw OrderingError("1D dynamics require AscendingValue labels");
  validate_mode(mode);
  validate_one_point(rho1);

  const Stepper stepper(spec, mode, rho1, settings, stepping_order(spec));
  std::vector<double> x(initial.coords().begin(), initial.coords().end());
  if (!stepper.admissible(x)) throw SpecError("initial state is not admissible (ordering, gap or window)");

  Trajectory traj;
  traj.spec = spec;
  traj.times.push_back(0.0);
  traj.states.push_back(initial);
  if (settings.t_end == 0.0) return traj;

  const double ratio = settings.t_end / settings.dt;
  const auto n_steps = static_cast<long long>(std::abs(ratio - std::round(ratio)) < 1e-9 ? std::round(ratio)
                                                                                          : std::ceil(ratio));
  Segment segment;
  for (long long k = 0; k < n_steps; ++k) {
    const double t0 = static_cast<double>(k) * settings.dt;
    const double h = k + 1 == n_steps ? settings.t_end - t0 : settings.dt;
    auto substeps = stepper.step(x, h, rng);
    segment.substeps.insert(segment.substeps.end(), std::make_move_iterator(substeps.begin()),
                            std::make_move_iterator(substeps.end()));
    if ((k + 1) % settings.record_stride == 0 || k + 1 == n_steps) {
      traj.times.push_back(k + 1 == n_steps ? settings.t_end : static_cast<double>(k + 1) * settings.dt);
      traj.states.push_back(LabeledState::from_coords(spec.dimension, x, stepper.order()));
      traj.noise.push_back(std::move(segment));
      segment = {};
    }
  }
  return traj;
}

BrownianReconstruction reconstruct_brownian(const Trajectory& traj, const TruncationMode& mode,
                                            const OnePointModel& rho1) {
  check_trajectory(traj);
  const IntegratorSettings settings;
  const Stepper stepper(traj.spec, mode, rho1, settings, stepping_order(traj.spec));
  auto r = empty_reconstruction(traj);
  const std::size_t dim = r.paths.size();
  std::vector<double> pot(dim, 0.0), inter(dim, 0.0), tail(dim, 0.0), bound(dim, 0.0), noise(dim, 0.0);
  for (std::size_t f = 0; f + 1 < traj.states.size(); ++f) {
    std::vector<double> x(traj.states[f].coords().begin(), traj.states[f].coords().end());
    for (const auto& sub : traj.noise[f].substeps) {
      if (sub.increments.size() != dim || sub.pushes.size() != dim)
        throw IntegrationError("substep data has the wrong size");
      const auto terms = stepper.terms(x);
      for (std::size_t c = 0; c < dim; ++c) {
        pot[c] += terms.potential[c] * sub.dt;
        inter[c] += terms.interaction[c] * sub.dt;
        tail[c] += terms.tail[c] * sub.dt;
        bound[c] += sub.pushes[c];
        noise[c] += sub.increments[c];
      }
      std::vector<double> y;
      stepper.propose(y, x, terms.total(), sub.dt, sub.increments);
      x = std::move(y);
    }
    for (std::size_t c = 0; c < dim; ++c) {
      r.potential[c][f + 1] = pot[c];
      r.interaction[c][f + 1] = inter[c];
      r.tail[c][f + 1] = tail[c];
      r.boundary[c][f + 1] = bound[c];
      r.noise[c][f + 1] = noise[c];
    }
  }
  finish_paths(r, traj);
  return r;
}

BrownianReconstruction reconstruct_brownian_from_frames(const Trajectory& traj, const TruncationMode& mode,
                                                        const OnePointModel& rho1) {
  check_trajectory(traj);
  const IntegratorSettings settings;
  const Stepper stepper(traj.spec, mode, rho1, settings, stepping_order(traj.spec));
  auto r = empty_reconstruction(traj);
  const std::size_t dim = r.paths.size();
  for (std::size_t f = 0; f + 1 < traj.states.size(); ++f) {
    const std::vector<double> x(traj.states[f].coords().begin(), traj.states[f].coords().end());
    const auto terms = stepper.terms(x);
    const double dt = traj.times[f + 1] - traj.times[f];
    for (std::size_t c = 0; c < dim; ++c) {
      double pushes = 0.0;
      double noise = 0.0;
      for (const auto& sub : traj.noise[f].substeps) {
        pushes += sub.pushes[c];
        noise += sub.increments[c];
      }
      r.potential[c][f + 1] = r.potential[c][f] + terms.potential[c] * dt;
      r.interaction[c][f + 1] = r.interaction[c][f] + terms.interaction[c] * dt;
      r.tail[c][f + 1] = r.tail[c][f] + terms.tail[c] * dt;
      r.boundary[c][f + 1] = r.boundary[c][f] + pushes;
      r.noise[c][f + 1] = r.noise[c][f] + noise;
    }
  }
  finish_paths(r, traj);
  return r;
}

double max_functional(const BrownianReconstruction& recon, std::size_t coord, double t_max) {
  if (coord >= recon.paths.size()) throw DimensionError("coordinate index out of range");
  if (recon.times.empty() || t_max > recon.times.back() + 1e-12)
    throw IntegrationError("T exceeds the recorded horizon");
  double best = recon.paths[coord][0];
  for (std::size_t f = 1; f < recon.times.size() && recon.times[f] <= t_max + 1e-12; ++f)
    best = std::max(best, recon.paths[coord][f]);
  return best;
}

}  // namespace loggas
