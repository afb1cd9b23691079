#pragma once

#include <vector>

#include "loggas/drift.hpp"
#include "loggas/model.hpp"
#include "loggas/rng.hpp"

namespace loggas {

struct IntegratorSettings {
  double dt = 1e-4;
  double t_end = 1.0;
  /// Maximum number of recursive halvings of a step that would break the ordering.
  int max_substep_depth = 20;
  /// Smallest admissible 1D gap (and 2D pair distance) after a step.
  double min_gap = 1e-9;
  int record_stride = 1;
  /// Retries of a step with fresh noise once substepping bottoms out.
  int max_retries = 5;
};

ValidationResult validate_settings(const IntegratorSettings& settings);

/// Fold-back reflection into {|x| < r}; returns the displacement applied.
double reflect_1d(double& x, double r);
/// Radial mirror x -> x (2r - |x|)/|x| for |x| > r; returns the displacement applied.
Point2 reflect_2d(Point2& x, double r);

struct StepResult {
  LabeledState state;
  std::vector<SubStep> substeps;
};

/// One Euler-Maruyama step x' = x + b(x) dt + sqrt(dt) xi, reflected into the window.
/// A step that would break the 1D ordering, come closer than min_gap, or leave the
/// window after reflection is split into two halves with a Brownian-bridge refinement of
/// its increment, recursively. Throws IntegrationError when all retries fail.
StepResult em_step(const LabeledState& state, double dt, const ModelSpec& spec, const TruncationMode& mode,
                   const OnePointModel& rho1, const IntegratorSettings& settings, Rng& rng);

/// Integrates from `initial` over [0, t_end] with ceil(t_end/dt) steps (the last one
/// shortened to land on t_end) and records every record_stride-th step plus the final
/// one. Every substep's noise and reflection push is kept.
Trajectory simulate(const ModelSpec& spec, const IntegratorSettings& settings, const TruncationMode& mode,
                    const OnePointModel& rho1, const LabeledState& initial, Rng& rng);

/// Per-coordinate cumulative quantities at each recorded frame; index [coord][frame].
struct BrownianReconstruction {
  std::vector<double> times;
  /// B^i(t) = X(t) - X(0) - int potential - int interaction - int tail - boundary.
  std::vector<std::vector<double>> paths;
  std::vector<std::vector<double>> potential;
  std::vector<std::vector<double>> interaction;
  std::vector<std::vector<double>> tail;
  std::vector<std::vector<double>> boundary;
  /// Partial sums of the stored Brownian increments.
  std::vector<std::vector<double>> noise;
  /// max |paths - noise| over all coordinates and frames.
  double max_residual = 0.0;
};

/// Replays the stored substeps, re-evaluating every drift term at the left endpoint
/// exactly as the integrator did, and forms B from the recorded frames.
BrownianReconstruction reconstruct_brownian(const Trajectory& traj, const TruncationMode& mode,
                                            const OnePointModel& rho1);

/// Same functional from the recorded frames alone: drifts are evaluated at frame
/// times and held over each frame interval. Agrees with the exact replay to O(dt).
BrownianReconstruction reconstruct_brownian_from_frames(const Trajectory& traj, const TruncationMode& mode,
                                                        const OnePointModel& rho1);

/// max over recorded frames with t <= T of the path of coordinate `coord`.
double max_functional(const BrownianReconstruction& recon, std::size_t coord, double t_max);

}  // namespace loggas
