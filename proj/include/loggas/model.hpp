#pragma once

#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "loggas/geometry.hpp"
#include "loggas/potentials.hpp"

namespace loggas {

enum class Dimension { OneD, TwoD };
enum class Scaling { Raw, Bulk };
/// Tracked: labels carried along a planar trajectory from an initially modulus-ordered
/// state; only finiteness is checked.
enum class LabelOrder { AscendingValue, AscendingModulus, Tracked };

inline int components(Dimension d) { return d == Dimension::OneD ? 1 : 2; }

struct InfiniteWindow {
  friend bool operator==(const InfiniteWindow&, const InfiniteWindow&) = default;
};
struct FiniteWindow {
  double radius = 1.0;
  friend bool operator==(const FiniteWindow&, const FiniteWindow&) = default;
};
/// Simulation window S_r = {|x| < r}; the unbounded window is its own alternative.
using WindowRadius = std::variant<InfiniteWindow, FiniteWindow>;

inline bool is_finite(const WindowRadius& w) { return std::holds_alternative<FiniteWindow>(w); }
inline double radius_of(const WindowRadius& w) {
  if (const auto* f = std::get_if<FiniteWindow>(&w)) return f->radius;
  return std::numeric_limits<double>::infinity();
}

/// Parameters of the strong non-Hermiticity model: gamma, omega, K_p, the density
/// constant c_scale and the complex scaling center zeta.
struct GinibreParams {
  double gamma = 0.0;
  double omega = 0.0;
  double k_p = 0.0;
  double c_scale = 1.0;
  Point2 zeta{};
  friend bool operator==(const GinibreParams&, const GinibreParams&) = default;
};

/// Everything needed to define an ensemble and its dynamics.
struct ModelSpec {
  Dimension dimension = Dimension::OneD;
  double beta = 2.0;
  PolynomialPotential potential = PolynomialPotential::quadratic();
  double theta = 0.0;
  int n_particles = 1;
  WindowRadius window = InfiniteWindow{};
  Scaling scaling = Scaling::Raw;
  EquilibriumDensity density = SemicircleQuadratic{};
  std::optional<GinibreParams> ginibre;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

/// rho_V(theta) for the spec's potential and beta, when it can be determined.
std::optional<double> equilibrium_density_at(const ModelSpec& spec);
/// Same, but throws SpecError when the density is unavailable or nonpositive.
double require_rho_theta(const ModelSpec& spec);

struct ValidationResult {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks every ModelSpec invariant; errors are returned, never thrown.
ValidationResult validate_spec(const ModelSpec& spec);

/// Ordered finite particle configuration.
///
/// AscendingValue (1D only) requires strictly increasing coordinates.
/// AscendingModulus requires |x_i| <= |x_{i+1}|. Construction checks the order and
/// throws OrderingError; the sorted_* factories establish it instead.
class LabeledState {
 public:
  LabeledState() = default;

  static LabeledState line(std::vector<double> xs, LabelOrder order = LabelOrder::AscendingValue);
  static LabeledState plane(std::vector<Point2> points, LabelOrder order = LabelOrder::AscendingModulus);
  static LabeledState sorted_line(std::vector<double> xs, LabelOrder order = LabelOrder::AscendingValue);
  static LabeledState sorted_plane(std::vector<Point2> points, LabelOrder order = LabelOrder::AscendingModulus);
  /// Builds from flattened coordinates (1 or 2 per point).
  static LabeledState from_coords(Dimension dim, std::span<const double> coords, LabelOrder order);

  Dimension dimension() const { return dimension_; }
  LabelOrder order() const { return order_; }
  std::size_t size() const { return coords_.size() / static_cast<std::size_t>(components(dimension_)); }
  bool empty() const { return coords_.empty(); }

  /// Flattened coordinates: x_0, x_1, ... in 1D; x_0, y_0, x_1, y_1, ... in 2D.
  std::span<const double> coords() const { return coords_; }
  /// 1D coordinates; throws DimensionError for planar states.
  std::span<const double> xs() const;
  Point2 point(std::size_t i) const;
  std::vector<Point2> points() const;
  double modulus(std::size_t i) const;

  /// Returns a copy relabeled (sorted) under another convention.
  LabeledState relabeled(LabelOrder order) const;

  friend bool operator==(const LabeledState&, const LabeledState&) = default;

 private:
  LabeledState(Dimension dim, LabelOrder order, std::vector<double> coords);
  void check_order() const;

  Dimension dimension_ = Dimension::OneD;
  LabelOrder order_ = LabelOrder::AscendingValue;
  std::vector<double> coords_;
};

bool satisfies_order(Dimension dim, std::span<const double> coords, LabelOrder order);

/// One accepted Euler-Maruyama substep: its length, the Brownian increments used and
/// the reflection displacement applied, per coordinate.
struct SubStep {
  double dt = 0.0;
  std::vector<double> increments;
  std::vector<double> pushes;
};

/// All substeps taken between two consecutive recorded frames.
struct Segment {
  std::vector<SubStep> substeps;
};

/// Recorded path: states at `times`, plus the full per-substep noise and boundary
/// data between frames so that the driving Brownian motion can be replayed exactly.
struct Trajectory {
  ModelSpec spec;
  std::vector<double> times;
  std::vector<LabeledState> states;
  std::vector<Segment> noise;
};

/// len(times) == len(states) == len(noise) + 1, times increasing, states ordered.
bool is_consistent(const Trajectory& traj);

/// Provenance of a run. Identical (seed, replica_id, spec) must give identical output.
struct RunContext {
  std::uint64_t seed = 0;
  std::int64_t replica_id = 0;
  std::chrono::system_clock::time_point created = std::chrono::system_clock::now();

  RunContext for_replica(std::int64_t replica) const {
    RunContext ctx = *this;
    ctx.replica_id = replica;
    return ctx;
  }
};

}  // namespace loggas
