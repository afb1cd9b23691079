#include "loggas/model.hpp"

#include <algorithm>
#include <cmath>

#include "loggas/errors.hpp"

namespace loggas {

std::optional<double> equilibrium_density_at(const ModelSpec& spec) {
  if (const auto* user = std::get_if<UserSuppliedDensity>(&spec.density)) return user->value_at_theta;
  return quadratic_equilibrium_density(spec.potential, spec.beta, spec.theta);
}

double require_rho_theta(const ModelSpec& spec) {
  const auto rho = equilibrium_density_at(spec);
  if (!rho) throw SpecError("equilibrium density unavailable: supply rho_theta for non-quadratic potentials");
  if (!(*rho > 0.0)) throw SpecError("equilibrium density nonpositive at theta");
  return *rho;
}

ValidationResult validate_spec(const ModelSpec& spec) {
  ValidationResult result;
  auto fail = [&](std::string msg) { result.violations.push_back(std::move(msg)); };

  if (!(spec.beta > 0.0) || !std::isfinite(spec.beta)) fail("beta must be positive");
  if (spec.n_particles < 1) fail("n_particles must be at least 1");
  if (!std::isfinite(spec.theta)) fail("theta must be finite");
  if (const auto* w = std::get_if<FiniteWindow>(&spec.window)) {
    if (!(w->radius > 0.0) || !std::isfinite(w->radius)) fail("window_radius must be positive");
  }
  if (spec.scaling == Scaling::Bulk) {
    if (spec.dimension != Dimension::OneD) fail("bulk scaling requires dimension 1d");
    if (std::holds_alternative<SemicircleQuadratic>(spec.density) &&
        !spec.potential.pure_quadratic_coefficient()) {
      fail("semicircle density requires a pure quadratic potential; supply rho_theta");
    } else if (spec.beta > 0.0) {
      const auto rho = equilibrium_density_at(spec);
      if (!rho || !(*rho > 0.0)) fail("equilibrium density nonpositive at theta");
    }
  }
  if (spec.dimension == Dimension::TwoD && spec.beta != 2.0) fail("planar ensembles require beta = 2");
  if (spec.ginibre) {
    const auto& g = *spec.ginibre;
    if (spec.dimension != Dimension::TwoD) fail("ginibre parameters require dimension 2d");
    if (!(g.gamma >= 0.0)) fail("ginibre gamma must be nonnegative");
    if (!(g.omega >= 0.0 && g.omega < 1.0)) fail("ginibre omega must lie in [0, 1)");
    if (!(g.c_scale > 0.0)) fail("ginibre c_scale must be positive");
    if (!std::isfinite(g.k_p)) fail("ginibre k_p must be finite");
  }
  return result;
}

namespace {

bool ordered_1d(std::span<const double> xs) {
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i - 1] < xs[i])) return false;
  }
  return true;
}

double modulus_at(Dimension dim, std::span<const double> c, std::size_t i) {
  if (dim == Dimension::OneD) return std::abs(c[i]);
  return std::hypot(c[2 * i], c[2 * i + 1]);
}

}  // namespace

bool satisfies_order(Dimension dim, std::span<const double> coords, LabelOrder order) {
  for (double c : coords) {
    if (!std::isfinite(c)) return false;
  }
  if (order == LabelOrder::AscendingValue) return dim == Dimension::OneD && ordered_1d(coords);
  if (order == LabelOrder::Tracked) return true;
  const std::size_t n = coords.size() / static_cast<std::size_t>(components(dim));
  for (std::size_t i = 1; i < n; ++i) {
    if (modulus_at(dim, coords, i - 1) > modulus_at(dim, coords, i)) return false;
  }
  return true;
}

LabeledState::LabeledState(Dimension dim, LabelOrder order, std::vector<double> coords)
    : dimension_(dim), order_(order), coords_(std::move(coords)) {}

void LabeledState::check_order() const {
  if (dimension_ == Dimension::TwoD && order_ == LabelOrder::AscendingValue)
    throw OrderingError("AscendingValue labels apply to 1D states only");
  if (!satisfies_order(dimension_, coords_, order_)) throw OrderingError("labeled state violates its label order");
}

LabeledState LabeledState::line(std::vector<double> xs, LabelOrder order) {
  LabeledState s(Dimension::OneD, order, std::move(xs));
  s.check_order();
  return s;
}

LabeledState LabeledState::plane(std::vector<Point2> points, LabelOrder order) {
  std::vector<double> c;
  c.reserve(2 * points.size());
  for (const auto& p : points) {
    c.push_back(p.x);
    c.push_back(p.y);
  }
  LabeledState s(Dimension::TwoD, order, std::move(c));
  s.check_order();
  return s;
}

LabeledState LabeledState::sorted_line(std::vector<double> xs, LabelOrder order) {
  if (order == LabelOrder::AscendingValue) {
    std::sort(xs.begin(), xs.end());
  } else {
    std::stable_sort(xs.begin(), xs.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
  }
  return line(std::move(xs), order);
}

LabeledState LabeledState::sorted_plane(std::vector<Point2> points, LabelOrder order) {
  std::stable_sort(points.begin(), points.end(), [](Point2 a, Point2 b) { return norm2(a) < norm2(b); });
  return plane(std::move(points), order);
}

LabeledState LabeledState::from_coords(Dimension dim, std::span<const double> coords, LabelOrder order) {
  LabeledState s(dim, order, std::vector<double>(coords.begin(), coords.end()));
  s.check_order();
  return s;
}

std::span<const double> LabeledState::xs() const {
  if (dimension_ != Dimension::OneD) throw DimensionError("xs() requires a 1D state");
  return coords_;
}

Point2 LabeledState::point(std::size_t i) const {
  if (dimension_ == Dimension::OneD) return {coords_.at(i), 0.0};
  return {coords_.at(2 * i), coords_.at(2 * i + 1)};
}

std::vector<Point2> LabeledState::points() const {
  std::vector<Point2> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = point(i);
  return out;
}

double LabeledState::modulus(std::size_t i) const { return modulus_at(dimension_, coords_, i); }

LabeledState LabeledState::relabeled(LabelOrder order) const {
  if (order == LabelOrder::Tracked) return from_coords(dimension_, coords_, order);
  if (dimension_ == Dimension::OneD) return sorted_line(coords_, order);
  return sorted_plane(points(), order);
}

bool is_consistent(const Trajectory& traj) {
  if (traj.times.size() != traj.states.size()) return false;
  if (traj.states.empty() || traj.noise.size() + 1 != traj.states.size()) return false;
  for (std::size_t k = 1; k < traj.times.size(); ++k) {
    if (!(traj.times[k - 1] < traj.times[k])) return false;
  }
  for (const auto& s : traj.states) {
    if (!satisfies_order(s.dimension(), s.coords(), s.order())) return false;
  }
  return true;
}

}  // namespace loggas
