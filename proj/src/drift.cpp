#include "loggas/drift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "loggas/errors.hpp"
#include "loggas/potentials.hpp"

namespace loggas {

namespace {

[[noreturn]] void collision(std::size_t i, std::size_t j) {
  throw CollisionError("particles " + std::to_string(i) + " and " + std::to_string(j) + " collide");
}

bool counts_1d(const TruncationMode& mode, double xi, double xj) {
  if (const auto* m = std::get_if<RelativeDistance>(&mode)) return std::abs(xi - xj) < m->r;
  if (const auto* m = std::get_if<AbsolutePosition>(&mode)) return std::abs(xj) < m->r;
  return true;
}

bool counts_2d(const TruncationMode& mode, Point2 xi, Point2 xj) {
  if (const auto* m = std::get_if<RelativeDistance>(&mode)) return norm(xi - xj) < m->r;
  if (const auto* m = std::get_if<AbsolutePosition>(&mode)) return norm(xj) < m->r;
  return true;
}

double tabulated_at(const Tabulated& t, double y) {
  const auto& g = t.grid;
  if (y < g.front() || y > g.back()) return 0.0;
  const auto it = std::upper_bound(g.begin(), g.end(), y);
  if (it == g.end()) return t.values.back();
  const auto k = static_cast<std::size_t>(it - g.begin());
  const double w = (y - g[k - 1]) / (g[k] - g[k - 1]);
  return (1.0 - w) * t.values[k - 1] + w * t.values[k];
}

void require_inside(double modulus, double r) {
  if (!(modulus < r)) throw SpecError("tail compensation requires |x| < r");
}

void check_tabulated(const Tabulated& t) {
  if (t.grid.size() < 2 || t.grid.size() != t.values.size())
    throw SpecError("tabulated one-point function needs matching grid and values of size >= 2");
  for (std::size_t k = 1; k < t.grid.size(); ++k)
    if (!(t.grid[k] > t.grid[k - 1])) throw SpecError("tabulated grid must be strictly increasing");
  for (double v : t.values)
    if (!(v >= 0.0)) throw SpecError("tabulated one-point values must be nonnegative");
}

// Angular integral of (x - y)/|x - y|^2 over the circle |y| = R by the trapezoid rule,
// doubling the node count until converged.
Point2 ring_field(Point2 x, double radius) {
  Point2 prev{1e300, 1e300};
  for (int m = 64; m <= (1 << 16); m *= 2) {
    Point2 acc{};
    const double h = 2.0 * std::numbers::pi / m;
    for (int k = 0; k < m; ++k) {
      const Point2 y{radius * std::cos(k * h), radius * std::sin(k * h)};
      const Point2 d = x - y;
      acc += (1.0 / norm2(d)) * d;
    }
    acc = (h * radius) * acc;
    if (norm(acc - prev) < 1e-10) return acc;
    prev = acc;
  }
  return prev;
}

double potential_term_1d(const ModelSpec& spec, const PolynomialPotential& veff, double rho, double s) {
  const double n = static_cast<double>(spec.n_particles);
  if (spec.scaling == Scaling::Bulk) return -0.5 / rho * eval_v_prime(veff, s / (n * rho) + spec.theta);
  return -0.5 * n * eval_v_prime(veff, s);
}

void check_state(const LabeledState& state, const ModelSpec& spec) {
  if (state.dimension() != spec.dimension) throw DimensionError("state and spec dimensions differ");
}

void add_one_body_terms(DriftTerms& terms, const LabeledState& state, const ModelSpec& spec,
                        const OnePointModel& rho1) {
  const std::size_t n = state.size();
  const bool windowed = is_finite(spec.window);
  const double r = radius_of(spec.window);
  if (spec.dimension == Dimension::OneD) {
    const auto veff = effective_potential(spec.potential, spec.beta);
    const double rho = spec.scaling == Scaling::Bulk ? require_rho_theta(spec) : 1.0;
    const auto xs = state.xs();
    for (std::size_t i = 0; i < n; ++i) {
      terms.potential[i] = potential_term_1d(spec, veff, rho, xs[i]);
      if (windowed) terms.tail[i] = tail_compensation_1d(xs[i], r, spec.beta, rho1);
    }
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    Point2 pot;
    if (spec.ginibre) {
      pot = strong_nonhermitian_extra_drift(i, state, *spec.ginibre, spec.n_particles);
    } else {
      pot = -1.0 * state.point(i);
    }
    terms.potential[2 * i] = pot.x;
    terms.potential[2 * i + 1] = pot.y;
    if (windowed) {
      const Point2 t = tail_compensation_2d(state.point(i), r, rho1);
      terms.tail[2 * i] = t.x;
      terms.tail[2 * i + 1] = t.y;
    }
  }
}

DriftTerms empty_terms(std::size_t size) {
  return {std::vector<double>(size, 0.0), std::vector<double>(size, 0.0), std::vector<double>(size, 0.0)};
}

}  // namespace

void validate_mode(const TruncationMode& mode) {
  if (const auto* m = std::get_if<RelativeDistance>(&mode); m && !(m->r > 0.0))
    throw SpecError("truncation radius must be positive");
  if (const auto* m = std::get_if<AbsolutePosition>(&mode); m && !(m->r > 0.0))
    throw SpecError("truncation radius must be positive");
}

void validate_one_point(const OnePointModel& rho1) {
  if (const auto* c = std::get_if<ConstantOutside>(&rho1)) {
    if (!(c->level >= 0.0)) throw SpecError("one-point level must be nonnegative");
  } else {
    check_tabulated(std::get<Tabulated>(rho1));
  }
}

double interaction_drift_1d(std::size_t i, const LabeledState& state, double beta, const TruncationMode& mode) {
  const auto xs = state.xs();
  if (i >= xs.size()) throw DimensionError("particle index out of range");
  double acc = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    if (j == i || !counts_1d(mode, xs[i], xs[j])) continue;
    const double d = xs[i] - xs[j];
    if (std::abs(d) < kCollisionGuard) collision(i, j);
    acc += 1.0 / d;
  }
  return 0.5 * beta * acc;
}

Point2 interaction_drift_2d(std::size_t i, const LabeledState& state, const TruncationMode& mode) {
  if (state.dimension() != Dimension::TwoD) throw DimensionError("2D interaction drift needs a planar state");
  if (i >= state.size()) throw DimensionError("particle index out of range");
  const Point2 xi = state.point(i);
  Point2 acc{};
  for (std::size_t j = 0; j < state.size(); ++j) {
    const Point2 xj = state.point(j);
    if (j == i || !counts_2d(mode, xi, xj)) continue;
    const Point2 d = xi - xj;
    const double d2 = norm2(d);
    if (d2 < kCollisionGuard * kCollisionGuard) collision(i, j);
    acc += (1.0 / d2) * d;
  }
  return acc;
}

Point2 strong_nonhermitian_extra_drift(std::size_t i, const LabeledState& state, const GinibreParams& params, int n) {
  if (state.dimension() != Dimension::TwoD) throw DimensionError("strong non-Hermiticity drift needs a planar state");
  if (i >= state.size()) throw DimensionError("particle index out of range");
  if (!(params.omega >= 0.0 && params.omega < 1.0) || !(params.gamma >= 0.0) || !(params.c_scale > 0.0))
    throw SpecError("invalid strong non-Hermiticity parameters");
  const double nn = static_cast<double>(n);
  const double root = std::sqrt(params.c_scale * nn);
  const double lead = nn / (1.0 - params.omega * params.omega);
  auto to_w = [&](Point2 x) { return params.zeta + (1.0 / root) * x; };
  const Point2 w = to_w(state.point(i));
  double collective = -nn * params.k_p;
  for (std::size_t j = 0; j < state.size(); ++j) collective += norm2(to_w(state.point(j)));
  const Point2 line2 = (-lead / root) * w;
  const Point2 line3 = (lead * 0.5 * params.omega / root) * (w + conj(w));
  const Point2 line4 = (-2.0 * params.gamma / root * collective) * w;
  return line2 + line3 + line4;
}

double tail_compensation_1d(double x, double r, double beta, const OnePointModel& rho1) {
  require_inside(std::abs(x), r);
  if (const auto* c = std::get_if<ConstantOutside>(&rho1)) {
    if (c->level == 0.0) return 0.0;
    return 0.5 * beta * c->level * std::log((r - x) / (r + x));
  }
  const auto& t = std::get<Tabulated>(rho1);
  check_tabulated(t);
  // Sum over clipped pieces of (p + q x) log((x - a)/(x - b)) - q (b - a); logs at shared
  // endpoints are computed once.
  double acc = 0.0;
  double prev_b = std::numeric_limits<double>::quiet_NaN();
  double prev_log = 0.0;
  auto log_gap = [&](double y) {
    if (y == prev_b) return prev_log;
    return std::log(std::abs(x - y));
  };
  auto piece = [&](double p, double q, double a, double b) {
    const double la = log_gap(a);
    const double lb = std::log(std::abs(x - b));
    prev_b = b;
    prev_log = lb;
    acc += (p + q * x) * (la - lb) - q * (b - a);
  };
  for (std::size_t k = 1; k < t.grid.size(); ++k) {
    const double g0 = t.grid[k - 1];
    const double g1 = t.grid[k];
    const double q = (t.values[k] - t.values[k - 1]) / (g1 - g0);
    const double p = t.values[k - 1] - q * g0;
    if (g0 < -r) piece(p, q, g0, std::min(g1, -r));
    if (g1 > r) piece(p, q, std::max(g0, r), g1);
  }
  return 0.5 * beta * acc;
}

Point2 tail_compensation_2d(Point2 x, double r, const OnePointModel& rho1) {
  require_inside(norm(x), r);
  if (std::holds_alternative<ConstantOutside>(rho1)) {
    if (!(std::get<ConstantOutside>(rho1).level >= 0.0)) throw SpecError("one-point level must be nonnegative");
    return {};
  }
  const auto& t = std::get<Tabulated>(rho1);
  check_tabulated(t);
  using Rule = boost::math::quadrature::gauss<double, 20>;
  Point2 acc{};
  for (std::size_t k = 1; k < t.grid.size(); ++k) {
    const double a = std::max(t.grid[k - 1], r);
    const double b = t.grid[k];
    if (!(b > a)) continue;
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const auto& abscissa = Rule::abscissa();
    const auto& weights = Rule::weights();
    auto node = [&](double radius, double w) {
      const double density = tabulated_at(t, radius);
      if (density != 0.0) acc += (w * half * density) * ring_field(x, radius);
    };
    for (std::size_t m = 0; m < abscissa.size(); ++m) {
      if (abscissa[m] == 0.0) {
        node(mid, weights[m]);
      } else {
        node(mid + half * abscissa[m], weights[m]);
        node(mid - half * abscissa[m], weights[m]);
      }
    }
  }
  return acc;
}

std::vector<double> DriftTerms::total() const {
  std::vector<double> out(interaction.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = interaction[k] + potential[k] + tail[k];
  return out;
}

DriftTerms drift_terms(const LabeledState& state, const ModelSpec& spec, const TruncationMode& mode,
                       const OnePointModel& rho1) {
  check_state(state, spec);
  validate_mode(mode);
  const std::size_t n = state.size();
  DriftTerms terms = empty_terms(state.coords().size());
  if (spec.dimension == Dimension::OneD) {
    for (std::size_t i = 0; i < n; ++i) terms.interaction[i] = interaction_drift_1d(i, state, spec.beta, mode);
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const Point2 d = interaction_drift_2d(i, state, mode);
      terms.interaction[2 * i] = d.x;
      terms.interaction[2 * i + 1] = d.y;
    }
  }
  add_one_body_terms(terms, state, spec, rho1);
  return terms;
}

std::vector<double> full_drift(const LabeledState& state, const ModelSpec& spec, const TruncationMode& mode,
                               const OnePointModel& rho1) {
  return drift_terms(state, spec, mode, rho1).total();
}

DriftTerms drift_terms_fast(const LabeledState& state, const ModelSpec& spec, const TruncationMode& mode,
                            const OnePointModel& rho1) {
  check_state(state, spec);
  validate_mode(mode);
  const std::size_t n = state.size();
  DriftTerms terms = empty_terms(state.coords().size());
  auto& acc = terms.interaction;
  const auto c = state.coords();
  if (spec.dimension == Dimension::OneD) {
    const auto* rel = std::get_if<RelativeDistance>(&mode);
    const auto* abs_pos = std::get_if<AbsolutePosition>(&mode);
    const bool sorted = state.order() == LabelOrder::AscendingValue;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double d = c[i] - c[j];
        if (rel && !(std::abs(d) < rel->r)) {
          if (sorted) break;
          continue;
        }
        if (std::abs(d) < kCollisionGuard) collision(i, j);
        const double inv = 1.0 / d;
        if (!abs_pos || std::abs(c[j]) < abs_pos->r) acc[i] += inv;
        if (!abs_pos || std::abs(c[i]) < abs_pos->r) acc[j] -= inv;
      }
    }
    for (double& a : acc) a *= 0.5 * spec.beta;
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const Point2 xi{c[2 * i], c[2 * i + 1]};
      for (std::size_t j = i + 1; j < n; ++j) {
        const Point2 xj{c[2 * j], c[2 * j + 1]};
        const Point2 d = xi - xj;
        const double d2 = norm2(d);
        if (const auto* rel = std::get_if<RelativeDistance>(&mode); rel && !(std::sqrt(d2) < rel->r)) continue;
        if (d2 < kCollisionGuard * kCollisionGuard) collision(i, j);
        const Point2 f = (1.0 / d2) * d;
        const auto* abs_pos = std::get_if<AbsolutePosition>(&mode);
        if (!abs_pos || norm(xj) < abs_pos->r) {
          acc[2 * i] += f.x;
          acc[2 * i + 1] += f.y;
        }
        if (!abs_pos || norm(xi) < abs_pos->r) {
          acc[2 * j] -= f.x;
          acc[2 * j + 1] -= f.y;
        }
      }
    }
  }
  add_one_body_terms(terms, state, spec, rho1);
#ifndef NDEBUG
  const DriftTerms ref = drift_terms(state, spec, mode, rho1);
  for (std::size_t k = 0; k < acc.size(); ++k) {
    if (std::abs(acc[k] - ref.interaction[k]) > 1e-12 * (1.0 + std::abs(ref.interaction[k])) * static_cast<double>(n))
      throw IntegrationError("fast drift disagrees with the reference evaluation");
  }
#endif
  return terms;
}

std::vector<double> full_drift_fast(const LabeledState& state, const ModelSpec& spec, const TruncationMode& mode,
                                    const OnePointModel& rho1) {
  return drift_terms_fast(state, spec, mode, rho1).total();
}

}  // namespace loggas
