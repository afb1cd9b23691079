#include "loggas/potentials.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "loggas/errors.hpp"

namespace loggas {

PolynomialPotential::PolynomialPotential(std::vector<double> coefficients) : coefficients_(std::move(coefficients)) {
  while (!coefficients_.empty() && coefficients_.back() == 0.0) coefficients_.pop_back();
  for (double c : coefficients_) {
    if (!std::isfinite(c)) throw SpecError("potential coefficients must be finite");
  }
  if (coefficients_.empty()) return;
  if (degree() % 2 != 0) throw SpecError("potential degree must be even, got " + std::to_string(degree()));
  if (coefficients_.back() <= 0.0) throw SpecError("potential leading coefficient must be positive");
}

std::optional<double> PolynomialPotential::pure_quadratic_coefficient() const {
  if (degree() != 2 || coefficients_[1] != 0.0) return std::nullopt;
  return coefficients_[2];
}

PolynomialPotential PolynomialPotential::scaled(double factor) const {
  std::vector<double> c = coefficients_;
  for (double& v : c) v *= factor;
  return PolynomialPotential(std::move(c));
}

double eval_v(const PolynomialPotential& v, double x) {
  const auto c = v.coefficients();
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double eval_v_prime(const PolynomialPotential& v, double x) {
  const auto c = v.coefficients();
  double acc = 0.0;
  for (std::size_t n = c.size(); n-- > 1;) acc = acc * x + static_cast<double>(n) * c[n];
  return acc;
}

PolynomialPotential v_beta(const PolynomialPotential& v, double beta) {
  if (beta == 1.0 || beta == 2.0) return v;
  if (beta == 4.0) return v.scaled(2.0);
  throw SpecError("V_beta is defined only for beta in {1, 2, 4}");
}

PolynomialPotential effective_potential(const PolynomialPotential& v, double beta) {
  return beta == 4.0 ? v.scaled(2.0) : v;
}

double semicircle_density(double theta) {
  if (std::abs(theta) >= std::numbers::sqrt2) return 0.0;
  return std::sqrt(2.0 - theta * theta) / std::numbers::pi;
}

std::optional<double> quadratic_equilibrium_radius(const PolynomialPotential& v, double beta) {
  const auto a = effective_potential(v, beta).pure_quadratic_coefficient();
  if (!a || beta <= 0.0) return std::nullopt;
  return std::sqrt(beta / *a);
}

std::optional<double> quadratic_equilibrium_density(const PolynomialPotential& v, double beta, double x) {
  const auto radius = quadratic_equilibrium_radius(v, beta);
  if (!radius) return std::nullopt;
  const double r2 = *radius * *radius;
  if (x * x >= r2) return 0.0;
  return 2.0 / (std::numbers::pi * r2) * std::sqrt(r2 - x * x);
}

double scaled_potential_drift(const PolynomialPotential& v, double beta, int n, double theta, double rho_theta,
                              double x) {
  const double macro = x / (static_cast<double>(n) * rho_theta) + theta;
  return -0.5 / rho_theta * eval_v_prime(effective_potential(v, beta), macro);
}

double raw_potential_drift(const PolynomialPotential& v, double beta, int n, double x) {
  return -0.5 * static_cast<double>(n) * eval_v_prime(effective_potential(v, beta), x);
}

double drift_constant_c(const PolynomialPotential& v, double theta, double rho_theta) {
  return 0.5 * eval_v_prime(v, theta) / rho_theta;
}

double drift_constant(const PolynomialPotential& v, double beta, double theta, double rho_theta) {
  const double c = drift_constant_c(v, theta, rho_theta);
  return beta == 4.0 ? 2.0 * c : c;
}

}  // namespace loggas
