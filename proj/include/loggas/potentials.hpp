#pragma once

#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace loggas {

/// Real polynomial confining potential V(t) = sum_n v_n t^n.
///
/// A nonzero potential must have even degree and a positive leading coefficient.
/// The zero polynomial is accepted and describes a free (unconfined) gas.
class PolynomialPotential {
 public:
  PolynomialPotential() = default;
  /// Coefficients v_0, v_1, ... in increasing degree. Trailing zeros are dropped.
  explicit PolynomialPotential(std::vector<double> coefficients);

  static PolynomialPotential quadratic() { return PolynomialPotential({0.0, 0.0, 1.0}); }
  static PolynomialPotential zero() { return PolynomialPotential(); }

  std::span<const double> coefficients() const { return coefficients_; }
  int degree() const { return static_cast<int>(coefficients_.size()) - 1; }
  bool is_zero() const { return coefficients_.empty(); }
  /// a for V = a t^2 + const, otherwise nullopt.
  std::optional<double> pure_quadratic_coefficient() const;
  PolynomialPotential scaled(double factor) const;

  friend bool operator==(const PolynomialPotential&, const PolynomialPotential&) = default;

 private:
  std::vector<double> coefficients_;
};

/// Horner evaluation of V(x).
double eval_v(const PolynomialPotential& v, double x);
/// V'(x).
double eval_v_prime(const PolynomialPotential& v, double x);

/// V_beta: V for beta in {1,2}, 2V for beta = 4. Throws SpecError for other beta.
PolynomialPotential v_beta(const PolynomialPotential& v, double beta);
/// V_beta where defined; for other beta (MCMC-only ensembles) the potential is used as is.
PolynomialPotential effective_potential(const PolynomialPotential& v, double beta);

/// Wigner semicircle (1/pi) sqrt(2 - x^2) on |x| < sqrt 2, zero elsewhere.
double semicircle_density(double theta);

/// Half-width of the equilibrium support for V = a x^2 at inverse temperature beta,
/// sqrt(beta / a_beta) with a_beta the x^2 coefficient of V_beta.
std::optional<double> quadratic_equilibrium_radius(const PolynomialPotential& v, double beta);
/// Equilibrium density of a pure quadratic potential: semicircle of the radius above.
std::optional<double> quadratic_equilibrium_density(const PolynomialPotential& v, double beta, double x);

struct SemicircleQuadratic {
  friend bool operator==(const SemicircleQuadratic&, const SemicircleQuadratic&) = default;
};
struct UserSuppliedDensity {
  double value_at_theta = 0.0;
  friend bool operator==(const UserSuppliedDensity&, const UserSuppliedDensity&) = default;
};
/// Equilibrium density at the scaling point: analytic for quadratic V, otherwise supplied.
using EquilibriumDensity = std::variant<SemicircleQuadratic, UserSuppliedDensity>;

/// The confining part of the bulk-scaled drift,
/// -(1/2) (1/rho) V_beta'(x / (N rho) + theta).
double scaled_potential_drift(const PolynomialPotential& v, double beta, int n, double theta, double rho_theta,
                              double x);

/// Confining drift in the macroscopic frame, -(N/2) V_beta'(x).
double raw_potential_drift(const PolynomialPotential& v, double beta, int n, double x);

/// c = (1/2) V'(theta) / rho(theta): the constant that the scaled potential drift
/// converges to (with a minus sign) as N grows.
double drift_constant_c(const PolynomialPotential& v, double theta, double rho_theta);

/// C(beta): c for beta in {1,2}, 2c for beta = 4.
double drift_constant(const PolynomialPotential& v, double beta, double theta, double rho_theta);

}  // namespace loggas
