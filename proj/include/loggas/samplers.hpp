#pragma once

#include <memory>
#include <span>
#include <vector>

#include "loggas/model.hpp"
#include "loggas/rng.hpp"

namespace loggas {

/// Unnormalized log-density of a labeled N-point configuration in flattened coordinates.
class LogDensity {
 public:
  virtual ~LogDensity() = default;
  virtual Dimension dimension() const = 0;
  virtual double evaluate(std::span<const double> coords) const = 0;
  /// log p(coords with point i replaced by `proposal`) - log p(coords).
  /// The default evaluates the density twice; subclasses provide O(N) updates.
  virtual double delta(std::span<const double> coords, std::size_t i, std::span<const double> proposal) const;
};

/// beta sum_{i<j} log|s_i - s_j| - N sum_k V_beta(s_k / (N rho) + theta) in the bulk frame,
/// or with s_k itself as argument of V_beta in the raw frame.
class LogGasDensity final : public LogDensity {
 public:
  explicit LogGasDensity(const ModelSpec& spec);
  Dimension dimension() const override { return Dimension::OneD; }
  double evaluate(std::span<const double> coords) const override;
  double delta(std::span<const double> coords, std::size_t i, std::span<const double> proposal) const override;

 private:
  double confinement(double s) const;
  double beta_;
  PolynomialPotential v_;
  double n_;
  double rho_ = 1.0;
  double theta_ = 0.0;
  bool bulk_;
};

/// Ginibre eigenvalue density: sum_{i<j} 2 log|x_i - x_j| - sum_k |x_k|^2.
class GinibreDensity final : public LogDensity {
 public:
  Dimension dimension() const override { return Dimension::TwoD; }
  double evaluate(std::span<const double> coords) const override;
  double delta(std::span<const double> coords, std::size_t i, std::span<const double> proposal) const override;
};

/// Normal-matrix model with strong non-Hermiticity:
/// sum 2 log|z_i - z_j| - N/(1 - w^2) (sum |z|^2 - (w/2) sum (z^2 + conj(z)^2)) - g (sum |z|^2 - N K_p)^2.
class StrongNonHermitianDensity final : public LogDensity {
 public:
  StrongNonHermitianDensity(GinibreParams params, int n);
  Dimension dimension() const override { return Dimension::TwoD; }
  double evaluate(std::span<const double> coords) const override;
  double delta(std::span<const double> coords, std::size_t i, std::span<const double> proposal) const override;

 private:
  double one_body(double x, double y) const;
  GinibreParams params_;
  double n_;
};

/// Density matching the spec: log-gas in 1D, plain Ginibre in 2D unless Ginibre
/// parameters are present.
std::unique_ptr<LogDensity> make_log_density(const ModelSpec& spec);

double log_density_log_gas(const ModelSpec& spec, const LabeledState& state);
double log_density_ginibre(const LabeledState& state, int n);
double log_density_strong_nonhermitian(const LabeledState& state, const GinibreParams& params, int n);

struct McmcSettings {
  int n_sweeps = 2000;
  int burn_in = 500;
  double proposal_scale = 0.5;
  int thinning = 10;
  /// Tune proposal_scale toward 0.3 acceptance during burn-in.
  bool adapt_scale = true;
  int max_init_retries = 100;
};

ValidationResult validate_settings(const McmcSettings& settings);

/// log of the Metropolis acceptance probability min(1, p(to)/p(from)).
inline double log_acceptance(double log_from, double log_to) { return log_to - log_from < 0.0 ? log_to - log_from : 0.0; }
/// log of p(from) * alpha(from -> to) = min(log p(from), log p(to)); symmetric in its arguments.
inline double log_flux(double log_from, double log_to) { return log_from < log_to ? log_from : log_to; }

struct McmcRun {
  std::vector<LabeledState> samples;
  double acceptance_rate = 0.0;
  double final_proposal_scale = 0.0;
};

/// Single-site Gaussian random-walk Metropolis. Returns (n_sweeps - burn_in) / thinning
/// states, each sorted per the dimension's label convention.
McmcRun mcmc_run(const ModelSpec& spec, const LogDensity& density, const McmcSettings& settings, Rng& rng,
                 const LabeledState& initial);
McmcRun mcmc_run(const ModelSpec& spec, const LogDensity& density, const McmcSettings& settings, Rng& rng);
std::vector<LabeledState> mcmc_sample(const ModelSpec& spec, const LogDensity& density, const McmcSettings& settings,
                                      Rng& rng);

/// Deterministic starting configuration for MCMC: equilibrium quantiles in 1D, a
/// uniform disk (or ellipse for the strong non-Hermiticity model) in 2D.
LabeledState initial_configuration(const ModelSpec& spec, Rng& rng);

/// Number of eigenvalues of the symmetric tridiagonal matrix below x (Sturm count).
std::size_t sturm_count(std::span<const double> diag, std::span<const double> offdiag, double x);

/// All eigenvalues, ascending, by Sturm-sequence bisection to absolute tolerance abs_tol.
std::vector<double> tridiagonal_eigenvalues(std::span<const double> diag, std::span<const double> offdiag,
                                            double abs_tol = 1e-10);

/// Gaussian beta-ensemble sample (beta in {1,2,4}) via the Dumitriu-Edelman tridiagonal model,
/// rescaled so that its joint density is prod |x_i - x_j|^beta exp(-N sum V_beta(x_k)) with V = x^2.
LabeledState tridiagonal_gaussian_beta_sample(int n, double beta, Rng& rng);

/// x -> N rho (x - theta).
LabeledState bulk_rescale(const LabeledState& state, int n, double rho_theta, double theta);
/// s -> s / (N rho) + theta.
LabeledState bulk_unscale(const LabeledState& state, int n, double rho_theta, double theta);

/// Poisson(intensity * |window|) uniform points in a finite window.
LabeledState poisson_init(const WindowRadius& window, double intensity, Dimension dimension, Rng& rng);

}  // namespace loggas
