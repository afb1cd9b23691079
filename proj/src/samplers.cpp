#include "loggas/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "loggas/errors.hpp"

namespace loggas {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Sum of logs of positive ratios, taking one log per block of eight factors.
class LogRatioSum {
 public:
  void add(double ratio) {
    product_ *= ratio;
    if (++pending_ == 8) flush();
  }
  double value() {
    flush();
    return sum_;
  }

 private:
  void flush() {
    sum_ += std::log(product_);
    product_ = 1.0;
    pending_ = 0;
  }
  double sum_ = 0.0;
  double product_ = 1.0;
  int pending_ = 0;
};

double semicircle_unit_cdf(double u) {
  // CDF of (2/pi) sqrt(1 - u^2) on [-1, 1].
  if (u <= -1.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return 0.5 + (u * std::sqrt(1.0 - u * u) + std::asin(u)) / std::numbers::pi;
}

double semicircle_unit_quantile(double p) {
  double lo = -1.0;
  double hi = 1.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (semicircle_unit_cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

void require_points(std::span<const double> coords, Dimension dim, int n) {
  if (coords.size() != static_cast<std::size_t>(n * components(dim)))
    throw DimensionError("state has " + std::to_string(coords.size() / components(dim)) + " points, expected " +
                         std::to_string(n));
}

}  // namespace

double LogDensity::delta(std::span<const double> coords, std::size_t i, std::span<const double> proposal) const {
  std::vector<double> moved(coords.begin(), coords.end());
  const std::size_t k = static_cast<std::size_t>(components(dimension()));
  std::copy(proposal.begin(), proposal.end(), moved.begin() + static_cast<std::ptrdiff_t>(i * k));
  return evaluate(moved) - evaluate(coords);
}

LogGasDensity::LogGasDensity(const ModelSpec& spec)
    : beta_(spec.beta),
      v_(effective_potential(spec.potential, spec.beta)),
      n_(static_cast<double>(spec.n_particles)),
      bulk_(spec.scaling == Scaling::Bulk) {
  if (spec.dimension != Dimension::OneD) throw DimensionError("log-gas density requires a 1D spec");
  if (bulk_) {
    rho_ = require_rho_theta(spec);
    theta_ = spec.theta;
  }
}

double LogGasDensity::confinement(double s) const {
  const double x = bulk_ ? s / (n_ * rho_) + theta_ : s;
  return n_ * eval_v(v_, x);
}

double LogGasDensity::evaluate(std::span<const double> s) const {
  require_points(s, Dimension::OneD, static_cast<int>(n_));
  double pair = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      const double d = std::abs(s[i] - s[j]);
      if (d == 0.0) return kNegInf;
      pair += std::log(d);
    }
  }
  double conf = 0.0;
  for (double x : s) conf += confinement(x);
  return beta_ * pair - conf;
}

double LogGasDensity::delta(std::span<const double> s, std::size_t i, std::span<const double> proposal) const {
  const double a = s[i];
  const double b = proposal[0];
  LogRatioSum pair;
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (j == i) continue;
    const double num = std::abs(b - s[j]);
    if (num == 0.0) return kNegInf;
    pair.add(num / std::abs(a - s[j]));
  }
  return beta_ * pair.value() - (confinement(b) - confinement(a));
}

double GinibreDensity::evaluate(std::span<const double> c) const {
  const std::size_t n = c.size() / 2;
  double pair = 0.0;
  double conf = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    conf += c[2 * i] * c[2 * i] + c[2 * i + 1] * c[2 * i + 1];
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = c[2 * i] - c[2 * j];
      const double dy = c[2 * i + 1] - c[2 * j + 1];
      const double d2 = dx * dx + dy * dy;
      if (d2 == 0.0) return kNegInf;
      pair += std::log(d2);  // 2 log|d|
    }
  }
  return pair - conf;
}

double GinibreDensity::delta(std::span<const double> c, std::size_t i, std::span<const double> p) const {
  const std::size_t n = c.size() / 2;
  const double ax = c[2 * i];
  const double ay = c[2 * i + 1];
  LogRatioSum pair;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) continue;
    const double bx = p[0] - c[2 * j];
    const double by = p[1] - c[2 * j + 1];
    const double nb = bx * bx + by * by;
    if (nb == 0.0) return kNegInf;
    const double qx = ax - c[2 * j];
    const double qy = ay - c[2 * j + 1];
    pair.add(nb / (qx * qx + qy * qy));
  }
  return pair.value() - ((p[0] * p[0] + p[1] * p[1]) - (ax * ax + ay * ay));
}

StrongNonHermitianDensity::StrongNonHermitianDensity(GinibreParams params, int n)
    : params_(params), n_(static_cast<double>(n)) {
  if (!(params.omega >= 0.0 && params.omega < 1.0) || !(params.gamma >= 0.0))
    throw SpecError("invalid strong non-Hermiticity parameters");
}

double StrongNonHermitianDensity::one_body(double x, double y) const {
  const double w = params_.omega;
  // z^2 + conj(z)^2 = 2x^2 - 2y^2
  return -n_ / (1.0 - w * w) * ((x * x + y * y) - 0.5 * w * (2.0 * x * x - 2.0 * y * y));
}

double StrongNonHermitianDensity::evaluate(std::span<const double> c) const {
  require_points(c, Dimension::TwoD, static_cast<int>(n_));
  const std::size_t n = c.size() / 2;
  double pair = 0.0;
  double body = 0.0;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = c[2 * i];
    const double y = c[2 * i + 1];
    body += one_body(x, y);
    sum_sq += x * x + y * y;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x - c[2 * j];
      const double dy = y - c[2 * j + 1];
      const double d2 = dx * dx + dy * dy;
      if (d2 == 0.0) return kNegInf;
      pair += std::log(d2);
    }
  }
  const double collective = sum_sq - n_ * params_.k_p;
  return pair + body - params_.gamma * collective * collective;
}

double StrongNonHermitianDensity::delta(std::span<const double> c, std::size_t i, std::span<const double> p) const {
  const std::size_t n = c.size() / 2;
  const double ax = c[2 * i];
  const double ay = c[2 * i + 1];
  LogRatioSum ratios;
  double sum_sq = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    sum_sq += c[2 * j] * c[2 * j] + c[2 * j + 1] * c[2 * j + 1];
    if (j == i) continue;
    const double bx = p[0] - c[2 * j];
    const double by = p[1] - c[2 * j + 1];
    const double nb = bx * bx + by * by;
    if (nb == 0.0) return kNegInf;
    const double qx = ax - c[2 * j];
    const double qy = ay - c[2 * j + 1];
    ratios.add(nb / (qx * qx + qy * qy));
  }
  const double pair = ratios.value();
  const double old_c = sum_sq - n_ * params_.k_p;
  const double new_c = old_c - (ax * ax + ay * ay) + (p[0] * p[0] + p[1] * p[1]);
  return pair + one_body(p[0], p[1]) - one_body(ax, ay) - params_.gamma * (new_c * new_c - old_c * old_c);
}

std::unique_ptr<LogDensity> make_log_density(const ModelSpec& spec) {
  if (spec.dimension == Dimension::OneD) return std::make_unique<LogGasDensity>(spec);
  if (spec.ginibre) return std::make_unique<StrongNonHermitianDensity>(*spec.ginibre, spec.n_particles);
  return std::make_unique<GinibreDensity>();
}

double log_density_log_gas(const ModelSpec& spec, const LabeledState& state) {
  if (state.dimension() != Dimension::OneD) throw DimensionError("log-gas density requires a 1D state");
  return LogGasDensity(spec).evaluate(state.coords());
}

double log_density_ginibre(const LabeledState& state, int n) {
  if (state.dimension() != Dimension::TwoD) throw DimensionError("Ginibre density requires a 2D state");
  require_points(state.coords(), Dimension::TwoD, n);
  return GinibreDensity().evaluate(state.coords());
}

double log_density_strong_nonhermitian(const LabeledState& state, const GinibreParams& params, int n) {
  if (state.dimension() != Dimension::TwoD) throw DimensionError("strong non-Hermiticity density requires a 2D state");
  return StrongNonHermitianDensity(params, n).evaluate(state.coords());
}

ValidationResult validate_settings(const McmcSettings& s) {
  ValidationResult r;
  if (s.n_sweeps < 1) r.violations.emplace_back("n_sweeps must be positive");
  if (s.burn_in < 1) r.violations.emplace_back("burn_in must be positive");
  if (s.burn_in >= s.n_sweeps) r.violations.emplace_back("burn_in must be smaller than n_sweeps");
  if (!(s.proposal_scale > 0.0)) r.violations.emplace_back("proposal_scale must be positive");
  if (s.thinning < 1) r.violations.emplace_back("thinning must be positive");
  return r;
}

LabeledState initial_configuration(const ModelSpec& spec, Rng& rng) {
  const int n = spec.n_particles;
  if (spec.dimension == Dimension::OneD) {
    const double radius = quadratic_equilibrium_radius(spec.potential, spec.beta).value_or(std::numbers::sqrt2);
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      xs[static_cast<std::size_t>(k)] = radius * semicircle_unit_quantile((k + 0.5) / n);
    }
    if (spec.scaling == Scaling::Bulk) {
      const double rho = require_rho_theta(spec);
      for (double& x : xs) x = n * rho * (x - spec.theta);
    }
    return LabeledState::sorted_line(std::move(xs));
  }
  double ax = std::sqrt(static_cast<double>(n));
  double ay = ax;
  if (spec.ginibre) {
    ax = 1.0 + spec.ginibre->omega;
    ay = 1.0 - spec.ginibre->omega;
  }
  std::vector<Point2> pts(static_cast<std::size_t>(n));
  for (auto& p : pts) {
    const double rad = std::sqrt(rng.uniform());
    const double ang = 2.0 * std::numbers::pi * rng.uniform();
    p = {ax * rad * std::cos(ang), ay * rad * std::sin(ang)};
  }
  return LabeledState::sorted_plane(std::move(pts));
}

McmcRun mcmc_run(const ModelSpec& spec, const LogDensity& density, const McmcSettings& settings, Rng& rng,
                 const LabeledState& initial) {
  if (const auto v = validate_settings(settings); !v.ok()) throw SpecError(v.violations.front());
  if (density.dimension() != spec.dimension || initial.dimension() != spec.dimension)
    throw DimensionError("MCMC density, spec and initial state dimensions differ");
  const std::size_t k = static_cast<std::size_t>(components(spec.dimension));
  std::vector<double> coords(initial.coords().begin(), initial.coords().end());
  const std::size_t n = coords.size() / k;

  double current = density.evaluate(coords);
  for (int retry = 0; !std::isfinite(current); ++retry) {
    if (retry >= settings.max_init_retries)
      throw SpecError("log-density is not finite at the initial configuration");
    for (double& c : coords) c += 1e-6 * rng.normal();
    current = density.evaluate(coords);
  }

  const LabelOrder order =
      spec.dimension == Dimension::OneD ? LabelOrder::AscendingValue : LabelOrder::AscendingModulus;
  McmcRun run;
  double scale = settings.proposal_scale;
  std::size_t window_accepts = 0;
  std::size_t window_moves = 0;
  std::size_t accepts = 0;
  std::size_t moves = 0;
  std::vector<double> proposal(k);

  for (int sweep = 1; sweep <= settings.n_sweeps; ++sweep) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < k; ++c) proposal[c] = coords[i * k + c] + scale * rng.normal();
      const double d = density.delta(coords, i, proposal);
      const double u = rng.uniform();
      ++window_moves;
      if (sweep > settings.burn_in) ++moves;
      if (std::isfinite(d) && std::log(u) < log_acceptance(0.0, d)) {
        for (std::size_t c = 0; c < k; ++c) coords[i * k + c] = proposal[c];
        current += d;
        ++window_accepts;
        if (sweep > settings.burn_in) ++accepts;
      }
    }
    if (settings.adapt_scale && sweep <= settings.burn_in && sweep % 25 == 0) {
      const double rate = static_cast<double>(window_accepts) / static_cast<double>(window_moves);
      scale *= std::exp(rate - 0.3);
      window_accepts = 0;
      window_moves = 0;
    }
    if (sweep > settings.burn_in && (sweep - settings.burn_in) % settings.thinning == 0) {
      if (spec.dimension == Dimension::OneD) {
        run.samples.push_back(LabeledState::sorted_line(coords, order));
      } else {
        std::vector<Point2> pts(n);
        for (std::size_t i = 0; i < n; ++i) pts[i] = {coords[2 * i], coords[2 * i + 1]};
        run.samples.push_back(LabeledState::sorted_plane(std::move(pts), order));
      }
    }
  }
  run.acceptance_rate = moves ? static_cast<double>(accepts) / static_cast<double>(moves) : 0.0;
  run.final_proposal_scale = scale;
  return run;
}

McmcRun mcmc_run(const ModelSpec& spec, const LogDensity& density, const McmcSettings& settings, Rng& rng) {
  const LabeledState initial = initial_configuration(spec, rng);
  return mcmc_run(spec, density, settings, rng, initial);
}

std::vector<LabeledState> mcmc_sample(const ModelSpec& spec, const LogDensity& density, const McmcSettings& settings,
                                      Rng& rng) {
  return mcmc_run(spec, density, settings, rng).samples;
}

std::size_t sturm_count(std::span<const double> diag, std::span<const double> offdiag, double x) {
  constexpr double kPivotMin = 1e-300;
  std::size_t count = 0;
  double q = diag[0] - x;
  if (std::abs(q) < kPivotMin) q = -kPivotMin;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < diag.size(); ++i) {
    q = diag[i] - x - offdiag[i - 1] * offdiag[i - 1] / q;
    if (std::abs(q) < kPivotMin) q = -kPivotMin;
    if (q < 0.0) ++count;
  }
  return count;
}

std::vector<double> tridiagonal_eigenvalues(std::span<const double> diag, std::span<const double> offdiag,
                                            double abs_tol) {
  const std::size_t n = diag.size();
  if (n == 0) return {};
  if (offdiag.size() + 1 != n) throw DimensionError("offdiagonal must have n - 1 entries");
  double gl = std::numeric_limits<double>::infinity();
  double gu = -gl;
  for (std::size_t i = 0; i < n; ++i) {
    const double radius = (i > 0 ? std::abs(offdiag[i - 1]) : 0.0) + (i + 1 < n ? std::abs(offdiag[i]) : 0.0);
    gl = std::min(gl, diag[i] - radius);
    gu = std::max(gu, diag[i] + radius);
  }
  const double pad = abs_tol + 1e-14 * std::max(std::abs(gl), std::abs(gu));
  gl -= pad;
  gu += pad;

  std::vector<double> upper(n, gu);
  std::vector<double> eig(n);
  double prev_lo = gl;
  for (std::size_t k = 0; k < n; ++k) {
    double lo = prev_lo;
    double hi = upper[k];
    while (hi - lo > abs_tol) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const std::size_t c = sturm_count(diag, offdiag, mid);
      if (c > k) {
        hi = mid;
        for (std::size_t j = k + 1; j < c; ++j) upper[j] = std::min(upper[j], mid);
      } else {
        lo = mid;
      }
    }
    eig[k] = 0.5 * (lo + hi);
    prev_lo = lo;
  }
  return eig;
}

LabeledState tridiagonal_gaussian_beta_sample(int n, double beta, Rng& rng) {
  if (beta != 1.0 && beta != 2.0 && beta != 4.0) throw SpecError("tridiagonal sampler supports beta in {1, 2, 4}");
  if (n < 1) throw SpecError("n must be positive");
  const auto un = static_cast<std::size_t>(n);
  std::vector<double> diag(un);
  std::vector<double> off(un - 1);
  for (auto& d : diag) d = rng.normal();  // N(0, 2) / sqrt 2
  for (std::size_t i = 0; i + 1 < un; ++i) {
    off[i] = std::sqrt(rng.chi_squared(beta * static_cast<double>(un - 1 - i))) / std::numbers::sqrt2;
  }
  // Raw spectrum has density prop. to |Delta|^beta exp(-sum l^2 / 2); match exp(-N V_beta(x)).
  const double scale = beta == 4.0 ? 2.0 * std::sqrt(static_cast<double>(n)) : std::sqrt(2.0 * n);
  auto eig = tridiagonal_eigenvalues(diag, off, 1e-10);
  for (double& e : eig) e /= scale;
  return LabeledState::sorted_line(std::move(eig));
}

LabeledState bulk_rescale(const LabeledState& state, int n, double rho_theta, double theta) {
  std::vector<double> s(state.xs().begin(), state.xs().end());
  for (double& x : s) x = n * rho_theta * (x - theta);
  return LabeledState::sorted_line(std::move(s), state.order());
}

LabeledState bulk_unscale(const LabeledState& state, int n, double rho_theta, double theta) {
  std::vector<double> x(state.xs().begin(), state.xs().end());
  for (double& s : x) s = s / (n * rho_theta) + theta;
  return LabeledState::sorted_line(std::move(x), state.order());
}

LabeledState poisson_init(const WindowRadius& window, double intensity, Dimension dimension, Rng& rng) {
  if (!is_finite(window)) throw SpecError("poisson_init requires a finite window");
  if (intensity < 0.0) throw SpecError("intensity must be nonnegative");
  const double r = radius_of(window);
  if (dimension == Dimension::OneD) {
    const auto count = rng.poisson(intensity * 2.0 * r);
    std::vector<double> xs(count);
    for (auto& x : xs) x = r * (2.0 * rng.uniform() - 1.0);
    return LabeledState::sorted_line(std::move(xs));
  }
  const auto count = rng.poisson(intensity * std::numbers::pi * r * r);
  std::vector<Point2> pts(count);
  for (auto& p : pts) {
    const double rad = r * std::sqrt(rng.uniform());
    const double ang = 2.0 * std::numbers::pi * rng.uniform();
    p = {rad * std::cos(ang), rad * std::sin(ang)};
  }
  return LabeledState::sorted_plane(std::move(pts));
}

}  // namespace loggas
