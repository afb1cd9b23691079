#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <numeric>

#include "loggas/errors.hpp"
#include "loggas/estimators.hpp"
#include "loggas/potentials.hpp"
#include "loggas/samplers.hpp"

using namespace loggas;
using std::numbers::pi;

namespace {

ModelSpec free_line(int n) {
  ModelSpec s;
  s.n_particles = n;
  s.potential = PolynomialPotential::zero();
  return s;
}

ModelSpec gaussian_line(int n, double beta = 2.0) {
  ModelSpec s;
  s.n_particles = n;
  s.beta = beta;
  return s;
}

double semicircle_moment(int k) {
  auto f = [k](double x) { return std::pow(x, k) * std::sqrt(2.0 - x * x) / pi; };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, -std::sqrt(2.0), std::sqrt(2.0), 15, 1e-14);
}

double mean_power(const std::vector<LabeledState>& samples, int k) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& s : samples)
    for (double x : s.xs()) {
      sum += std::pow(x, k);
      ++count;
    }
  return sum / static_cast<double>(count);
}

}  // namespace

TEST_CASE("log_density_log_gas examples") {
  CHECK(log_density_log_gas(free_line(2), LabeledState::line({0, 1})) == 0.0);
  CHECK(log_density_log_gas(free_line(2), LabeledState::line({0, 2})) == doctest::Approx(2 * std::log(2.0)));
  const std::vector<double> coincident{0.0, 0.0};
  CHECK(LogGasDensity(free_line(2)).evaluate(coincident) == -std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(log_density_log_gas(free_line(1), LabeledState::plane({{0, 0}})), DimensionError);
}

TEST_CASE("log_density_log_gas bulk frame") {
  ModelSpec s = gaussian_line(3);
  s.scaling = Scaling::Bulk;
  s.theta = 0.5;
  s.window = FiniteWindow{5};
  const double rho = semicircle_density(0.5);
  const std::vector<double> pts{-1.0, 0.3, 2.0};
  double expected = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j) expected += 2.0 * std::log(std::abs(pts[i] - pts[j]));
  for (double p : pts) expected -= 3.0 * std::pow(p / (3 * rho) + 0.5, 2);
  CHECK(log_density_log_gas(s, LabeledState::line(pts)) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("log_density_log_gas is permutation invariant") {
  const LogGasDensity d(gaussian_line(5));
  std::vector<double> pts{-0.7, -0.1, 0.2, 0.9, 1.3};
  const double base = d.evaluate(pts);
  std::sort(pts.begin(), pts.end());
  int checked = 0;
  while (std::next_permutation(pts.begin(), pts.end())) {
    CHECK(d.evaluate(pts) == doctest::Approx(base).epsilon(1e-14));
    ++checked;
  }
  CHECK(checked == 119);
}

TEST_CASE("log_density_ginibre examples") {
  CHECK(log_density_ginibre(LabeledState::plane({{0, 0}}), 1) == 0.0);
  CHECK(log_density_ginibre(LabeledState::plane({{1, 0}}), 1) == -1.0);
  CHECK(log_density_ginibre(LabeledState::plane({{0, 0}, {1, 0}}), 2) == doctest::Approx(-1.0));
}

TEST_CASE("log_density_strong_nonhermitian examples") {
  CHECK(log_density_strong_nonhermitian(LabeledState::plane({{0, 0}}), {}, 1) == 0.0);
  CHECK(log_density_strong_nonhermitian(LabeledState::plane({{1, 0}}), {}, 1) == doctest::Approx(-1.0));
  GinibreParams half;
  half.omega = 0.5;
  // -(1/(1 - w^2)) (|z|^2 - (w/2)(z^2 + conj(z)^2)) = -(4/3)(1 - 1/2)
  CHECK(log_density_strong_nonhermitian(LabeledState::plane({{1, 0}}), half, 1) == doctest::Approx(-2.0 / 3.0));
  GinibreParams g{0.3, 0.2, 1.0, 1.0, {}};
  const double expected_one_body = -(2.0 / (1 - 0.04)) * (5.0 - 0.1 * (2 * 1 - 2 * 4 + 2 * 0 - 0)) -
                                   0.3 * std::pow(5.0 - 2.0, 2);
  const auto st = LabeledState::sorted_plane({{1, 2}, {0, 0}});
  CHECK(log_density_strong_nonhermitian(st, g, 2) ==
        doctest::Approx(expected_one_body + 2 * std::log(std::sqrt(5.0))).epsilon(1e-13));
}

TEST_CASE("single-site delta matches full re-evaluation") {
  Rng rng(3);
  ModelSpec planar;
  planar.dimension = Dimension::TwoD;
  planar.n_particles = 8;
  ModelSpec snh = planar;
  snh.ginibre = GinibreParams{0.4, 0.3, 0.8, 1.0, {}};
  ModelSpec bulk = gaussian_line(8, 4.0);
  bulk.scaling = Scaling::Bulk;
  bulk.theta = -0.3;
  bulk.window = FiniteWindow{4};
  for (const auto& spec : {gaussian_line(8, 1.0), bulk, planar, snh}) {
    const auto density = make_log_density(spec);
    const int comps = components(spec.dimension);
    std::vector<double> coords(8 * static_cast<std::size_t>(comps));
    for (auto& c : coords) c = rng.normal();
    for (std::size_t i = 0; i < 8; ++i) {
      std::vector<double> proposal(static_cast<std::size_t>(comps));
      for (auto& p : proposal) p = rng.normal();
      auto moved = coords;
      std::copy(proposal.begin(), proposal.end(), moved.begin() + static_cast<std::ptrdiff_t>(i * proposal.size()));
      const double full = density->evaluate(moved) - density->evaluate(coords);
      CHECK(density->delta(coords, i, proposal) == doctest::Approx(full).epsilon(1e-10));
    }
  }
}

TEST_CASE("Metropolis acceptance satisfies detailed balance exactly") {
  Rng rng(5);
  for (int k = 0; k < 10000; ++k) {
    const double a = 50 * rng.normal(), b = 50 * rng.normal();
    const double d = b - a;
    CHECK(log_acceptance(0.0, d) - log_acceptance(0.0, -d) == d);
    CHECK(log_flux(a, b) == log_flux(b, a));
    CHECK(log_acceptance(a, b) <= 0.0);
  }
}

TEST_CASE("McmcSettings validation") {
  CHECK(validate_settings(McmcSettings{}).ok());
  CHECK_FALSE(validate_settings(McmcSettings{100, 100, 0.5, 1}).ok());
  CHECK_FALSE(validate_settings(McmcSettings{100, 10, 0.0, 1}).ok());
  CHECK_FALSE(validate_settings(McmcSettings{100, 10, 0.5, 0}).ok());
}

TEST_CASE("mcmc output shape and ordering") {
  Rng rng(1);
  const auto spec = gaussian_line(6);
  const McmcSettings settings{300, 100, 0.5, 20};
  const auto run = mcmc_run(spec, *make_log_density(spec), settings, rng);
  CHECK(run.samples.size() == 10);
  for (const auto& s : run.samples) CHECK(s.order() == LabelOrder::AscendingValue);
  CHECK(run.acceptance_rate > 0.0);
  CHECK(run.acceptance_rate < 1.0);
}

TEST_CASE("mcmc two-particle centre is symmetric") {
  Rng rng(2);
  const auto spec = gaussian_line(2);
  const auto samples = mcmc_sample(spec, *make_log_density(spec), {40000, 1000, 0.5, 10}, rng);
  std::vector<double> sums;
  for (const auto& s : samples) sums.push_back(s.xs()[0] + s.xs()[1]);
  const double mean = std::accumulate(sums.begin(), sums.end(), 0.0) / static_cast<double>(sums.size());
  double var = 0.0;
  for (double v : sums) var += (v - mean) * (v - mean);
  var /= static_cast<double>(sums.size() - 1);
  CHECK(std::abs(mean) <= 3.0 * std::sqrt(var / static_cast<double>(sums.size())) * 2.0);
}

TEST_CASE("tiny proposals are almost always accepted") {
  Rng rng(4);
  const auto spec = gaussian_line(10);
  McmcSettings settings{200, 50, 1e-8, 10};
  settings.adapt_scale = false;
  const auto run = mcmc_run(spec, *make_log_density(spec), settings, rng);
  CHECK(run.acceptance_rate > 0.999);
}

TEST_CASE("mcmc second moment in the raw frame") {
  Rng rng(6);
  const auto spec = gaussian_line(50);
  const auto samples = mcmc_sample(spec, *make_log_density(spec), {6000, 1000, 0.3, 50}, rng);
  CHECK(mean_power(samples, 2) == doctest::Approx(semicircle_moment(2)).epsilon(0.05));
  CHECK(semicircle_moment(2) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("sturm count and bisection against Eigen") {
  Rng rng(8);
  for (int n : {1, 2, 5, 40, 200}) {
    std::vector<double> d(static_cast<std::size_t>(n)), e(static_cast<std::size_t>(n - 1));
    for (auto& v : d) v = rng.normal();
    for (auto& v : e) v = rng.normal();
    if (n > 3) e[1] = 0.0;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = d[static_cast<std::size_t>(i)];
    for (int i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = e[static_cast<std::size_t>(i)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    const auto got = tridiagonal_eigenvalues(d, e);
    REQUIRE(got.size() == static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) CHECK(std::abs(got[static_cast<std::size_t>(i)] - solver.eigenvalues()(i)) <= 1e-9);
    for (int i = 0; i < n; ++i) {
      const double mid = i + 1 < n ? 0.5 * (solver.eigenvalues()(i) + solver.eigenvalues()(i + 1)) : 1e6;
      if (i + 1 < n && solver.eigenvalues()(i + 1) - solver.eigenvalues()(i) < 1e-6) continue;
      CHECK(sturm_count(d, e, mid) == static_cast<std::size_t>(i + 1));
    }
  }
}

TEST_CASE("repeated eigenvalues") {
  const std::vector<double> d{1, 1, 1, 2}, e{0, 0, 0};
  const auto eig = tridiagonal_eigenvalues(d, e);
  REQUIRE(eig.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(eig[i] - d[i]) <= 1e-10);
}

TEST_CASE("tridiagonal single point is centred") {
  Rng rng(9);
  double sum = 0.0, sq = 0.0;
  const int reps = 20000;
  for (int k = 0; k < reps; ++k) {
    const double x = tridiagonal_gaussian_beta_sample(1, 2.0, rng).xs()[0];
    sum += x;
    sq += x * x;
  }
  const double sd = std::sqrt(sq / reps);
  CHECK(std::abs(sum / reps) <= 4 * sd / std::sqrt(reps));
  // N=1, beta=2: density exp(-x^2), variance 1/2
  CHECK(sq / reps == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("tridiagonal N=500 matches the semicircle") {
  Rng rng(10);
  for (double beta : {1.0, 2.0, 4.0}) {
    const auto s = tridiagonal_gaussian_beta_sample(500, beta, rng);
    const double radius = *quadratic_equilibrium_radius(PolynomialPotential::quadratic(), beta);
    std::vector<double> xs(s.xs().begin(), s.xs().end());
    CHECK(ks_statistic(xs, [radius](double x) { return semicircle_cdf_radius(x, radius); }) <= 0.05);
    if (beta == 2.0) {
      std::vector<LabeledState> one{s};
      CHECK(std::abs(mean_power(one, 2) - semicircle_moment(2)) <= 0.02);
    }
  }
  CHECK_THROWS_AS(tridiagonal_gaussian_beta_sample(5, 3.0, rng), SpecError);
}

TEST_CASE("bulk rescale") {
  const double rho = std::sqrt(2.0) / pi;
  CHECK(bulk_rescale(LabeledState::line({0.3}), 100, rho, 0.3).xs()[0] == 0.0);
  CHECK(bulk_rescale(LabeledState::line({0.1}), 100, rho, 0.0).xs()[0] == doctest::Approx(4.50158).epsilon(1e-5));
  Rng rng(12);
  const auto x = tridiagonal_gaussian_beta_sample(30, 2.0, rng);
  const auto back = bulk_rescale(bulk_unscale(x, 30, 0.37, 0.2), 30, 0.37, 0.2);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(back.xs()[i] - x.xs()[i]) <= 1e-12);
}

TEST_CASE("poisson_init") {
  Rng rng(13);
  CHECK(poisson_init(FiniteWindow{1.0}, 0.0, Dimension::OneD, rng).empty());
  double total1 = 0.0, total2 = 0.0;
  const int reps = 4000;
  for (int k = 0; k < reps; ++k) {
    const auto s = poisson_init(FiniteWindow{1.0}, 10.0, Dimension::OneD, rng);
    for (double x : s.xs()) CHECK(std::abs(x) < 1.0);
    total1 += static_cast<double>(s.size());
    const auto p = poisson_init(FiniteWindow{1.0}, 1.0 / pi, Dimension::TwoD, rng);
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(p.modulus(i) < 1.0);
    total2 += static_cast<double>(p.size());
  }
  CHECK(std::abs(total1 / reps - 20.0) <= 4 * std::sqrt(20.0 / reps));
  CHECK(std::abs(total2 / reps - 1.0) <= 4 * std::sqrt(1.0 / reps));
}

TEST_CASE("initial configuration") {
  Rng rng(14);
  const auto line = initial_configuration(gaussian_line(20), rng);
  CHECK(line.size() == 20);
  CHECK(std::abs(line.xs()[19]) < std::sqrt(2.0));
  ModelSpec planar;
  planar.dimension = Dimension::TwoD;
  planar.n_particles = 30;
  const auto disk = initial_configuration(planar, rng);
  CHECK(disk.size() == 30);
  CHECK(disk.modulus(29) <= std::sqrt(30.0));
}
