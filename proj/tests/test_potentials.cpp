#include <doctest.h>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_real_distribution.hpp>
#include <cmath>
#include <numbers>

#include "loggas/errors.hpp"
#include "loggas/potentials.hpp"

using namespace loggas;
using std::numbers::pi;

namespace {

PolynomialPotential quartic_minus_quadratic() { return PolynomialPotential({0.0, 0.0, -1.0, 0.0, 1.0}); }

double closed_form_quadratic_drift(int n, double theta, double x) {
  return -pi * pi * x / (n * (2.0 - theta * theta)) - pi * theta / std::sqrt(2.0 - theta * theta);
}

}  // namespace

TEST_CASE("eval_v") {
  CHECK(eval_v(PolynomialPotential::quadratic(), 2.0) == 4.0);
  CHECK(eval_v(quartic_minus_quadratic(), 1.0) == 0.0);
  CHECK(eval_v(PolynomialPotential::quadratic(), 0.3) == doctest::Approx(0.09).epsilon(1e-15));
  CHECK(eval_v(PolynomialPotential::zero(), 5.0) == 0.0);
}

TEST_CASE("eval_v_prime") {
  CHECK(eval_v_prime(PolynomialPotential::quadratic(), 1.0) == 2.0);
  CHECK(eval_v_prime(PolynomialPotential::quadratic(), 0.0) == 0.0);
  CHECK(eval_v_prime(PolynomialPotential({0, 0, 0, 0, 1}), 2.0) == 32.0);
}

TEST_CASE("eval_v_prime matches central differences") {
  const PolynomialPotential v({0.3, -0.2, 1.5, 0.7, 2.0});
  const double h = 1e-5;
  for (double x = -2.0; x <= 2.0; x += 0.173) {
    const double fd = (eval_v(v, x + h) - eval_v(v, x - h)) / (2 * h);
    const double exact = eval_v_prime(v, x);
    CHECK(std::abs(fd - exact) <= 1e-6 * std::max(1.0, std::abs(exact)));
  }
}

TEST_CASE("potential invariants") {
  CHECK_THROWS_AS(PolynomialPotential({0, 1, 0, 1}), SpecError);
  CHECK_THROWS_AS(PolynomialPotential({0, 0, -1}), SpecError);
  CHECK(PolynomialPotential({0, 0, 1, 0, 0}).degree() == 2);
  CHECK(PolynomialPotential::zero().is_zero());
  CHECK(PolynomialPotential({3, 0, 2}).pure_quadratic_coefficient() == 2.0);
  CHECK_FALSE(quartic_minus_quadratic().pure_quadratic_coefficient());
}

TEST_CASE("v_beta table") {
  const auto v = PolynomialPotential::quadratic();
  CHECK(v_beta(v, 1.0) == v);
  CHECK(v_beta(v, 2.0) == v);
  CHECK(v_beta(v, 4.0) == PolynomialPotential({0, 0, 2}));
  CHECK_THROWS_AS(v_beta(v, 3.0), SpecError);
  CHECK(effective_potential(v, 3.0) == v);
}

TEST_CASE("semicircle_density") {
  CHECK(semicircle_density(0.0) == doctest::Approx(std::sqrt(2.0) / pi).epsilon(1e-15));
  CHECK(semicircle_density(std::sqrt(2.0)) == 0.0);
  CHECK(semicircle_density(1.0) == doctest::Approx(1.0 / pi).epsilon(1e-15));
  CHECK(semicircle_density(2.0) == 0.0);
}

TEST_CASE("quadratic equilibrium radius by beta") {
  const auto v = PolynomialPotential::quadratic();
  CHECK(*quadratic_equilibrium_radius(v, 2.0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(*quadratic_equilibrium_radius(v, 1.0) == doctest::Approx(1.0));
  CHECK(*quadratic_equilibrium_radius(v, 4.0) == doctest::Approx(std::sqrt(2.0)));
  CHECK_FALSE(quadratic_equilibrium_radius(quartic_minus_quadratic(), 2.0));
}

TEST_CASE("scaled_potential_drift examples") {
  const auto v = PolynomialPotential::quadratic();
  CHECK(scaled_potential_drift(v, 2.0, 100, 0.0, semicircle_density(0.0), 0.0) == 0.0);
  CHECK(scaled_potential_drift(v, 2.0, 100, 1.0, semicircle_density(1.0), 0.0) == doctest::Approx(-pi).epsilon(1e-14));
}

TEST_CASE("scaled_potential_drift against the quadratic closed form") {
  boost::random::mt19937_64 gen(11);
  boost::random::uniform_real_distribution<double> theta_dist(-1.4, 1.4), x_dist(-50.0, 50.0);
  const auto v = PolynomialPotential::quadratic();
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const int n = 1 + static_cast<int>(gen() % 5000);
    const double theta = theta_dist(gen), x = x_dist(gen);
    const double got = scaled_potential_drift(v, 2.0, n, theta, semicircle_density(theta), x);
    worst = std::max(worst, std::abs(got - closed_form_quadratic_drift(n, theta, x)));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("drift constant is the large-N limit of the scaled drift") {
  const auto v = quartic_minus_quadratic();
  const double theta = 0.8, rho = 0.3, x = 2.5;
  const double c = drift_constant_c(v, theta, rho);
  // first-order Taylor coefficient of the gap in 1/N
  const double k = std::abs((12 * theta * theta - 2) * x / (2 * rho * rho));
  double previous = std::numeric_limits<double>::infinity();
  for (int n : {10, 100, 1000, 10000, 100000}) {
    const double gap = std::abs(scaled_potential_drift(v, 2.0, n, theta, rho, x) + c);
    CHECK(gap < previous);
    if (n >= 1000) CHECK(gap * n == doctest::Approx(k).epsilon(0.05));
    previous = gap;
  }
}

TEST_CASE("drift_constant") {
  const auto v = PolynomialPotential::quadratic();
  CHECK(drift_constant_c(v, 1.0, semicircle_density(1.0)) == doctest::Approx(pi).epsilon(1e-15));
  CHECK(drift_constant_c(v, 0.0, semicircle_density(0.0)) == 0.0);
  CHECK(drift_constant(v, 4.0, 1.0, semicircle_density(1.0)) == doctest::Approx(2 * pi).epsilon(1e-15));
  CHECK(drift_constant(v, 1.0, 1.0, semicircle_density(1.0)) == doctest::Approx(pi).epsilon(1e-15));
}

TEST_CASE("raw_potential_drift") {
  CHECK(raw_potential_drift(PolynomialPotential::quadratic(), 2.0, 10, 0.5) == doctest::Approx(-5.0));
  CHECK(raw_potential_drift(PolynomialPotential::quadratic(), 4.0, 10, 0.5) == doctest::Approx(-10.0));
}
