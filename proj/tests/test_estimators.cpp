#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "loggas/errors.hpp"
#include "loggas/estimators.hpp"
#include "loggas/rng.hpp"
#include "loggas/samplers.hpp"

using namespace loggas;
using std::numbers::pi;
using GK = boost::math::quadrature::gauss_kronrod<double, 61>;

namespace {

std::vector<double> uniform_edges(double lo, double hi, double width) {
  std::vector<double> e;
  const auto n = static_cast<int>(std::lround((hi - lo) / width));
  for (int b = 0; b <= n; ++b) e.push_back(lo + b * width);
  return e;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

TEST_CASE("estimate_rho_k on a point mass") {
  std::vector<LabeledState> samples(50, LabeledState::line({0.05}));
  const auto edges = uniform_edges(-0.5, 0.5, 0.1);
  const auto est = estimate_rho_k(samples, 1, edges, InfiniteWindow{});
  for (std::size_t b = 0; b < est.values.size(); ++b) {
    if (b == 5) {
      CHECK(est.values[b] == doctest::Approx(10.0));
      CHECK(est.counts[b] == 50.0);
    } else {
      CHECK(est.values[b] == 0.0);
    }
  }
  const auto pairs = estimate_rho_k(samples, 2, edges, InfiniteWindow{});
  CHECK(pairs.values.size() == 100);
  for (double v : pairs.values) CHECK(v == 0.0);
}

TEST_CASE("estimate_rho_k counts ordered tuples") {
  std::vector<LabeledState> samples{LabeledState::line({-0.5, 0.5})};
  const std::vector<double> edges{-1, 0, 1};
  const auto est = estimate_rho_k(samples, 2, edges, InfiniteWindow{});
  CHECK(est.counts == std::vector<double>{0, 1, 1, 0});
  CHECK(est.values[1] == 1.0);
  const auto windowed = estimate_rho_k(samples, 1, edges, FiniteWindow{0.4});
  CHECK(windowed.counts == std::vector<double>{0, 0});
  CHECK_THROWS_AS(estimate_rho_k(std::vector<LabeledState>{}, 1, edges, InfiniteWindow{}), SpecError);
}

TEST_CASE("estimate_rho_k on Poisson samples") {
  Rng rng(1);
  const double lambda = 7.0;
  std::vector<LabeledState> samples;
  for (int k = 0; k < 3000; ++k) samples.push_back(poisson_init(FiniteWindow{1.0}, lambda, Dimension::OneD, rng));
  const auto edges = uniform_edges(-1.0, 1.0, 0.25);
  const auto est = estimate_rho_k(samples, 1, edges, InfiniteWindow{});
  const double se = std::sqrt(lambda * 0.25 / 3000.0) / 0.25;
  for (double v : est.values) CHECK(std::abs(v - lambda) <= 3.5 * se);

  std::vector<LabeledState> planar;
  for (int k = 0; k < 2000; ++k) planar.push_back(poisson_init(FiniteWindow{1.0}, 3.0, Dimension::TwoD, rng));
  const auto est2 = estimate_rho_k(planar, 1, std::vector<double>{-0.5, 0.0, 0.5}, InfiniteWindow{});
  const double se2 = std::sqrt(3.0 * 0.25 / 2000.0) / 0.25;
  for (double v : est2.values) CHECK(std::abs(v - 3.0) <= 3.5 * se2);
}

TEST_CASE("pair estimates of Poisson samples are flat") {
  Rng rng(2);
  const double lambda = 4.0;
  std::vector<LabeledState> line, plane;
  for (int k = 0; k < 3000; ++k) {
    line.push_back(poisson_init(FiniteWindow{6.0}, lambda, Dimension::OneD, rng));
    plane.push_back(poisson_init(FiniteWindow{4.0}, 1.0, Dimension::TwoD, rng));
  }
  const auto gap = pair_gap_estimate_1d(line, 3.0, uniform_edges(0.2, 2.2, 0.5));
  for (double v : gap.values) CHECK(v == doctest::Approx(lambda * lambda).epsilon(0.05));
  const auto radial = radial_pair_estimate_2d(plane, 2.0, uniform_edges(0.5, 1.5, 0.5));
  for (double v : radial.values) CHECK(v == doctest::Approx(1.0).epsilon(0.05));
  const auto dens = radial_density_2d(plane, uniform_edges(0.0, 3.0, 1.0));
  for (double v : dens.values) CHECK(v == doctest::Approx(1.0).epsilon(0.05));
  CHECK(central_density(line, 2.0) == doctest::Approx(lambda).epsilon(0.03));
}

TEST_CASE("pair gap estimate of a lattice") {
  std::vector<double> pts;
  for (int k = -20; k <= 20; ++k) pts.push_back(k);
  std::vector<LabeledState> samples{LabeledState::line(pts)};
  const auto curve = pair_gap_estimate_1d(samples, 5.0, uniform_edges(0.5, 2.5, 0.5));
  CHECK(curve.centers() == std::vector<double>{0.75, 1.25, 1.75, 2.25});
  // 9 references (|s| < 5), each has two neighbours at every integer gap
  CHECK(curve.counts == std::vector<double>{0, 18, 0, 18});
  CHECK(curve.values[1] == doctest::Approx(18.0 / (10.0 * 1.0)));
}

TEST_CASE("histogram_one_point") {
  std::vector<LabeledState> samples{LabeledState::line({-0.9, -0.1, 0.1, 0.2}), LabeledState::line({0.3})};
  const auto t = histogram_one_point(samples, -1, 1, 2);
  CHECK(t.grid == std::vector<double>{-0.5, 0.5});
  CHECK(t.values[0] == doctest::Approx(2.0 / 2.0));
  CHECK(t.values[1] == doctest::Approx(3.0 / 2.0));
}

TEST_CASE("sine kernel") {
  CHECK(sine_kernel(0.3, 0.3) == 1.0);
  CHECK(std::abs(sine_kernel(0.0, 1.0)) < 1e-16);
  for (double s : {0.1, 0.5, 1.3, 2.7}) {
    const std::vector<double> pts{0.0, s};
    const double sinc = std::sin(pi * s) / (pi * s);
    CHECK(sine_rho_k(pts) == doctest::Approx(1 - sinc * sinc).epsilon(1e-13));
  }
  const std::vector<double> one{4.2};
  CHECK(sine_rho_k(one) == 1.0);
  const std::vector<double> triple{0.0, 0.4, 1.1}, shuffled{1.1, 0.0, 0.4}, coincide{0.2, 0.9, 0.2};
  CHECK(sine_rho_k(triple) == doctest::Approx(sine_rho_k(shuffled)).epsilon(1e-12));
  CHECK(std::abs(sine_rho_k(coincide)) < 1e-12);
  const std::vector<double> five{0.0, 0.3, 0.9, 1.6, 2.0};
  CHECK(sine_rho_k(five) > 0.0);
  CHECK(sine_rho_k(five) < sine_rho_k(std::vector<double>{0.0, 0.3, 0.9, 1.6}));
}

TEST_CASE("sine bin average against quadrature") {
  for (auto [a, b] : {std::pair{0.2, 0.3}, std::pair{1.0, 1.1}, std::pair{2.9, 3.0}, std::pair{0.0, 0.1}}) {
    const double oracle = GK::integrate(
                              [](double s) {
                                if (s == 0.0) return 0.0;
                                const double c = std::sin(pi * s) / (pi * s);
                                return 1 - c * c;
                              },
                              a, b, 10, 1e-14) /
                          (b - a);
    CHECK(sine_rho2_bin_average(a, b) == doctest::Approx(oracle).epsilon(1e-10));
  }
}

TEST_CASE("ginibre kernel") {
  const Point2 z{0.7, -0.4};
  const auto k = ginibre_kernel(z, z);
  CHECK(k.x == doctest::Approx(1 / pi).epsilon(1e-15));
  CHECK(k.y == doctest::Approx(0.0));
  for (Point2 w : {Point2{0, 0}, Point2{2, 1}, Point2{-3, 0.5}}) {
    const std::vector<Point2> one{w};
    CHECK(ginibre_rho_k(one) == doctest::Approx(1 / pi).epsilon(1e-14));
  }
  for (Point2 w : {Point2{0.3, 0}, Point2{1, 1}, Point2{0, -2}}) {
    const std::vector<Point2> pair{{0, 0}, w};
    const double r2 = w.x * w.x + w.y * w.y;
    CHECK(ginibre_rho_k(pair) == doctest::Approx((1 - std::exp(-r2)) / (pi * pi)).epsilon(1e-12));
  }
  // translation invariance of the correlation functions
  const std::vector<Point2> a{{0.1, 0.2}, {0.9, -0.3}}, b{{1.1, 1.2}, {1.9, 0.7}};
  CHECK(ginibre_rho_k(a) == doctest::Approx(ginibre_rho_k(b)).epsilon(1e-12));
}

TEST_CASE("ginibre rho_k permutation invariance and coincidence") {
  const std::vector<Point2> pts{{0.1, 0.2}, {0.9, -0.3}, {-0.4, 0.6}, {0.2, -1.0}};
  std::vector<std::size_t> order{0, 1, 2, 3};
  const double base = ginibre_rho_k(pts);
  while (std::next_permutation(order.begin(), order.end())) {
    std::vector<Point2> p;
    for (auto i : order) p.push_back(pts[i]);
    CHECK(std::abs(ginibre_rho_k(p) - base) <= 1e-10);
  }
  std::vector<Point2> same = pts;
  same[3] = same[1];
  CHECK(std::abs(ginibre_rho_k(same)) <= 1e-10);
  std::vector<Point2> three(pts.begin(), pts.begin() + 3);
  three[2] = three[0];
  CHECK(std::abs(ginibre_rho_k(three)) <= 1e-10);
}

TEST_CASE("ginibre annulus average against quadrature") {
  for (auto [a, b] : {std::pair{0.3, 0.4}, std::pair{1.0, 1.1}, std::pair{2.4, 2.5}}) {
    const double oracle = GK::integrate([](double s) { return 2 * s * (1 - std::exp(-s * s)); }, a, b, 10, 1e-14) /
                          (b * b - a * a);
    CHECK(ginibre_ratio_annulus_average(a, b) == doctest::Approx(oracle).epsilon(1e-12));
  }
}

TEST_CASE("determinant") {
  CHECK(determinant({2.0}, 1) == 2.0);
  CHECK(determinant({1, 2, 3, 4}, 2) == doctest::Approx(-2.0));
  const std::vector<double> m{2, -1, 0, 1, 3, 2, 0, 5, -4};
  const double explicit3 = 2 * (3 * -4 - 2 * 5) - (-1) * (1 * -4 - 2 * 0) + 0;
  CHECK(determinant(m, 3) == doctest::Approx(explicit3));
  CHECK(determinant({0, 1, 1, 0}, 2) == doctest::Approx(-1.0));
  CHECK(determinant({1, 2, 2, 4}, 2) == 0.0);
}

TEST_CASE("semicircle cdf") {
  CHECK(semicircle_cdf(-std::sqrt(2.0)) == 0.0);
  CHECK(semicircle_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(semicircle_cdf(std::sqrt(2.0)) == 1.0);
  CHECK(semicircle_cdf(5.0) == 1.0);
  CHECK(semicircle_cdf(-5.0) == 0.0);
  for (double x : {-1.2, -0.5, 0.3, 1.0, 1.4}) {
    const double oracle =
        GK::integrate([](double u) { return std::sqrt(2 - u * u) / pi; }, -std::sqrt(2.0), x, 15, 1e-14);
    CHECK(semicircle_cdf(x) == doctest::Approx(oracle).epsilon(1e-10));
    CHECK(semicircle_cdf_radius(x, std::sqrt(2.0)) == doctest::Approx(semicircle_cdf(x)).epsilon(1e-14));
  }
}

TEST_CASE("Gaussian tail and the reflected maximum law") {
  CHECK(scaled_erfc_R(0.0) == 0.5);
  CHECK(scaled_erfc_R(-40.0) == 1.0);
  for (double t : {-2.0, 0.5, 1.0, 3.0, 8.0}) {
    const double oracle =
        GK::integrate([](double x) { return std::exp(-x * x / 2) / std::sqrt(2 * pi); }, t,
                      std::numeric_limits<double>::infinity(), 20, 1e-15);
    CHECK(std::abs(scaled_erfc_R(t) - oracle) <= 1e-10 * oracle);
  }
  CHECK(scaled_erfc_R(1.0) == doctest::Approx(0.1586553).epsilon(1e-7));
  CHECK(reflected_bm_max_cdf(0.0, 1.0) == 0.0);
  CHECK(reflected_bm_max_cdf(-1.0, 1.0) == 0.0);
  CHECK(reflected_bm_max_cdf(50.0, 1.0) == 1.0);
  CHECK(reflected_bm_max_cdf(1.0, 1.0) == doctest::Approx(0.682689).epsilon(1e-6));
  CHECK(reflected_bm_max_cdf(2.0, 4.0) == doctest::Approx(reflected_bm_max_cdf(1.0, 1.0)).epsilon(1e-15));
  double prev = 0.0;
  for (double a = 0.0; a <= 6.0; a += 0.05) {
    const double v = reflected_bm_max_cdf(a, 1.5);
    CHECK(v >= prev);
    CHECK(v <= 1.0);
    prev = v;
  }
}

TEST_CASE("tightness diagnostic") {
  const std::vector<LabeledState> none;
  CHECK(tightness_diagnostic(none, 1, 3, 1) == 0.0);
  const std::vector<LabeledState> at_r{LabeledState::plane({{3, 0}})};
  CHECK(tightness_diagnostic(at_r, 1, 3, 0.7) == doctest::Approx(0.5));
  CHECK(tightness_diagnostic(at_r, 2, 3, 0.7) == 0.0);
  const std::vector<LabeledState> far{LabeledState::plane({{40, 0}, {0, 50}})};
  CHECK(tightness_diagnostic(far, 1, 3, 1) < 1e-20);
  const std::vector<LabeledState> line{LabeledState::line({-1, 2})};
  CHECK_THROWS_AS(tightness_diagnostic(line, 1, 3, 1), OrderingError);

  Rng rng(3);
  std::vector<LabeledState> samples;
  for (int k = 0; k < 20; ++k)
    samples.push_back(poisson_init(FiniteWindow{6.0}, 1.0, Dimension::TwoD, rng));
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t l : {1, 5, 20, 50, 100, 200}) {
    const double v = tightness_diagnostic(samples, l, 3.0, 1.0);
    CHECK(v <= prev);
    prev = v;
  }
  CHECK(tightness_diagnostic(samples, 10, 3.0, 2.0) >= tightness_diagnostic(samples, 10, 3.0, 1.0));
}

TEST_CASE("ks statistic") {
  const int n = 99;
  std::vector<double> quantiles;
  for (int i = 1; i <= n; ++i) quantiles.push_back(static_cast<double>(i) / (n + 1));
  CHECK(ks_statistic(quantiles, [](double x) { return std::clamp(x, 0.0, 1.0); }) <= 1.0 / (n + 1) + 1e-12);
  CHECK(ks_statistic({0.0}, normal_cdf) == doctest::Approx(0.5));
  CHECK(ks_statistic(std::vector<double>(20, 0.0), normal_cdf) == doctest::Approx(0.5));
  CHECK_THROWS_AS(ks_statistic({}, normal_cdf), SpecError);
  CHECK(ks_two_sample({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(ks_two_sample({1, 2}, {3, 4}) == 1.0);
  CHECK(ks_two_sample({1, 3}, {2, 4}) == doctest::Approx(0.5));
}

TEST_CASE("pooled values") {
  std::vector<LabeledState> planar{LabeledState::plane({{3, 4}})};
  CHECK(pooled_values(planar) == std::vector<double>{5.0});
  std::vector<LabeledState> line{LabeledState::line({-1, 2}), LabeledState::line({0.5})};
  CHECK(pooled_values(line) == std::vector<double>{-1, 2, 0.5});
}
