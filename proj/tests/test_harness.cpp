#include <doctest.h>

#include <cmath>

#include "loggas/drift.hpp"
#include "loggas/harness.hpp"

using namespace loggas;

namespace {

RunContext context(std::uint64_t seed) {
  RunContext ctx;
  ctx.seed = seed;
  return ctx;
}

}  // namespace

TEST_CASE("finalize") {
  ExperimentReport r;
  r.statistics = {{"a", 0.1}, {"b", 5.0}};
  r.thresholds = {{"a", 0.2}};
  r.finalize();
  CHECK(r.passed);
  r.thresholds["b"] = 4.0;
  r.finalize();
  CHECK_FALSE(r.passed);
  r.statistics["a"] = std::nan("");
  r.thresholds.erase("b");
  r.finalize();
  CHECK_FALSE(r.passed);
}

TEST_CASE("report text round trip") {
  ExperimentReport r;
  r.name = "demo";
  r.spec.n_particles = 12;
  r.spec.beta = 4.0;
  r.statistics = {{"ks", 0.0123456789}, {"info", -3.5}};
  r.thresholds = {{"ks", 0.02}};
  r.ctx = context(99);
  r.runtime_seconds = 1.25;
  r.finalize();
  const auto text = format_report(r, true);
  CHECK(text.find("meta.created") != std::string::npos);
  CHECK(format_report(r, false).find("meta.") == std::string::npos);
  const auto back = parse_report(text);
  CHECK(back.name == "demo");
  CHECK(back.passed);
  CHECK(back.ctx.seed == 99);
  CHECK(back.spec == r.spec);
  CHECK(back.statistics == r.statistics);
  CHECK(back.thresholds == r.thresholds);
  CHECK(format_report(back, false) == format_report(r, false));
}

TEST_CASE("semicircle experiment") {
  const auto ok = run_semicircle({200, 2.0, 10, 0.05}, context(1), 1);
  CHECK(ok.passed);
  CHECK(ok.statistics.at("ks") <= 0.05);
  CHECK(ok.statistics.at("second_moment") == doctest::Approx(0.5).epsilon(0.1));
  const auto single = run_semicircle({1, 2.0, 50, 0.02}, context(1), 1);
  CHECK_FALSE(single.passed);
  CHECK(single.statistics.at("ks") > 0.05);
}

TEST_CASE("semicircle experiment is deterministic across job counts") {
  const auto a = run_semicircle({100, 1.0, 8, 0.05}, context(5), 1);
  const auto b = run_semicircle({100, 1.0, 8, 0.05}, context(5), 3);
  const auto c = run_semicircle({100, 1.0, 8, 0.05}, context(6), 1);
  CHECK(format_report(a, false) == format_report(b, false));
  CHECK(format_report(a, false) != format_report(c, false));
}

TEST_CASE("bulk universality negative control") {
  BulkUniversalityConfig cfg;
  cfg.n = 50;
  cfg.replicas = 200;
  const auto r = run_bulk_universality(cfg, context(2), 1);
  CHECK_FALSE(r.passed);
  CHECK(r.statistics.at("max_deviation") > cfg.max_deviation_threshold);
}

TEST_CASE("invariance experiment smoke run") {
  InvarianceConfig cfg;
  cfg.spec.n_particles = 30;
  cfg.spec.scaling = Scaling::Bulk;
  cfg.spec.window = FiniteWindow{4.0};
  cfg.t_max = 0.2;
  cfg.dt = 1e-3;
  cfg.replicas = 20;
  const auto r = run_invariance_principle(cfg, context(3), 1);
  CHECK(r.statistics.at("reconstruction_residual") <= 1e-8);
  CHECK(r.statistics.at("drift_constant") == 0.0);
  CHECK(r.statistics.at("tagged_particles") > 0.0);

  cfg.spec.theta = 1.0;
  cfg.rho1 = OnePointChoice::Tabulated;
  cfg.tabulation_samples = 20;
  cfg.replicas = 4;
  const auto t = run_invariance_principle(cfg, context(3), 1);
  CHECK(t.statistics.at("drift_constant") == doctest::Approx(3.14159265358979).epsilon(1e-14));
  CHECK(t.statistics.at("reconstruction_residual") <= 1e-8);
}

TEST_CASE("strong non-Hermiticity with vanishing parameters matches plain Ginibre") {
  GinibreStaticConfig plain;
  plain.n = 50;
  plain.replicas = 16;
  plain.mcmc = {1500, 500, 0.5, 100, true, 100};
  auto degenerate = plain;
  degenerate.mode = GinibreMode::StrongNonHermitian;
  degenerate.params = GinibreParams{0.0, 0.0, 0.0, 1.0, {}};
  const auto a = run_ginibre_static(plain, context(4), 1);
  const auto b = run_ginibre_static(degenerate, context(4), 1);
  const double se = std::sqrt(a.statistics.at("central_density") / (plain.replicas * 10 * 3.14159 * 4));
  CHECK(std::abs(a.statistics.at("central_density") - b.statistics.at("central_density")) <= 6 * se * std::sqrt(2.0));
}

TEST_CASE("single particle drift difference between the truncations") {
  ModelSpec spec;
  spec.dimension = Dimension::TwoD;
  spec.n_particles = 1;
  const auto s = LabeledState::plane({{0.6, -0.8}});
  const auto absolute = full_drift(s, spec, AbsolutePosition{100.0}, ConstantOutside{0});
  const auto relative = interaction_drift_2d(0, s, RelativeDistance{100.0});
  CHECK(std::hypot(absolute[0] - relative.x, absolute[1] - relative.y) == doctest::Approx(1.0));
}

TEST_CASE("ginibre dynamics smoke run") {
  GinibreDynamicsConfig cfg;
  cfg.n = 20;
  cfg.t_max = 0.1;
  cfg.dt = 1e-3;
  cfg.replicas = 10;
  cfg.mcmc = {600, 300, 0.5, 300, true, 100};
  cfg.explore_n = 60;
  cfg.explore_replicas = 4;
  const auto r = run_ginibre_dynamics(cfg, context(5), 1);
  CHECK(r.statistics.count("stationarity_ks") == 1);
  CHECK(r.statistics.at("drift_difference_r2") >= r.statistics.at("drift_difference_r8"));
  CHECK(r.thresholds.count("drift_difference_r2") == 0);
}

TEST_CASE("tightness report") {
  const std::vector<LabeledState> empty_configs(3, LabeledState::plane({}));
  const auto zeros = run_tightness(empty_configs, 3.0, 1.0, {1, 5, 10}, context(6));
  for (const auto& [k, v] : zeros.statistics) CHECK(v == 0.0);
  CHECK(zeros.passed);

  ModelSpec spec;
  spec.dimension = Dimension::TwoD;
  spec.n_particles = 100;
  std::vector<LabeledState> samples;
  for (auto& group : equilibrium_samples(spec, 4, {1500, 500, 0.5, 500, true, 100}, context(7), 1))
    for (auto& s : group) samples.push_back(s.relabeled(LabelOrder::AscendingModulus));
  const auto r = run_tightness(samples, 3.0, 1.0, {1, 10, 50, 100}, context(7));
  CHECK(r.statistics.at("monotonicity_violations") == 0.0);
  CHECK(r.statistics.at("diagnostic_l1") >= r.statistics.at("diagnostic_l100"));
}
