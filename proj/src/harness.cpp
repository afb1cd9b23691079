#include "loggas/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <numbers>

#include "loggas/errors.hpp"
#include "loggas/estimators.hpp"
#include "loggas/integrator.hpp"
#include "loggas/parallel.hpp"
#include "loggas/spec_io.hpp"

namespace loggas {

namespace {

constexpr std::uint64_t kPilotStreamOffset = 1ULL << 40;

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

bool is_gaussian(const ModelSpec& spec) {
  const auto c = spec.potential.coefficients();
  return spec.dimension == Dimension::OneD && c.size() == 3 && c[0] == 0.0 && c[1] == 0.0 && c[2] == 1.0 &&
         (spec.beta == 1.0 || spec.beta == 2.0 || spec.beta == 4.0);
}

std::vector<double> uniform_edges(double lo, double hi, double width) {
  const auto bins = static_cast<long>(std::llround((hi - lo) / width));
  std::vector<double> e(static_cast<std::size_t>(bins) + 1);
  for (long k = 0; k <= bins; ++k) e[static_cast<std::size_t>(k)] = lo + static_cast<double>(k) * width;
  return e;
}

template <typename T>
std::vector<T> flatten(std::vector<std::vector<T>> nested) {
  std::vector<T> out;
  for (auto& v : nested) out.insert(out.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
  return out;
}

ModelSpec gaussian_spec(int n, double beta) {
  ModelSpec spec;
  spec.beta = beta;
  spec.n_particles = n;
  return spec;
}

void require_valid(const ModelSpec& spec) {
  if (const auto v = validate_spec(spec); !v.ok()) throw SpecError(v.violations.front());
}

double equilibrium_radius(const ModelSpec& spec) {
  return quadratic_equilibrium_radius(spec.potential, spec.beta).value_or(std::numbers::sqrt2);
}

std::string format_timestamp(std::chrono::system_clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

void ExperimentReport::finalize() {
  passed = true;
  for (const auto& [key, limit] : thresholds) {
    const auto it = statistics.find(key);
    if (it == statistics.end() || !(it->second <= limit)) passed = false;
  }
}

std::string format_report(const ExperimentReport& report, bool include_metadata) {
  std::string out;
  auto line = [&](const std::string& k, const std::string& v) { out += k + " = " + v + "\n"; };
  line("name", report.name);
  line("passed", report.passed ? "true" : "false");
  line("seed", std::to_string(report.ctx.seed));
  line("replica_id", std::to_string(report.ctx.replica_id));
  for (const auto& [k, v] : spec_to_key_values(report.spec)) line("spec." + k, v);
  for (const auto& [k, v] : report.statistics) line("stat." + k, format_double(v));
  for (const auto& [k, v] : report.thresholds) line("threshold." + k, format_double(v));
  if (include_metadata) {
    line("meta.created", format_timestamp(report.ctx.created));
    line("meta.runtime_seconds", format_double(report.runtime_seconds));
  }
  return out;
}

ExperimentReport parse_report(std::string_view text) {
  ExperimentReport r;
  KeyValues spec_kv;
  for (const auto& [k, v] : parse_key_values(text)) {
    if (k == "name") {
      r.name = v;
    } else if (k == "passed") {
      r.passed = v == "true";
    } else if (k == "seed") {
      r.ctx.seed = std::stoull(v);
    } else if (k == "replica_id") {
      r.ctx.replica_id = std::stoll(v);
    } else if (k.starts_with("spec.")) {
      spec_kv.emplace_back(k.substr(5), v);
    } else if (k.starts_with("stat.")) {
      r.statistics[k.substr(5)] = parse_double(v);
    } else if (k.starts_with("threshold.")) {
      r.thresholds[k.substr(10)] = parse_double(v);
    } else if (k == "meta.runtime_seconds") {
      r.runtime_seconds = parse_double(v);
    }
  }
  r.spec = spec_from_key_values(spec_kv).spec;
  return r;
}

LabeledState equilibrium_state(const ModelSpec& spec, const McmcSettings& mcmc, Rng& rng) {
  require_valid(spec);
  if (is_gaussian(spec)) {
    auto x = tridiagonal_gaussian_beta_sample(spec.n_particles, spec.beta, rng);
    if (spec.scaling == Scaling::Bulk) x = bulk_rescale(x, spec.n_particles, require_rho_theta(spec), spec.theta);
    return x;
  }
  const auto density = make_log_density(spec);
  return mcmc_run(spec, *density, mcmc, rng).samples.back();
}

std::vector<std::vector<LabeledState>> equilibrium_samples(const ModelSpec& spec, int replicas,
                                                           const McmcSettings& mcmc, const RunContext& ctx,
                                                           unsigned jobs) {
  require_valid(spec);
  std::vector<std::vector<LabeledState>> out(static_cast<std::size_t>(replicas));
  const bool exact = is_gaussian(spec);
  const auto density = exact ? nullptr : make_log_density(spec);
  parallel_for(out.size(), jobs, [&](std::size_t k) {
    Rng rng(ctx.seed, k);
    if (exact) {
      auto x = tridiagonal_gaussian_beta_sample(spec.n_particles, spec.beta, rng);
      if (spec.scaling == Scaling::Bulk) x = bulk_rescale(x, spec.n_particles, require_rho_theta(spec), spec.theta);
      out[k].push_back(std::move(x));
    } else {
      out[k] = mcmc_sample(spec, *density, mcmc, rng);
    }
  });
  return out;
}

ExperimentReport run_semicircle(const SemicircleConfig& cfg, const RunContext& ctx, unsigned jobs) {
  const Stopwatch clock;
  ExperimentReport report;
  report.name = "semicircle";
  report.spec = gaussian_spec(cfg.n, cfg.beta);
  report.ctx = ctx;
  if (cfg.replicas < 1) throw SpecError("replicas must be positive");
  const auto samples = flatten(equilibrium_samples(report.spec, cfg.replicas, {}, ctx, jobs));
  const auto values = pooled_values(samples);
  const double radius = equilibrium_radius(report.spec);
  double second = 0.0;
  for (double x : values) second += x * x;
  report.statistics["ks"] = ks_statistic(values, [radius](double x) { return semicircle_cdf_radius(x, radius); });
  report.statistics["second_moment"] = second / static_cast<double>(values.size());
  report.statistics["support_radius"] = radius;
  report.thresholds["ks"] = cfg.ks_threshold;
  report.finalize();
  report.runtime_seconds = clock.seconds();
  return report;
}

ExperimentReport run_bulk_universality(const BulkUniversalityConfig& cfg, const RunContext& ctx, unsigned jobs) {
  const Stopwatch clock;
  ExperimentReport report;
  report.name = "bulk_universality";
  report.spec = gaussian_spec(cfg.n, 2.0);
  report.spec.scaling = Scaling::Bulk;
  report.spec.window = FiniteWindow{cfg.window_halfwidth};
  report.ctx = ctx;
  if (cfg.replicas < 1) throw SpecError("replicas must be positive");
  const auto samples = flatten(equilibrium_samples(report.spec, cfg.replicas, {}, ctx, jobs));
  const auto edges = uniform_edges(cfg.s_min, cfg.s_max, cfg.bin_width);
  const auto curve = pair_gap_estimate_1d(samples, cfg.window_halfwidth, edges);

  double max_dev = 0.0;
  double tail_sum = 0.0;
  int tail_bins = 0;
  for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
    const double predicted = sine_rho2_bin_average(edges[b], edges[b + 1]);
    max_dev = std::max(max_dev, std::abs(curve.values[b] - predicted));
    if (edges[b] >= 2.0) {
      tail_sum += curve.values[b];
      ++tail_bins;
    }
  }
  report.statistics["max_deviation"] = max_dev;
  report.statistics["first_bin_deviation"] =
      curve.values.front() - sine_rho2_bin_average(edges[0], edges[1]);
  report.statistics["reference_density"] = static_cast<double>(curve.n_references) /
                                           (static_cast<double>(samples.size()) * 2.0 * cfg.window_halfwidth);
  if (tail_bins > 0) report.statistics["tail_mean"] = tail_sum / tail_bins;
  report.thresholds["max_deviation"] = cfg.max_deviation_threshold;
  report.finalize();
  report.runtime_seconds = clock.seconds();
  return report;
}

ExperimentReport run_invariance_principle(const InvarianceConfig& cfg, const RunContext& ctx, unsigned jobs) {
  const Stopwatch clock;
  const ModelSpec& spec = cfg.spec;
  require_valid(spec);
  if (spec.dimension != Dimension::OneD || spec.scaling != Scaling::Bulk)
    throw SpecError("invariance principle runs need a 1D bulk-scaled spec");
  if (!is_finite(spec.window)) throw SpecError("invariance principle runs need a finite window");
  if (!(cfg.t_max > 0.0 && cfg.t_max <= 1.0)) throw SpecError("T must lie in (0, 1]");
  if (cfg.replicas < 1) throw SpecError("replicas must be positive");

  ExperimentReport report;
  report.name = "invariance";
  report.spec = spec;
  report.ctx = ctx;

  const double r = radius_of(spec.window);
  const double rho = require_rho_theta(spec);
  const int n = spec.n_particles;
  const double c_beta = drift_constant(spec.potential, spec.beta, spec.theta, rho);

  OnePointModel rho1 = ConstantOutside{1.0};
  if (cfg.rho1 == OnePointChoice::Tabulated) {
    std::vector<LabeledState> pilot(static_cast<std::size_t>(cfg.tabulation_samples));
    McmcSettings mcmc;
    mcmc.thinning = mcmc.n_sweeps - mcmc.burn_in;
    const auto density = is_gaussian(spec) ? nullptr : make_log_density(spec);
    parallel_for(pilot.size(), jobs, [&](std::size_t k) {
      Rng rng(ctx.seed, kPilotStreamOffset + k);
      if (density) {
        pilot[k] = mcmc_sample(spec, *density, mcmc, rng).back();
      } else {
        pilot[k] = bulk_rescale(tridiagonal_gaussian_beta_sample(n, spec.beta, rng), n, rho, spec.theta);
      }
    });
    const double big = equilibrium_radius(spec);
    const double lo = n * rho * (-big - spec.theta) * 1.1;
    const double hi = n * rho * (big - spec.theta) * 1.1;
    rho1 = histogram_one_point(pilot, lo, hi, 200);
  }

  IntegratorSettings settings;
  settings.dt = cfg.dt;
  settings.t_end = cfg.t_max;
  settings.record_stride = cfg.record_stride;

  struct ReplicaResult {
    std::vector<double> max_b;
    std::vector<double> max_with_constant;
    double residual = 0.0;
    double split_error = 0.0;
  };
  std::vector<ReplicaResult> results(static_cast<std::size_t>(cfg.replicas));
  const McmcSettings mcmc_default{};
  const auto density = is_gaussian(spec) ? nullptr : make_log_density(spec);
  const bool closed_form = is_gaussian(spec) && spec.beta == 2.0 && std::holds_alternative<SemicircleQuadratic>(spec.density);

  parallel_for(results.size(), jobs, [&](std::size_t k) {
    Rng rng(ctx.seed, k);
    LabeledState eq;
    if (density) {
      McmcSettings mcmc = mcmc_default;
      mcmc.thinning = mcmc.n_sweeps - mcmc.burn_in;
      eq = mcmc_sample(spec, *density, mcmc, rng).back();
    } else {
      eq = bulk_rescale(tridiagonal_gaussian_beta_sample(n, spec.beta, rng), n, rho, spec.theta);
    }
    std::vector<double> inside;
    for (double s : eq.xs())
      if (std::abs(s) < r) inside.push_back(s);
    const auto initial = LabeledState::line(inside);
    const auto traj = simulate(spec, settings, FullInteraction{}, rho1, initial, rng);
    const auto recon = reconstruct_brownian(traj, FullInteraction{}, rho1);
    auto& out = results[k];
    out.residual = recon.max_residual;
    for (std::size_t i = 0; i < inside.size(); ++i) {
      if (!(std::abs(inside[i]) < 0.5 * r)) continue;
      out.max_b.push_back(max_functional(recon, i, cfg.t_max));
      double best = 0.0;
      for (std::size_t f = 0; f < recon.times.size() && recon.times[f] <= cfg.t_max + 1e-12; ++f) {
        const double x = traj.states[f].xs()[i] - traj.states[0].xs()[i];
        best = std::max(best, x - recon.interaction[i][f] + c_beta * recon.times[f] - recon.tail[i][f]);
      }
      out.max_with_constant.push_back(best);
      if (closed_form) {
        const double s = inside[i];
        const double th = spec.theta;
        const double exact = -std::numbers::pi * std::numbers::pi * s / (n * (2.0 - th * th)) -
                             std::numbers::pi * th / std::sqrt(2.0 - th * th);
        out.split_error = std::max(
            out.split_error, std::abs(scaled_potential_drift(spec.potential, spec.beta, n, th, rho, s) - exact));
      }
    }
  });

  std::vector<double> max_b;
  std::vector<double> max_with_constant;
  double residual = 0.0;
  double split = 0.0;
  for (const auto& res : results) {
    max_b.insert(max_b.end(), res.max_b.begin(), res.max_b.end());
    max_with_constant.insert(max_with_constant.end(), res.max_with_constant.begin(), res.max_with_constant.end());
    residual = std::max(residual, res.residual);
    split = std::max(split, res.split_error);
  }
  if (max_b.empty()) throw SpecError("no particle started in the inner half-window");
  const double t = cfg.t_max;
  auto law = [t](double a) { return reflected_bm_max_cdf(a, t); };
  report.statistics["ks_max_functional"] = ks_statistic(max_b, law);
  report.statistics["ks_functional_with_constant"] = ks_statistic(max_with_constant, law);
  report.statistics["reconstruction_residual"] = residual;
  report.statistics["tagged_particles"] = static_cast<double>(max_b.size());
  report.statistics["drift_constant"] = c_beta;
  report.statistics["tabulated_rho1"] = cfg.rho1 == OnePointChoice::Tabulated ? 1.0 : 0.0;
  if (closed_form) {
    const double th = spec.theta;
    report.statistics["drift_constant_closed_form_error"] =
        std::abs(c_beta - std::numbers::pi * th / std::sqrt(2.0 - th * th));
    report.statistics["potential_split_error"] = split;
  }
  report.thresholds["ks_max_functional"] = cfg.ks_threshold;
  report.thresholds["reconstruction_residual"] = cfg.residual_threshold;
  report.finalize();
  report.runtime_seconds = clock.seconds();
  return report;
}

ExperimentReport run_ginibre_static(const GinibreStaticConfig& cfg, const RunContext& ctx, unsigned jobs) {
  const Stopwatch clock;
  ExperimentReport report;
  report.name = "ginibre_static";
  report.ctx = ctx;
  ModelSpec spec;
  spec.dimension = Dimension::TwoD;
  spec.n_particles = cfg.n;
  if (cfg.mode == GinibreMode::StrongNonHermitian) spec.ginibre = cfg.params;
  require_valid(spec);
  report.spec = spec;
  if (cfg.replicas < 1) throw SpecError("replicas must be positive");

  const auto density = make_log_density(spec);
  std::vector<McmcRun> runs(static_cast<std::size_t>(cfg.replicas));
  parallel_for(runs.size(), jobs, [&](std::size_t k) {
    Rng rng(ctx.seed, k);
    runs[k] = mcmc_run(spec, *density, cfg.mcmc, rng);
  });

  std::vector<LabeledState> samples;
  double acceptance = 0.0;
  for (auto& run : runs) {
    acceptance += run.acceptance_rate;
    for (auto& s : run.samples) {
      if (cfg.mode == GinibreMode::Plain) {
        samples.push_back(std::move(s));
        continue;
      }
      const double scale = std::sqrt(cfg.params.c_scale * cfg.n);
      auto pts = s.points();
      for (auto& p : pts) p = scale * (p - cfg.params.zeta);
      samples.push_back(LabeledState::sorted_plane(std::move(pts)));
    }
  }

  const double rho1 = central_density(samples, cfg.central_radius);
  const double rho1_ref = central_density(samples, cfg.pair_reference_radius);
  const auto edges = uniform_edges(cfg.s_min, cfg.s_max, cfg.bin_width);
  const auto curve = radial_pair_estimate_2d(samples, cfg.pair_reference_radius, edges);
  double max_dev = 0.0;
  for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
    const double ratio = curve.values[b] / (rho1_ref * rho1_ref);
    max_dev = std::max(max_dev, std::abs(ratio - ginibre_ratio_annulus_average(edges[b], edges[b + 1])));
  }
  report.statistics["density_error"] = std::abs(std::numbers::pi * rho1 - 1.0);
  report.statistics["ratio_max_deviation"] = max_dev;
  report.statistics["central_density"] = rho1;
  report.statistics["acceptance_rate"] = acceptance / static_cast<double>(runs.size());
  report.statistics["samples"] = static_cast<double>(samples.size());
  report.thresholds["density_error"] = cfg.density_threshold;
  report.thresholds["ratio_max_deviation"] = cfg.ratio_threshold;
  report.finalize();
  report.runtime_seconds = clock.seconds();
  return report;
}

ExperimentReport run_ginibre_dynamics(const GinibreDynamicsConfig& cfg, const RunContext& ctx, unsigned jobs) {
  const Stopwatch clock;
  ExperimentReport report;
  report.name = "ginibre_dynamics";
  report.ctx = ctx;
  ModelSpec spec;
  spec.dimension = Dimension::TwoD;
  spec.n_particles = cfg.n;
  require_valid(spec);
  report.spec = spec;
  if (cfg.replicas < 1) throw SpecError("replicas must be positive");

  IntegratorSettings settings;
  settings.dt = cfg.dt;
  settings.t_end = cfg.t_max;
  settings.record_stride = std::numeric_limits<int>::max();
  const GinibreDensity density;
  std::vector<std::vector<double>> before(static_cast<std::size_t>(cfg.replicas));
  std::vector<std::vector<double>> after(before.size());
  parallel_for(before.size(), jobs, [&](std::size_t k) {
    Rng rng(ctx.seed, k);
    const auto eq = mcmc_sample(spec, density, cfg.mcmc, rng).back();
    const auto traj = simulate(spec, settings, FullInteraction{}, ConstantOutside{0.0}, eq, rng);
    for (std::size_t i = 0; i < eq.size(); ++i) before[k].push_back(eq.modulus(i));
    const auto& last = traj.states.back();
    for (std::size_t i = 0; i < last.size(); ++i) after[k].push_back(last.modulus(i));
  });
  report.statistics["stationarity_ks"] = ks_two_sample(flatten(before), flatten(after));
  report.thresholds["stationarity_ks"] = cfg.ks_threshold;

  ModelSpec big = spec;
  big.n_particles = cfg.explore_n;
  std::vector<std::vector<double>> diffs(static_cast<std::size_t>(cfg.explore_replicas));
  parallel_for(diffs.size(), jobs, [&](std::size_t k) {
    Rng rng(ctx.seed, kPilotStreamOffset + k);
    const auto eq = mcmc_sample(big, density, cfg.mcmc, rng).back();
    diffs[k].assign(cfg.radii.size(), 0.0);
    double tagged = 0.0;
    for (std::size_t i = 0; i < eq.size(); ++i) {
      if (!(eq.modulus(i) < cfg.tag_radius)) continue;
      tagged += 1.0;
      for (std::size_t m = 0; m < cfg.radii.size(); ++m) {
        const double r = cfg.radii[m];
        const Point2 absolute = interaction_drift_2d(i, eq, AbsolutePosition{r}) - eq.point(i);
        const Point2 relative = interaction_drift_2d(i, eq, RelativeDistance{r});
        diffs[k][m] += norm2(absolute - relative);
      }
    }
    if (tagged > 0.0)
      for (double& d : diffs[k]) d /= tagged;
  });
  for (std::size_t m = 0; m < cfg.radii.size(); ++m) {
    double mean = 0.0;
    for (const auto& d : diffs) mean += d[m];
    report.statistics["drift_difference_r" + format_double(cfg.radii[m])] = mean / static_cast<double>(diffs.size());
  }
  report.finalize();
  report.runtime_seconds = clock.seconds();
  return report;
}

ExperimentReport run_tightness(std::span<const LabeledState> samples, double r, double t,
                               const std::vector<std::size_t>& l_grid, const RunContext& ctx, double threshold) {
  const Stopwatch clock;
  if (l_grid.empty()) throw SpecError("l_grid must not be empty");
  ExperimentReport report;
  report.name = "tightness";
  report.ctx = ctx;
  if (!samples.empty()) {
    report.spec.dimension = samples.front().dimension();
    report.spec.n_particles = static_cast<int>(std::max<std::size_t>(1, samples.front().size()));
  }
  std::vector<std::size_t> grid = l_grid;
  std::sort(grid.begin(), grid.end());
  double previous = std::numeric_limits<double>::infinity();
  double violations = 0.0;
  double value = 0.0;
  for (std::size_t l : grid) {
    value = tightness_diagnostic(samples, l, r, t);
    report.statistics["diagnostic_l" + std::to_string(l)] = value;
    if (value > previous) violations += 1.0;
    previous = value;
  }
  report.statistics["diagnostic_at_max_l"] = value;
  report.statistics["monotonicity_violations"] = violations;
  report.thresholds["diagnostic_at_max_l"] = threshold;
  report.thresholds["monotonicity_violations"] = 0.0;
  report.finalize();
  report.runtime_seconds = clock.seconds();
  return report;
}

}  // namespace loggas
