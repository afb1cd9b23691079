#pragma once

#include <map>
#include <string>
#include <vector>

#include "loggas/drift.hpp"
#include "loggas/model.hpp"
#include "loggas/samplers.hpp"

namespace loggas {

/// Named statistics with thresholds; a report passes when every thresholded statistic
/// is at most its threshold. Statistics without a threshold are informational.
struct ExperimentReport {
  std::string name;
  ModelSpec spec;
  std::map<std::string, double> statistics;
  std::map<std::string, double> thresholds;
  bool passed = false;
  double runtime_seconds = 0.0;
  RunContext ctx;

  /// Recomputes `passed` from statistics and thresholds.
  void finalize();
};

/// Flat `key = value` text. Timestamp and runtime are written as `meta.*` keys and only
/// when include_metadata is set.
std::string format_report(const ExperimentReport& report, bool include_metadata);
/// Parses a report written by format_report (metadata keys are ignored).
ExperimentReport parse_report(std::string_view text);

struct SemicircleConfig {
  int n = 500;
  double beta = 2.0;
  int replicas = 50;
  double ks_threshold = 0.02;
};
/// Pooled tridiagonal samples against the equilibrium semicircle CDF.
ExperimentReport run_semicircle(const SemicircleConfig& cfg, const RunContext& ctx, unsigned jobs);

struct BulkUniversalityConfig {
  int n = 1000;
  int replicas = 200;
  /// Reference points are taken from |s| < window_halfwidth in bulk units.
  double window_halfwidth = 40.0;
  double s_min = 0.2;
  double s_max = 3.0;
  double bin_width = 0.1;
  double max_deviation_threshold = 0.1;
};
/// beta = 2 Gaussian samples scaled at theta = 0; rho^2(0, s) against the sine kernel.
ExperimentReport run_bulk_universality(const BulkUniversalityConfig& cfg, const RunContext& ctx, unsigned jobs);

enum class OnePointChoice { Constant, Tabulated };

struct InvarianceConfig {
  /// 1D bulk-scaled spec; window_radius is the simulation window in bulk units.
  ModelSpec spec;
  double t_max = 1.0;
  double dt = 1e-4;
  int replicas = 500;
  int record_stride = 1;
  OnePointChoice rho1 = OnePointChoice::Constant;
  /// Samples used to tabulate rho^1 (200-bin histogram) for the Tabulated variant.
  int tabulation_samples = 200;
  double ks_threshold = 0.05;
  double residual_threshold = 1e-8;
};
/// Windowed dynamics from equilibrium; law of the running max of the reconstructed
/// Brownian functional of particles starting in the inner half-window.
ExperimentReport run_invariance_principle(const InvarianceConfig& cfg, const RunContext& ctx, unsigned jobs);

enum class GinibreMode { Plain, StrongNonHermitian };

struct GinibreStaticConfig {
  int n = 100;
  int replicas = 100;
  GinibreMode mode = GinibreMode::Plain;
  GinibreParams params;
  McmcSettings mcmc{3000, 1000, 0.5, 200, true, 100};
  double central_radius = 2.0;
  double pair_reference_radius = 3.0;
  double s_min = 0.3;
  double s_max = 2.5;
  double bin_width = 0.1;
  double density_threshold = 0.1;
  double ratio_threshold = 0.15;
};
/// MCMC Ginibre samples: central density against 1/pi and the pair ratio against 1 - e^{-s^2}.
ExperimentReport run_ginibre_static(const GinibreStaticConfig& cfg, const RunContext& ctx, unsigned jobs);

struct GinibreDynamicsConfig {
  int n = 50;
  double t_max = 0.5;
  double dt = 1e-3;
  int replicas = 100;
  McmcSettings mcmc{2000, 1000, 0.5, 1000, true, 100};
  double ks_threshold = 0.07;
  /// Exploratory truncation comparison on larger equilibrium samples.
  std::vector<double> radii{2.0, 4.0, 8.0};
  int explore_n = 200;
  int explore_replicas = 20;
  double tag_radius = 1.0;
};
/// Stationarity of the N-particle Ginibre SDE and the AbsolutePosition vs RelativeDistance
/// drift difference.
ExperimentReport run_ginibre_dynamics(const GinibreDynamicsConfig& cfg, const RunContext& ctx, unsigned jobs);

/// Tightness diagnostic over l_grid; passes when the value at the largest l is below threshold.
ExperimentReport run_tightness(std::span<const LabeledState> samples, double r, double t,
                               const std::vector<std::size_t>& l_grid, const RunContext& ctx,
                               double threshold = 0.01);

/// One equilibrium configuration in the spec's frame: tridiagonal for Gaussian beta in
/// {1,2,4}, otherwise the last state of an MCMC chain.
LabeledState equilibrium_state(const ModelSpec& spec, const McmcSettings& mcmc, Rng& rng);

/// Independent replica samples of the spec's equilibrium (tridiagonal for Gaussian beta in
/// {1,2,4}, MCMC otherwise), in the spec's frame. Replica k uses stream (seed, k).
std::vector<std::vector<LabeledState>> equilibrium_samples(const ModelSpec& spec, int replicas,
                                                           const McmcSettings& mcmc, const RunContext& ctx,
                                                           unsigned jobs);

}  // namespace loggas
