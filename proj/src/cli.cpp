#include "loggas/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "loggas/errors.hpp"
#include "loggas/estimators.hpp"
#include "loggas/harness.hpp"
#include "loggas/integrator.hpp"
#include "loggas/io.hpp"
#include "loggas/parallel.hpp"

namespace loggas {

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
  return dir;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

/// Spec plus experiment parameters, with unused-parameter tracking.
class Inputs {
 public:
  Inputs(const CliCommand& cmd, const ModelSpec& fallback) {
    KeyValues kv = cmd.spec_path.empty() ? spec_to_key_values(fallback) : parse_key_values(read_file(cmd.spec_path));
    for (const auto& [k, v] : cmd.overrides) set_key(kv, k, v);
    auto parsed = spec_from_key_values(kv);
    const auto check = validate_spec(parsed.spec);
    if (!check.ok()) {
      std::string msg;
      for (const auto& v : check.violations) msg += (msg.empty() ? "" : "; ") + v;
      throw SpecError(msg);
    }
    spec = std::move(parsed.spec);
    extra_ = std::move(parsed.extra);
  }

  double number(const std::string& key, double fallback) {
    const auto* v = find(key);
    return v ? parse_double(*v) : fallback;
  }
  int integer(const std::string& key, int fallback) {
    const double v = number(key, fallback);
    if (v != std::floor(v)) throw SpecError("'" + key + "' must be an integer");
    return static_cast<int>(v);
  }
  std::string text(const std::string& key, const std::string& fallback) {
    const auto* v = find(key);
    return v ? *v : fallback;
  }
  std::vector<double> list(const std::string& key, std::vector<double> fallback) {
    const auto* v = find(key);
    return v ? parse_double_list(*v) : fallback;
  }
  McmcSettings mcmc(McmcSettings s = {}) {
    s.n_sweeps = integer("n_sweeps", s.n_sweeps);
    s.burn_in = integer("burn_in", s.burn_in);
    s.thinning = integer("thinning", s.thinning);
    s.proposal_scale = number("proposal_scale", s.proposal_scale);
    return s;
  }
  void warn_unused(std::ostream& err) const {
    for (const auto& [k, v] : extra_)
      if (std::find(used_.begin(), used_.end(), k) == used_.end()) err << "warning: unused parameter '" << k << "'\n";
  }

  ModelSpec spec;

 private:
  const std::string* find(const std::string& key) {
    for (const auto& [k, v] : extra_) {
      if (k == key) {
        used_.push_back(k);
        return &v;
      }
    }
    return nullptr;
  }
  KeyValues extra_;
  std::vector<std::string> used_;
};

TruncationMode parse_mode(const std::string& text) {
  if (text == "full") return FullInteraction{};
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    const double r = parse_double(text.substr(colon + 1));
    const auto kind = text.substr(0, colon);
    if (kind == "relative") return RelativeDistance{r};
    if (kind == "absolute") return AbsolutePosition{r};
  }
  throw SpecError("mode must be full, relative:<r> or absolute:<r>");
}

OnePointModel parse_rho1(const std::string& text) {
  if (text == "none") return ConstantOutside{0.0};
  if (text.starts_with("constant:")) return ConstantOutside{parse_double(text.substr(9))};
  throw SpecError("rho1 must be none or constant:<level>");
}

LabeledState restrict_to_window(const LabeledState& s, const WindowRadius& window) {
  const double r = radius_of(window);
  std::vector<double> keep;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(s.modulus(i) < r)) continue;
    const Point2 p = s.point(i);
    keep.push_back(p.x);
    if (s.dimension() == Dimension::TwoD) keep.push_back(p.y);
  }
  return LabeledState::from_coords(s.dimension(), keep, s.order());
}

ModelSpec ginibre_default(int n) {
  ModelSpec spec;
  spec.dimension = Dimension::TwoD;
  spec.n_particles = n;
  return spec;
}

void print_summary(std::ostream& out, const std::vector<ExperimentReport>& reports) {
  out << std::left << std::setw(20) << "experiment" << std::setw(12) << "seed" << std::setw(8) << "result"
      << "statistics\n";
  for (const auto& r : reports) {
    out << std::setw(20) << r.name << std::setw(12) << r.ctx.seed << std::setw(8) << (r.passed ? "PASS" : "FAIL");
    bool first = true;
    for (const auto& [k, v] : r.statistics) {
      out << (first ? "" : ", ") << k << '=' << format_double(v);
      if (const auto it = r.thresholds.find(k); it != r.thresholds.end()) out << " (<= " << format_double(it->second) << ')';
      first = false;
    }
    out << '\n';
  }
}

int run_sample(const CliCommand& cmd, std::ostream& out, std::ostream& err) {
  Inputs in(cmd, ModelSpec{});
  const int replicas = in.integer("replicas", 1);
  const auto mcmc = in.mcmc();
  in.warn_unused(err);
  RunContext ctx;
  ctx.seed = cmd.seed;
  const auto nested = equilibrium_samples(in.spec, replicas, mcmc, ctx, cmd.jobs);
  std::vector<ReplicaSample> rows;
  for (std::size_t k = 0; k < nested.size(); ++k)
    for (const auto& s : nested[k]) rows.push_back({static_cast<std::int64_t>(k), s.relabeled(LabelOrder::AscendingModulus)});
  const auto path = ensure_dir(cmd.out_dir) / "samples.csv";
  auto file = open_out(path);
  write_samples_csv(file, rows);
  out << "wrote " << rows.size() << " configurations to " << path.string() << '\n';
  return 0;
}

int run_simulate(const CliCommand& cmd, std::ostream& out, std::ostream& err) {
  Inputs in(cmd, ModelSpec{});
  IntegratorSettings settings;
  settings.dt = in.number("dt", settings.dt);
  settings.t_end = in.number("T", settings.t_end);
  settings.record_stride = in.integer("record_stride", settings.record_stride);
  settings.max_substep_depth = in.integer("max_substep_depth", settings.max_substep_depth);
  const auto mode = parse_mode(in.text("mode", "full"));
  const auto rho1 = parse_rho1(in.text("rho1", in.spec.scaling == Scaling::Bulk ? "constant:1" : "none"));
  const auto mcmc = in.mcmc();
  in.warn_unused(err);

  Rng rng(cmd.seed, 0);
  auto initial = restrict_to_window(equilibrium_state(in.spec, mcmc, rng), in.spec.window);
  if (in.spec.dimension == Dimension::OneD) initial = initial.relabeled(LabelOrder::AscendingValue);
  const auto traj = simulate(in.spec, settings, mode, rho1, initial, rng);
  const auto recon = reconstruct_brownian(traj, mode, rho1);

  const auto dir = ensure_dir(cmd.out_dir);
  auto jsonl = open_out(dir / "trajectory.jsonl");
  write_trajectory_jsonl(jsonl, traj);
  auto noise = open_out(dir / "noise.csv");
  write_noise_csv(noise, traj);
  out << "wrote " << traj.states.size() << " frames of " << initial.size() << " particles to "
      << (dir / "trajectory.jsonl").string() << "\nreconstruction residual " << format_double(recon.max_residual)
      << '\n';
  return 0;
}

int run_estimate(const CliCommand& cmd, std::ostream& out, std::ostream& err) {
  if (cmd.input.empty()) throw IoError("estimate needs --input <samples.csv>");
  Inputs in(cmd, ModelSpec{});
  const int k = in.integer("k", 2);
  std::ifstream file(cmd.input);
  if (!file) throw IoError("cannot read '" + cmd.input + "'");
  std::vector<LabeledState> samples;
  for (auto& row : read_samples_csv(file, in.spec.dimension, LabelOrder::AscendingModulus))
    samples.push_back(std::move(row.state));
  BinnedCurve curve;
  const bool planar = in.spec.dimension == Dimension::TwoD;
  if (k == 1) {
    const double lo = in.number("lo", planar ? 0.0 : -2.0);
    const double hi = in.number("hi", 2.0);
    const double width = in.number("width", 0.1);
    std::vector<double> edges;
    for (long b = 0; lo + static_cast<double>(b) * width < hi + 1e-12; ++b) edges.push_back(lo + static_cast<double>(b) * width);
    if (planar) {
      curve = radial_density_2d(samples, edges);
    } else {
      const auto est = estimate_rho_k(samples, 1, edges, InfiniteWindow{});
      curve.edges = est.bin_edges;
      curve.values = est.values;
      curve.counts = est.counts;
    }
  } else if (k == 2) {
    const double lo = in.number("lo", planar ? 0.3 : 0.2);
    const double hi = in.number("hi", planar ? 2.5 : 3.0);
    const double width = in.number("width", 0.1);
    std::vector<double> edges;
    for (long b = 0; lo + static_cast<double>(b) * width < hi + 1e-12; ++b) edges.push_back(lo + static_cast<double>(b) * width);
    curve = planar ? radial_pair_estimate_2d(samples, in.number("radius", 3.0), edges)
                   : pair_gap_estimate_1d(samples, in.number("halfwidth", 3.0), edges);
  } else {
    throw SpecError("k must be 1 or 2");
  }
  in.warn_unused(err);
  const auto path = ensure_dir(cmd.out_dir) / "estimate.csv";
  auto o = open_out(path);
  write_estimate_csv(o, curve);
  out << "wrote " << curve.values.size() << " bins to " << path.string() << '\n';
  return 0;
}

ExperimentReport build_experiment(const CliCommand& cmd, std::ostream& err) {
  RunContext ctx;
  ctx.seed = cmd.seed;
  const std::string& name = cmd.name;
  if (name == "semicircle") {
    Inputs in(cmd, [] {
      ModelSpec s;
      s.n_particles = 500;
      return s;
    }());
    SemicircleConfig cfg;
    cfg.n = in.spec.n_particles;
    cfg.beta = in.spec.beta;
    cfg.replicas = in.integer("replicas", cfg.replicas);
    cfg.ks_threshold = in.number("ks_threshold", cfg.beta == 1.0 ? 0.03 : cfg.ks_threshold);
    in.warn_unused(err);
    return run_semicircle(cfg, ctx, cmd.jobs);
  }
  if (name == "bulk_universality") {
    Inputs in(cmd, [] {
      ModelSpec s;
      s.n_particles = 1000;
      return s;
    }());
    BulkUniversalityConfig cfg;
    cfg.n = in.spec.n_particles;
    cfg.replicas = in.integer("replicas", cfg.replicas);
    cfg.window_halfwidth = in.number("halfwidth", cfg.window_halfwidth);
    cfg.bin_width = in.number("bin_width", cfg.bin_width);
    in.warn_unused(err);
    return run_bulk_universality(cfg, ctx, cmd.jobs);
  }
  if (name == "invariance") {
    Inputs in(cmd, [] {
      ModelSpec s;
      s.n_particles = 50;
      s.scaling = Scaling::Bulk;
      s.window = FiniteWindow{5.0};
      return s;
    }());
    InvarianceConfig cfg;
    cfg.spec = in.spec;
    cfg.t_max = in.number("T", cfg.t_max);
    cfg.dt = in.number("dt", cfg.dt);
    cfg.replicas = in.integer("replicas", cfg.replicas);
    cfg.record_stride = in.integer("record_stride", cfg.record_stride);
    const auto rho1 = in.text("rho1", "constant");
    if (rho1 != "constant" && rho1 != "tabulated") throw SpecError("rho1 must be constant or tabulated");
    cfg.rho1 = rho1 == "tabulated" ? OnePointChoice::Tabulated : OnePointChoice::Constant;
    in.warn_unused(err);
    return run_invariance_principle(cfg, ctx, cmd.jobs);
  }
  if (name == "ginibre_static") {
    Inputs in(cmd, ginibre_default(100));
    GinibreStaticConfig cfg;
    cfg.n = in.spec.n_particles;
    cfg.replicas = in.integer("replicas", cfg.replicas);
    cfg.mcmc = in.mcmc(cfg.mcmc);
    if (in.spec.ginibre) {
      cfg.mode = GinibreMode::StrongNonHermitian;
      cfg.params = *in.spec.ginibre;
    }
    in.warn_unused(err);
    return run_ginibre_static(cfg, ctx, cmd.jobs);
  }
  if (name == "ginibre_dynamics") {
    Inputs in(cmd, ginibre_default(50));
    GinibreDynamicsConfig cfg;
    cfg.n = in.spec.n_particles;
    cfg.t_max = in.number("T", cfg.t_max);
    cfg.dt = in.number("dt", cfg.dt);
    cfg.replicas = in.integer("replicas", cfg.replicas);
    cfg.radii = in.list("radii", cfg.radii);
    cfg.explore_n = in.integer("explore_n", cfg.explore_n);
    cfg.explore_replicas = in.integer("explore_replicas", cfg.explore_replicas);
    cfg.mcmc = in.mcmc(cfg.mcmc);
    in.warn_unused(err);
    return run_ginibre_dynamics(cfg, ctx, cmd.jobs);
  }
  if (name == "tightness") {
    Inputs in(cmd, ginibre_default(100));
    const double r = in.number("r", 3.0);
    const double t = in.number("T", 1.0);
    const int replicas = in.integer("replicas", 20);
    const auto mcmc = in.mcmc({2000, 1000, 0.5, 100, true, 100});
    const auto grid_values = in.list("l_grid", {1.0, 10.0, 50.0, static_cast<double>(in.spec.n_particles)});
    in.warn_unused(err);
    std::vector<std::size_t> grid;
    for (double l : grid_values) {
      if (!(l >= 1.0) || l != std::floor(l)) throw SpecError("l_grid entries must be positive integers");
      grid.push_back(static_cast<std::size_t>(l));
    }
    std::vector<LabeledState> samples;
    for (auto& group : equilibrium_samples(in.spec, replicas, mcmc, ctx, cmd.jobs))
      for (auto& s : group) samples.push_back(s.relabeled(LabelOrder::AscendingModulus));
    auto report = run_tightness(samples, r, t, grid, ctx);
    report.spec = in.spec;
    return report;
  }
  throw SpecError("unknown experiment '" + name +
                  "' (semicircle, bulk_universality, invariance, ginibre_static, ginibre_dynamics, tightness)");
}

int run_experiment(const CliCommand& cmd, std::ostream& out, std::ostream& err) {
  const auto report = build_experiment(cmd, err);
  const auto dir = ensure_dir(fs::path(cmd.out_dir) / "reports");
  const auto path = dir / (report.name + "-" + std::to_string(cmd.seed) + ".txt");
  auto file = open_out(path);
  file << format_report(report, !cmd.no_timestamps);
  file.close();
  print_summary(out, {report});
  out << "report: " << path.string() << '\n';
  return report.passed ? 0 : 1;
}

int run_report(const CliCommand& cmd, std::ostream& out) {
  const fs::path input = cmd.input.empty() ? fs::path(cmd.out_dir) / "reports" : fs::path(cmd.input);
  std::vector<fs::path> files;
  if (fs::is_directory(input)) {
    for (const auto& entry : fs::directory_iterator(input))
      if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
  } else if (fs::exists(input)) {
    files.push_back(input);
  }
  if (files.empty()) throw IoError("no reports found at '" + input.string() + "'");
  std::vector<ExperimentReport> reports;
  for (const auto& f : files) reports.push_back(parse_report(read_file(f.string())));
  print_summary(out, reports);
  return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.passed; }) ? 0 : 1;
}

}  // namespace

ParseOutcome parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Log-gas sampling, dynamics and universality checks"};
  app.require_subcommand(1);
  CliCommand cmd;
  std::vector<std::string> overrides;
  std::string jobs_text;

  auto common = [&](CLI::App* sub, bool spec_required) {
    auto* spec = sub->add_option("--spec", cmd.spec_path, "spec file (key = value)");
    if (spec_required) spec->required();
    sub->add_option("--seed", cmd.seed, "master seed");
    sub->add_option("--out", cmd.out_dir, "output directory");
    sub->add_option("--override", overrides, "key=value applied before validation")->allow_extra_args(false);
    sub->add_option("--jobs", cmd.jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--no-timestamps", cmd.no_timestamps, "omit run metadata from reports");
  };
  auto* sample = app.add_subcommand("sample", "draw equilibrium configurations");
  common(sample, true);
  auto* simulate_cmd = app.add_subcommand("simulate", "integrate the windowed SDE");
  common(simulate_cmd, true);
  auto* estimate = app.add_subcommand("estimate", "correlation estimates from a samples CSV");
  common(estimate, true);
  estimate->add_option("--input", cmd.input, "samples CSV")->required();
  auto* experiment = app.add_subcommand("experiment", "run a named experiment");
  common(experiment, false);
  experiment->add_option("--name", cmd.name, "experiment name")->required();
  auto* report = app.add_subcommand("report", "summarize report files");
  common(report, false);
  report->add_option("--input", cmd.input, "report file or directory");

  cmd.jobs = default_jobs();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return {std::nullopt, code == 0 ? 0 : 2};
  }
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0) {
      err << "--override expects key=value, got '" << o << "'\n";
      return {std::nullopt, 2};
    }
    cmd.overrides.emplace_back(o.substr(0, eq), o.substr(eq + 1));
  }
  if (sample->parsed()) cmd.subcommand = Subcommand::Sample;
  if (simulate_cmd->parsed()) cmd.subcommand = Subcommand::Simulate;
  if (estimate->parsed()) cmd.subcommand = Subcommand::Estimate;
  if (experiment->parsed()) cmd.subcommand = Subcommand::Experiment;
  if (report->parsed()) cmd.subcommand = Subcommand::Report;
  return {cmd, 0};
}

int dispatch(const CliCommand& cmd, std::ostream& out, std::ostream& err) {
  try {
    switch (cmd.subcommand) {
      case Subcommand::Sample:
        return run_sample(cmd, out, err);
      case Subcommand::Simulate:
        return run_simulate(cmd, out, err);
      case Subcommand::Estimate:
        return run_estimate(cmd, out, err);
      case Subcommand::Experiment:
        return run_experiment(cmd, out, err);
      case Subcommand::Report:
        return run_report(cmd, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  const auto parsed = parse_args(argc, argv, out, err);
  if (!parsed.command) return parsed.exit_code;
  return dispatch(*parsed.command, out, err);
}

}  // namespace loggas
