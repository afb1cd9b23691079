#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "loggas/spec_io.hpp"

namespace loggas {

enum class Subcommand { Sample, Simulate, Estimate, Experiment, Report };

struct CliCommand {
  Subcommand subcommand = Subcommand::Sample;
  std::string spec_path;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  /// `key=value` overrides applied to the spec file before validation.
  KeyValues overrides;
  /// Experiment name (experiment) or nothing.
  std::string name;
  /// Input file or directory (estimate, report).
  std::string input;
  unsigned jobs = 1;
  bool no_timestamps = false;
};

struct ParseOutcome {
  std::optional<CliCommand> command;
  /// Exit code to use when no command was produced (0 for --help, 2 for usage errors).
  int exit_code = 0;
};

ParseOutcome parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Runs a parsed command. Returns 0 on success, 1 when an experiment misses a threshold,
/// 2 on spec or I/O errors; never throws.
int dispatch(const CliCommand& cmd, std::ostream& out, std::ostream& err);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace loggas
