#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "loggas/model.hpp"

namespace loggas {

/// Ordered `key = value` pairs of a flat text document.
using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Parses `key = value` lines. Blank lines and `#` comments are ignored; a later
/// occurrence of a key replaces the earlier one. Throws SpecError on malformed lines.
KeyValues parse_key_values(std::string_view text);

/// Sets key to value, replacing an existing entry or appending a new one.
void set_key(KeyValues& kv, const std::string& key, const std::string& value);

/// Shortest decimal text that reads back to exactly the same double ("inf" for infinity).
std::string format_double(double v);
/// Parses a real, accepting "inf"/"infinity". Throws SpecError.
double parse_double(std::string_view text);
/// Parses a bracketed list "[a, b, c]".
std::vector<double> parse_double_list(std::string_view text);

/// Spec file format:
///
///     dimension = 1d | 2d
///     beta = <real>
///     V = [v0, v1, ...]                # coefficients in increasing degree ("potential" also accepted)
///     theta = <real>
///     n_particles = <int>
///     window_radius = <real> | inf
///     scaling = raw | bulk
///     rho_theta = semicircle | <real>  # equilibrium density at theta
///     ginibre.gamma / ginibre.omega / ginibre.k_p / ginibre.c_scale = <real>
///     ginibre.zeta = [re, im]
///
/// Ginibre keys are optional; the presence of any of them enables the parameters.
/// Keys not listed above are returned in `extra` (experiment parameters).
struct ParsedSpec {
  ModelSpec spec;
  KeyValues extra;
};

ParsedSpec spec_from_key_values(const KeyValues& kv);
ModelSpec parse_spec(std::string_view text);
/// Canonical form; parse_spec(print_spec(s)) == s and printing is idempotent.
std::string print_spec(const ModelSpec& spec);
KeyValues spec_to_key_values(const ModelSpec& spec);

}  // namespace loggas
