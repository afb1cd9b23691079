#include "loggas/spec_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "loggas/errors.hpp"

namespace loggas {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

int parse_int(std::string_view text) {
  text = trim(text);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw SpecError("expected an integer, got '" + std::string(text) + "'");
  return value;
}

std::string format_list(std::span<const double> values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += format_double(values[i]);
  }
  return out + "]";
}

}  // namespace

KeyValues parse_key_values(std::string_view text) {
  KeyValues kv;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw SpecError("line " + std::to_string(line_no) + ": expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw SpecError("line " + std::to_string(line_no) + ": empty key");
    set_key(kv, std::string(key), std::string(value));
  }
  return kv;
}

void set_key(KeyValues& kv, const std::string& key, const std::string& value) {
  for (auto& [k, v] : kv) {
    if (k == key) {
      v = value;
      return;
    }
  }
  kv.emplace_back(key, value);
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  if (v == 0.0) return "0";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
  text = trim(text);
  const std::string l = lower(text);
  if (l == "inf" || l == "infinity" || l == "+inf") return std::numeric_limits<double>::infinity();
  if (l == "-inf" || l == "-infinity") return -std::numeric_limits<double>::infinity();
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
    throw SpecError("expected a real number, got '" + std::string(text) + "'");
  return value;
}

std::vector<double> parse_double_list(std::string_view text) {
  text = trim(text);
  if (text.size() < 2 || text.front() != '[' || text.back() != ']')
    throw SpecError("expected a list '[a, b, ...]', got '" + std::string(text) + "'");
  text = trim(text.substr(1, text.size() - 2));
  std::vector<double> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    out.push_back(parse_double(text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
    if (trim(text).empty()) throw SpecError("trailing comma in list");
  }
  return out;
}

ParsedSpec spec_from_key_values(const KeyValues& kv) {
  ParsedSpec out;
  ModelSpec& spec = out.spec;
  GinibreParams ginibre;
  bool has_ginibre = false;
  for (const auto& [key, value] : kv) {
    if (key == "dimension") {
      const auto v = lower(value);
      if (v == "1d") spec.dimension = Dimension::OneD;
      else if (v == "2d") spec.dimension = Dimension::TwoD;
      else throw SpecError("dimension must be 1d or 2d");
    } else if (key == "beta") {
      spec.beta = parse_double(value);
    } else if (key == "potential" || key == "V") {
      spec.potential = PolynomialPotential(parse_double_list(value));
    } else if (key == "theta") {
      spec.theta = parse_double(value);
    } else if (key == "n_particles" || key == "N") {
      spec.n_particles = parse_int(value);
    } else if (key == "window_radius" || key == "r") {
      const double r = parse_double(value);
      if (std::isinf(r) && r > 0) spec.window = InfiniteWindow{};
      else spec.window = FiniteWindow{r};
    } else if (key == "scaling") {
      const auto v = lower(value);
      if (v == "raw") spec.scaling = Scaling::Raw;
      else if (v == "bulk") spec.scaling = Scaling::Bulk;
      else throw SpecError("scaling must be raw or bulk");
    } else if (key == "rho_theta") {
      if (lower(value) == "semicircle") spec.density = SemicircleQuadratic{};
      else spec.density = UserSuppliedDensity{parse_double(value)};
    } else if (key.rfind("ginibre.", 0) == 0) {
      has_ginibre = true;
      const auto field = key.substr(8);
      if (field == "gamma") ginibre.gamma = parse_double(value);
      else if (field == "omega") ginibre.omega = parse_double(value);
      else if (field == "k_p") ginibre.k_p = parse_double(value);
      else if (field == "c_scale") ginibre.c_scale = parse_double(value);
      else if (field == "zeta") {
        const auto z = parse_double_list(value);
        if (z.size() != 2) throw SpecError("ginibre.zeta must be [re, im]");
        ginibre.zeta = {z[0], z[1]};
      } else {
        throw SpecError("unknown ginibre field '" + field + "'");
      }
    } else {
      out.extra.emplace_back(key, value);
    }
  }
  if (has_ginibre) spec.ginibre = ginibre;
  return out;
}

ModelSpec parse_spec(std::string_view text) {
  auto parsed = spec_from_key_values(parse_key_values(text));
  if (!parsed.extra.empty()) throw SpecError("unknown spec key '" + parsed.extra.front().first + "'");
  return parsed.spec;
}

KeyValues spec_to_key_values(const ModelSpec& spec) {
  KeyValues kv;
  kv.emplace_back("dimension", spec.dimension == Dimension::OneD ? "1d" : "2d");
  kv.emplace_back("beta", format_double(spec.beta));
  kv.emplace_back("V", format_list(spec.potential.coefficients()));
  kv.emplace_back("theta", format_double(spec.theta));
  kv.emplace_back("n_particles", std::to_string(spec.n_particles));
  kv.emplace_back("window_radius", format_double(radius_of(spec.window)));
  kv.emplace_back("scaling", spec.scaling == Scaling::Raw ? "raw" : "bulk");
  if (const auto* user = std::get_if<UserSuppliedDensity>(&spec.density)) {
    kv.emplace_back("rho_theta", format_double(user->value_at_theta));
  } else {
    kv.emplace_back("rho_theta", "semicircle");
  }
  if (spec.ginibre) {
    const auto& g = *spec.ginibre;
    kv.emplace_back("ginibre.gamma", format_double(g.gamma));
    kv.emplace_back("ginibre.omega", format_double(g.omega));
    kv.emplace_back("ginibre.k_p", format_double(g.k_p));
    kv.emplace_back("ginibre.c_scale", format_double(g.c_scale));
    const double zeta[2] = {g.zeta.x, g.zeta.y};
    kv.emplace_back("ginibre.zeta", format_list(zeta));
  }
  return kv;
}

std::string print_spec(const ModelSpec& spec) {
  std::ostringstream out;
  for (const auto& [k, v] : spec_to_key_values(spec)) out << k << " = " << v << '\n';
  return out.str();
}

}  // namespace loggas
