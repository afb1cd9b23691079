#include "loggas/io.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "loggas/errors.hpp"
#include "loggas/spec_io.hpp"

namespace loggas {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

long long parse_integer(const std::string& s) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw IoError("bad integer '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw IoError("bad integer '" + s + "'");
  }
}

double parse_real(const std::string& s) {
  try {
    return parse_double(s);
  } catch (const SpecError& e) {
    throw IoError(e.what());
  }
}

LabeledState state_from(Dimension dim, const std::vector<double>& coords, LabelOrder order) {
  if (coords.size() % static_cast<std::size_t>(components(dim)) != 0) throw IoError("odd number of 2D coordinates");
  return LabeledState::from_coords(dim, coords, order);
}

}  // namespace

void write_samples_csv(std::ostream& out, std::span<const ReplicaSample> samples) {
  const bool planar = !samples.empty() && samples.front().state.dimension() == Dimension::TwoD;
  out << (planar ? "replica_id,point_index,coord_1,coord_2\n" : "replica_id,point_index,coord_1\n");
  for (const auto& s : samples) {
    for (std::size_t i = 0; i < s.state.size(); ++i) {
      const Point2 p = s.state.point(i);
      out << s.replica_id << ',' << i << ',' << format_double(p.x);
      if (planar) out << ',' << format_double(p.y);
      out << '\n';
    }
  }
}

std::vector<ReplicaSample> read_samples_csv(std::istream& in, Dimension dimension, LabelOrder order) {
  std::string line;
  if (!std::getline(in, line)) return {};
  const std::size_t width = dimension == Dimension::OneD ? 3 : 4;
  std::vector<ReplicaSample> out;
  std::vector<double> coords;
  long long current = -1;
  auto flush = [&] {
    if (current >= 0) out.push_back({current, state_from(dimension, coords, order)});
    coords.clear();
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != width) throw IoError("sample row has " + std::to_string(f.size()) + " fields");
    const long long replica = parse_integer(f[0]);
    const long long index = parse_integer(f[1]);
    if (replica != current || index == 0) flush();
    current = replica;
    for (std::size_t c = 2; c < width; ++c) coords.push_back(parse_real(f[c]));
  }
  flush();
  return out;
}

void write_estimate_csv(std::ostream& out, const BinnedCurve& curve) {
  out << "bin_center,value,count\n";
  const auto centers = curve.centers();
  for (std::size_t b = 0; b < centers.size(); ++b)
    out << format_double(centers[b]) << ',' << format_double(curve.values[b]) << ',' << format_double(curve.counts[b])
        << '\n';
}

void write_trajectory_jsonl(std::ostream& out, const Trajectory& traj) {
  for (std::size_t f = 0; f < traj.states.size(); ++f) {
    const auto coords = traj.states[f].coords();
    std::vector<double> pushes(coords.size(), 0.0);
    if (f > 0) {
      for (const auto& sub : traj.noise[f - 1].substeps)
        for (std::size_t c = 0; c < pushes.size(); ++c) pushes[c] += sub.pushes[c];
    }
    nlohmann::json rec;
    rec["t"] = traj.times[f];
    rec["points"] = std::vector<double>(coords.begin(), coords.end());
    rec["pushes"] = pushes;
    out << rec.dump() << '\n';
  }
}

void write_noise_csv(std::ostream& out, const Trajectory& traj) {
  out << "segment,substep,dt,coord,increment,push\n";
  for (std::size_t s = 0; s < traj.noise.size(); ++s) {
    const auto& subs = traj.noise[s].substeps;
    for (std::size_t k = 0; k < subs.size(); ++k) {
      for (std::size_t c = 0; c < subs[k].increments.size(); ++c) {
        out << s << ',' << k << ',' << format_double(subs[k].dt) << ',' << c << ','
            << format_double(subs[k].increments[c]) << ',' << format_double(subs[k].pushes[c]) << '\n';
      }
    }
  }
}

Trajectory read_trajectory(std::istream& jsonl, std::istream& noise_csv, const ModelSpec& spec) {
  Trajectory traj;
  traj.spec = spec;
  const LabelOrder later = spec.dimension == Dimension::OneD ? LabelOrder::AscendingValue : LabelOrder::Tracked;
  std::string line;
  while (std::getline(jsonl, line)) {
    if (line.empty()) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
      traj.times.push_back(rec.at("t").get<double>());
      const auto coords = rec.at("points").get<std::vector<double>>();
      const LabelOrder order = traj.states.empty() && spec.dimension == Dimension::TwoD
                                   ? (satisfies_order(spec.dimension, coords, LabelOrder::AscendingModulus)
                                          ? LabelOrder::AscendingModulus
                                          : LabelOrder::Tracked)
                                   : later;
      traj.states.push_back(state_from(spec.dimension, coords, order));
    } catch (const nlohmann::json::exception& e) {
      throw IoError(std::string("bad trajectory record: ") + e.what());
    }
  }
  if (traj.states.empty()) throw IoError("empty trajectory");
  traj.noise.resize(traj.states.size() - 1);

  if (!std::getline(noise_csv, line)) throw IoError("missing noise sidecar header");
  while (std::getline(noise_csv, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 6) throw IoError("noise row must have 6 fields");
    const auto seg = static_cast<std::size_t>(parse_integer(f[0]));
    const auto sub = static_cast<std::size_t>(parse_integer(f[1]));
    const auto coord = static_cast<std::size_t>(parse_integer(f[3]));
    if (seg >= traj.noise.size()) throw IoError("noise segment out of range");
    auto& subs = traj.noise[seg].substeps;
    if (sub == subs.size()) subs.push_back({parse_real(f[2]), {}, {}});
    if (sub + 1 != subs.size() || coord != subs.back().increments.size())
      throw IoError("noise rows out of order");
    subs.back().increments.push_back(parse_real(f[4]));
    subs.back().pushes.push_back(parse_real(f[5]));
  }
  return traj;
}

}  // namespace loggas
