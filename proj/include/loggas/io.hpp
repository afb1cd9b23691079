#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "loggas/estimators.hpp"
#include "loggas/model.hpp"

namespace loggas {

/// One configuration tagged with the replica that produced it.
struct ReplicaSample {
  std::int64_t replica_id = 0;
  LabeledState state;
};

/// `replica_id,point_index,coord_1[,coord_2]`, one row per point.
void write_samples_csv(std::ostream& out, std::span<const ReplicaSample> samples);
std::vector<ReplicaSample> read_samples_csv(std::istream& in, Dimension dimension, LabelOrder order);

/// `bin_center,value,count`.
void write_estimate_csv(std::ostream& out, const BinnedCurve& curve);

/// One JSON object per frame: {"t": ..., "points": [...], "pushes": [...]}, where pushes
/// are the reflection displacements summed over the steps leading to the frame.
void write_trajectory_jsonl(std::ostream& out, const Trajectory& traj);
/// `segment,substep,dt,coord,increment,push`, one row per coordinate of every substep.
void write_noise_csv(std::ostream& out, const Trajectory& traj);
/// Inverse of the two writers above.
Trajectory read_trajectory(std::istream& jsonl, std::istream& noise_csv, const ModelSpec& spec);

}  // namespace loggas
