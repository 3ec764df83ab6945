#pragma once

#include <optional>
#include <vector>

#include "json.hpp"
#include "remsim/mesh.hpp"
#include "remsim/rem.hpp"

namespace remsim {

// Radio parameter error of one mesh: 1 - max_j p_j.
double mesh_rpe(const MeshDistribution& d);
double region_rpe(const RegionPartition& part);

// Entropies are in bits, with 0 log 0 = 0.
double mesh_entropy(const MeshDistribution& d);
double region_entropy(const RegionPartition& part);

/// Area-weighted error of an arbitrary assignment: sum_i alpha_i (1 - p_{i,j_i}).
/// Throws std::invalid_argument on a length mismatch or an out-of-range
/// parameter.
double measured_rem_error(const RegionPartition& part, const std::vector<int>& assignment);
double measured_rem_error(const RegionPartition& part, const Rem& rem);

struct MetricsReport {
  double region_rpe = 0.0;
  double region_entropy = 0.0;
  std::vector<double> per_mesh_rpe;
  std::vector<double> per_mesh_entropy;
  std::optional<double> measured_rem_error;
};

MetricsReport compute_metrics(const RegionPartition& part, const Rem* rem = nullptr);

nlohmann::json to_json(const MetricsReport& report);

}  // namespace remsim
