#include "remsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace remsim {

double mesh_rpe(const MeshDistribution& d) {
  const auto& p = d.probabilities();
  return 1.0 - *std::max_element(p.begin(), p.end());
}

double mesh_entropy(const MeshDistribution& d) {
  double h = 0.0;
  for (double v : d.probabilities()) {
    if (v > 0.0) h -= v * std::log2(v);
  }
  return std::max(0.0, h);
}

namespace {

template <typename F>
double weighted_mean(const RegionPartition& part, F&& per_mesh) {
  double total = 0.0;
  for (std::size_t i = 0; i < part.size(); ++i) total += part.weights()[i] * per_mesh(part.meshes()[i]);
  return total;
}

}  // namespace

double region_rpe(const RegionPartition& part) {
  return weighted_mean(part, [](const MeshDistribution& d) { return mesh_rpe(d); });
}

double region_entropy(const RegionPartition& part) {
  return weighted_mean(part, [](const MeshDistribution& d) { return mesh_entropy(d); });
}

double measured_rem_error(const RegionPartition& part, const std::vector<int>& assignment) {
  if (assignment.size() != part.size()) throw std::invalid_argument("assignment length does not match mesh count");
  double total = 0.0;
  for (std::size_t i = 0; i < part.size(); ++i) {
    const auto& d = part.meshes()[i];
    const int j = assignment[i];
    if (j < 0 || static_cast<std::size_t>(j) >= d.size()) throw std::invalid_argument("assigned parameter out of range");
    total += part.weights()[i] * (1.0 - d[static_cast<std::size_t>(j)]);
  }
  return total;
}

double measured_rem_error(const RegionPartition& part, const Rem& rem) {
  return measured_rem_error(part, rem.assignment);
}

MetricsReport compute_metrics(const RegionPartition& part, const Rem* rem) {
  MetricsReport r;
  r.per_mesh_rpe.reserve(part.size());
  r.per_mesh_entropy.reserve(part.size());
  for (const auto& d : part.meshes()) {
    r.per_mesh_rpe.push_back(mesh_rpe(d));
    r.per_mesh_entropy.push_back(mesh_entropy(d));
  }
  r.region_rpe = region_rpe(part);
  r.region_entropy = region_entropy(part);
  if (rem != nullptr) r.measured_rem_error = measured_rem_error(part, *rem);
  return r;
}

nlohmann::json to_json(const MetricsReport& report) {
  nlohmann::json j{{"region_rpe", report.region_rpe},
                   {"region_entropy", report.region_entropy},
                   {"per_mesh_rpe", report.per_mesh_rpe},
                   {"per_mesh_entropy", report.per_mesh_entropy}};
  if (report.measured_rem_error) j["measured_rem_error"] = *report.measured_rem_error;
  return j;
}

}  // namespace remsim
