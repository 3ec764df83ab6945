#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "remsim/deploy.hpp"
#include "remsim/mesh.hpp"
#include "remsim/scene.hpp"

namespace remsim {

inline constexpr const char* kToolVersion = "0.3.0";
inline constexpr const char* kResultsCsvHeader =
    "scheme,M,J,k,seed,region_rpe,measured_rem_error,region_entropy,predicted_rpe,entropy_upper,rpe_upper,"
    "empty_fraction";

struct SweepSpec {
  explicit SweepSpec(CoverageScene s) : scene(std::move(s)) {}

  CoverageScene scene;
  std::string scene_source;            // provenance note only
  std::vector<int> meshes_per_side;    // m values, M = m^2
  std::vector<Scheme> schemes{Scheme::OnePerMesh};
  std::vector<double> density_ratios{1.0};  // k values for the random scheme
  int seeds = 20;
  std::uint64_t master_seed = 1;
  int subsamples = 32;
  int raster_resolution = 1024;
  std::vector<double> betas;  // target RPEs for sensor-requirement tables
  std::string out_dir;        // empty: nothing written

  void validate() const;
};

nlohmann::json to_json(const SweepSpec& spec);
SweepSpec sweep_spec_from_json(const nlohmann::json& j);

struct SweepRow {
  Scheme scheme = Scheme::OnePerMesh;
  std::int64_t meshes = 0;
  std::int64_t sensors = 0;
  double density_ratio = 1.0;
  std::uint64_t seed = 0;
  double region_rpe = 0.0;
  double measured_rem_error = 0.0;
  double region_entropy = 0.0;
  double predicted_rpe = 0.0;
  double entropy_upper = 0.0;
  double rpe_upper = 0.0;
  double empty_fraction = 0.0;
};

struct Summary {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation
};

struct SweepAggregate {
  Scheme scheme = Scheme::OnePerMesh;
  std::int64_t meshes = 0;
  double density_ratio = 1.0;
  int runs = 0;
  Summary region_rpe;
  Summary measured_rem_error;
  Summary region_entropy;
  Summary empty_fraction;
  double predicted_rpe = 0.0;
  double entropy_upper = 0.0;
  double rpe_upper = 0.0;
};

struct RequirementRow {
  double beta = 0.0;
  double density_ratio = 0.0;
  std::int64_t m1 = 0;
  std::int64_t m2 = 0;
  std::optional<std::int64_t> m3;
};

struct RunRecord {
  nlohmann::json config;  // echo of the sweep configuration, enough to reproduce the CSV
  int networks = 0;
  int parameters = 0;
  double xi_analytic = 0.0;
  double xi_raster = 0.0;
  std::vector<SweepRow> rows;
  std::vector<SweepAggregate> aggregates;
  std::vector<RequirementRow> requirements;
  double wall_clock_seconds = 0.0;
  std::string tool_version = kToolVersion;
};

/// Evaluates every (m, scheme, k, seed) point in a fixed order. Each point
/// draws its deployment and fill from a seed derived from (master seed,
/// point index). Writes results.csv and run.json when out_dir is set.
RunRecord run_sweep(const SweepSpec& spec);

/// run_sweep over both schemes plus M1/M2/M3 tables for every (beta, k).
/// Throws std::invalid_argument unless both schemes are listed.
RunRecord compare_schemes(const SweepSpec& spec);

std::string results_csv(const RunRecord& record);
nlohmann::json to_json(const RunRecord& record);
void write_run_outputs(const RunRecord& record, const std::string& out_dir);

Summary summarize(const std::vector<double>& values);

/// Meshes a coverage circle passes through, from the exact disk geometry.
std::vector<bool> boundary_meshes(const CoverageScene& scene, const MeshGrid& grid);
/// Meshes within one mesh (8-neighborhood) of a boundary mesh.
std::vector<bool> boundary_adjacent_meshes(const CoverageScene& scene, const MeshGrid& grid);

}  // namespace remsim
