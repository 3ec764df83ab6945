#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "remsim/mesh.hpp"
#include "remsim/rem.hpp"
#include "remsim/scene.hpp"

namespace remsim {

enum class Scheme { OnePerMesh, Random };

std::string_view to_string(Scheme s) noexcept;
// Accepts "one-per-mesh" and "random"; throws std::invalid_argument otherwise.
Scheme parse_scheme(std::string_view name);

struct Sensor {
  Point position;
  int reading = 0;  // ground-truth radio parameter at position
  int mesh = 0;     // mesh the sensor reports for
};

struct Deployment {
  Scheme scheme = Scheme::OnePerMesh;
  std::vector<Sensor> sensors;
  std::uint64_t seed = 0;

  std::size_t sensor_count() const noexcept { return sensors.size(); }
};

// One sensor uniformly inside each mesh (strictly interior), J = M.
Deployment deploy_one_per_mesh(const CoverageScene& scene, const MeshGrid& grid, std::uint64_t seed);

// J sensors i.i.d. uniform over the region, ignoring mesh boundaries.
Deployment deploy_random(const CoverageScene& scene, const MeshGrid& grid, std::int64_t sensors,
                         std::uint64_t seed);

std::vector<int> sensors_per_mesh(const MeshGrid& grid, const Deployment& dep);

/// Majority vote of readings per mesh (ties to the lowest parameter). Meshes
/// without sensors get a uniform random parameter from a stream derived from
/// (seed, mesh index).
Rem build_rem(const CoverageScene& scene, const MeshGrid& grid, const Deployment& dep, std::uint64_t seed);

// CSV with header "mesh_index,x,y,reading".
void write_deployment_csv(const Deployment& dep, const std::string& path);

}  // namespace remsim
