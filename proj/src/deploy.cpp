#include "remsim/deploy.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "remsim/rng.hpp"

namespace remsim {

namespace {

// Stream ids keep the scheme generators and the random fill independent.
constexpr std::uint64_t kOnePerMeshStream = 1;
constexpr std::uint64_t kRandomStream = 2;
constexpr std::uint64_t kFillStream = 3;

}  // namespace

std::string_view to_string(Scheme s) noexcept {
  return s == Scheme::OnePerMesh ? "one-per-mesh" : "random";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "one-per-mesh") return Scheme::OnePerMesh;
  if (name == "random") return Scheme::Random;
  throw std::invalid_argument("unknown scheme: " + std::string(name));
}

Deployment deploy_one_per_mesh(const CoverageScene& scene, const MeshGrid& grid, std::uint64_t seed) {
  Engine rng = make_engine(seed, kOnePerMeshStream);
  Deployment dep{Scheme::OnePerMesh, {}, seed};
  dep.sensors.reserve(static_cast<std::size_t>(grid.count()));
  for (int i = 0; i < grid.count(); ++i) {
    const Rect cell = grid.bounds(i);
    const double u = uniform_open01(rng);
    const double v = uniform_open01(rng);
    const Point p{cell.x0 + u * cell.width, cell.y0 + v * cell.height};
    dep.sensors.push_back({p, scene.radio_parameter(p), i});
  }
  return dep;
}

Deployment deploy_random(const CoverageScene& scene, const MeshGrid& grid, std::int64_t sensors,
                         std::uint64_t seed) {
  if (sensors < 0) throw std::invalid_argument("sensor count must be >= 0");
  Engine rng = make_engine(seed, kRandomStream);
  const double edge = grid.region_edge();
  Deployment dep{Scheme::Random, {}, seed};
  dep.sensors.reserve(static_cast<std::size_t>(sensors));
  for (std::int64_t s = 0; s < sensors; ++s) {
    const double x = uniform01(rng) * edge;
    const double y = uniform01(rng) * edge;
    const Point p{x, y};
    dep.sensors.push_back({p, scene.radio_parameter(p), grid.index_of(p)});
  }
  return dep;
}

std::vector<int> sensors_per_mesh(const MeshGrid& grid, const Deployment& dep) {
  std::vector<int> counts(static_cast<std::size_t>(grid.count()), 0);
  for (const auto& s : dep.sensors) {
    if (s.mesh < 0 || s.mesh >= grid.count()) throw std::invalid_argument("sensor mesh index out of range");
    ++counts[static_cast<std::size_t>(s.mesh)];
  }
  return counts;
}

Rem build_rem(const CoverageScene& scene, const MeshGrid& grid, const Deployment& dep, std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(scene.parameter_count());
  const auto m = static_cast<std::size_t>(grid.count());
  std::vector<std::uint32_t> votes(m * n, 0);
  for (const auto& s : dep.sensors) {
    if (s.reading < 0 || static_cast<std::size_t>(s.reading) >= n) {
      throw std::invalid_argument("sensor reading out of parameter range");
    }
    if (s.mesh < 0 || s.mesh >= grid.count()) throw std::invalid_argument("sensor mesh index out of range");
    votes[static_cast<std::size_t>(s.mesh) * n + static_cast<std::size_t>(s.reading)]++;
  }

  Rem rem{grid, std::vector<int>(m, 0), std::vector<bool>(m, false)};
  for (std::size_t i = 0; i < m; ++i) {
    const auto first = votes.begin() + static_cast<std::ptrdiff_t>(i * n);
    const auto best = std::max_element(first, first + static_cast<std::ptrdiff_t>(n));
    if (*best > 0) {
      rem.assignment[i] = static_cast<int>(best - first);
    } else {
      Engine rng = make_engine(derive_seed(seed, kFillStream), i);
      rem.assignment[i] = static_cast<int>(uniform_index(rng, n));
      rem.filled_randomly[i] = true;
    }
  }
  return rem;
}

void write_deployment_csv(const Deployment& dep, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write deployment file: " + path);
  out << "mesh_index,x,y,reading\n";
  char buf[128];
  for (const auto& s : dep.sensors) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%d\n", s.mesh, s.position.x,
                  s.position.y, s.reading);
    out << buf;
  }
}

}  // namespace remsim
