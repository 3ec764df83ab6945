#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace remsim {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct Disk {
  Point center;
  double radius = 0.0;
};

// Coverage of a single network: the closed union of its disks.
struct NetworkCoverage {
  int index = 1;  // 1-based, contiguous within a scene
  std::vector<Disk> disks;
};

inline constexpr int kMaxNetworks = 8;

/// Square region [0, L]^2 covered by T <= 8 networks. Each point carries a
/// radio parameter in [0, 2^T): bit k-1 is set iff network k covers it.
///
/// Immutable once constructed; the constructor validates every invariant and
/// throws std::invalid_argument on a malformed scene.
class CoverageScene {
 public:
  CoverageScene(double region_edge, std::vector<NetworkCoverage> networks);

  double region_edge() const noexcept { return edge_; }
  double area() const noexcept { return edge_ * edge_; }
  int network_count() const noexcept { return static_cast<int>(networks_.size()); }
  int parameter_count() const noexcept { return 1 << network_count(); }
  const std::vector<NetworkCoverage>& networks() const noexcept { return networks_; }

  bool contains(Point p) const noexcept;

  /// Whether network k (1-based) covers p. Throws std::domain_error for a
  /// point outside the region or an invalid k.
  bool detect(int k, Point p) const;

  /// Sum over detected networks of 2^(k-1). Throws std::domain_error for a
  /// point outside the region.
  int radio_parameter(Point p) const;

  // Hot-loop variant; the caller guarantees p is inside the region.
  int radio_parameter_unchecked(Point p) const noexcept;
  bool covers_unchecked(int k, Point p) const noexcept;

 private:
  double edge_;
  std::vector<NetworkCoverage> networks_;
};

/// Total length, clipped to the region, of the set where the radio parameter
/// changes. Exact: sums the arcs of each disk that lie inside the region and
/// outside every other disk of the same network.
double boundary_length(const CoverageScene& scene);

/// Raster estimate of boundary_length: marching squares over an f x f sample
/// grid of the parameter field, run per network bit. Crossing points on
/// parameter-change edges are located by bisection on the field itself.
double boundary_length_raster(const CoverageScene& scene, int resolution = 1024);

struct SceneGenParams {
  int networks = 3;
  double region_edge = 1.0;
  std::uint64_t seed = 1;
  double radius_min = 0.15;
  double radius_max = 0.3;
  int disks_per_network = 1;
};

CoverageScene generate_scene(const SceneGenParams& params);

nlohmann::json scene_to_json(const CoverageScene& scene);
CoverageScene scene_from_json(const nlohmann::json& j);
CoverageScene load_scene(const std::string& path);
void save_scene(const CoverageScene& scene, const std::string& path);

}  // namespace remsim
