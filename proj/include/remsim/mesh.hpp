#pragma once

#include <span>
#include <vector>

#include "remsim/scene.hpp"

namespace remsim {

struct Rect {
  double x0 = 0.0;
  double y0 = 0.0;
  double width = 0.0;
  double height = 0.0;

  double area() const noexcept { return width * height; }
  bool contains(Point p) const noexcept {
    return p.x >= x0 && p.x <= x0 + width && p.y >= y0 && p.y <= y0 + height;
  }
};

/// Regular m x m partition of the region. Meshes are indexed row-major from
/// the lower-left corner: index = row * m + col.
class MeshGrid {
 public:
  MeshGrid(double region_edge, int per_side);

  int per_side() const noexcept { return per_side_; }
  int count() const noexcept { return per_side_ * per_side_; }
  double region_edge() const noexcept { return edge_; }
  double mesh_edge() const noexcept { return edge_ / per_side_; }

  Rect bounds(int index) const;
  // Points on the far region edge belong to the last row/column.
  int index_of(Point p) const;

 private:
  double edge_;
  int per_side_;
};

/// Area fractions p_j of each radio parameter inside one mesh.
class MeshDistribution {
 public:
  MeshDistribution(std::vector<double> probabilities, double area);

  const std::vector<double>& probabilities() const noexcept { return p_; }
  double operator[](std::size_t j) const noexcept { return p_[j]; }
  std::size_t size() const noexcept { return p_.size(); }
  double area() const noexcept { return area_; }

 private:
  std::vector<double> p_;
  double area_;
};

/// Meshes together with their area weights alpha_i = area_i / S.
class RegionPartition {
 public:
  explicit RegionPartition(std::vector<MeshDistribution> meshes);

  const std::vector<MeshDistribution>& meshes() const noexcept { return meshes_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return meshes_.size(); }

 private:
  std::vector<MeshDistribution> meshes_;
  std::vector<double> weights_;
};

/// Parameter distribution inside `cell` from an r x r lattice of cell-center
/// sub-points.
MeshDistribution estimate_distribution(const CoverageScene& scene, const Rect& cell, int subsamples);
MeshDistribution estimate_distribution(const CoverageScene& scene, const MeshGrid& grid, int index,
                                       int subsamples);

RegionPartition estimate_partition(const CoverageScene& scene, const MeshGrid& grid, int subsamples);

/// argmax_j p_j, ties to the lowest j.
int majority_parameter(const MeshDistribution& d);

MeshDistribution fuse(const MeshDistribution& a, const MeshDistribution& b);
MeshDistribution fuse_all(std::span<const MeshDistribution> parts);

/// Re-estimates the q x q children of mesh `index`, row-major from the
/// child at the mesh's lower-left corner.
std::vector<MeshDistribution> subdivide(const CoverageScene& scene, const MeshGrid& grid, int index,
                                        int factor, int subsamples);

}  // namespace remsim
