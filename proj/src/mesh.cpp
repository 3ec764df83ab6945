#include "remsim/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace remsim {

MeshGrid::MeshGrid(double region_edge, int per_side) : edge_(region_edge), per_side_(per_side) {
  if (!(region_edge > 0.0) || !std::isfinite(region_edge)) {
    throw std::invalid_argument("region edge must be positive");
  }
  if (per_side < 1) throw std::invalid_argument("meshes per side must be >= 1");
}

Rect MeshGrid::bounds(int index) const {
  if (index < 0 || index >= count()) throw std::out_of_range("mesh index out of range");
  const int row = index / per_side_;
  const int col = index % per_side_;
  const double eps = mesh_edge();
  return {col * eps, row * eps, eps, eps};
}

int MeshGrid::index_of(Point p) const {
  if (!(p.x >= 0.0 && p.x <= edge_ && p.y >= 0.0 && p.y <= edge_)) {
    throw std::domain_error("point outside region");
  }
  const auto cell = [this](double v) {
    return std::min(per_side_ - 1, static_cast<int>(v / edge_ * per_side_));
  };
  return cell(p.y) * per_side_ + cell(p.x);
}

MeshDistribution::MeshDistribution(std::vector<double> probabilities, double area)
    : p_(std::move(probabilities)), area_(area) {
  if (p_.empty()) throw std::invalid_argument("distribution must be non-empty");
  if (!(area_ > 0.0) || !std::isfinite(area_)) throw std::invalid_argument("mesh area must be positive");
  double sum = 0.0;
  for (double v : p_) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("probabilities must be non-negative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("probabilities must sum to 1");
}

RegionPartition::RegionPartition(std::vector<MeshDistribution> meshes) : meshes_(std::move(meshes)) {
  if (meshes_.empty()) throw std::invalid_argument("partition must contain at least one mesh");
  double total = 0.0;
  for (const auto& m : meshes_) {
    if (m.size() != meshes_.front().size()) throw std::invalid_argument("meshes disagree on parameter count");
    total += m.area();
  }
  weights_.reserve(meshes_.size());
  for (const auto& m : meshes_) weights_.push_back(m.area() / total);
}

MeshDistribution estimate_distribution(const CoverageScene& scene, const Rect& cell, int subsamples) {
  if (subsamples < 1) throw std::invalid_argument("subsamples must be >= 1");
  const auto n = static_cast<std::size_t>(scene.parameter_count());
  std::vector<std::size_t> counts(n, 0);
  const double dx = cell.width / subsamples;
  const double dy = cell.height / subsamples;
  for (int iy = 0; iy < subsamples; ++iy) {
    const double y = cell.y0 + (iy + 0.5) * dy;
    for (int ix = 0; ix < subsamples; ++ix) {
      const double x = cell.x0 + (ix + 0.5) * dx;
      ++counts[static_cast<std::size_t>(scene.radio_parameter_unchecked({x, y}))];
    }
  }
  const double total = static_cast<double>(subsamples) * subsamples;
  std::vector<double> p(n);
  for (std::size_t j = 0; j < n; ++j) p[j] = static_cast<double>(counts[j]) / total;
  return MeshDistribution(std::move(p), cell.area());
}

MeshDistribution estimate_distribution(const CoverageScene& scene, const MeshGrid& grid, int index,
                                       int subsamples) {
  return estimate_distribution(scene, grid.bounds(index), subsamples);
}

RegionPartition estimate_partition(const CoverageScene& scene, const MeshGrid& grid, int subsamples) {
  std::vector<MeshDistribution> meshes;
  meshes.reserve(static_cast<std::size_t>(grid.count()));
  for (int i = 0; i < grid.count(); ++i) meshes.push_back(estimate_distribution(scene, grid, i, subsamples));
  return RegionPartition(std::move(meshes));
}

int majority_parameter(const MeshDistribution& d) {
  const auto& p = d.probabilities();
  // max_element returns the first maximum, which is the lowest index.
  return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
}

MeshDistribution fuse(const MeshDistribution& a, const MeshDistribution& b) {
  const MeshDistribution parts[] = {a, b};
  return fuse_all(parts);
}

MeshDistribution fuse_all(std::span<const MeshDistribution> parts) {
  if (parts.empty()) throw std::invalid_argument("nothing to fuse");
  const std::size_t n = parts.front().size();
  double area = 0.0;
  for (const auto& d : parts) {
    if (d.size() != n) throw std::domain_error("cannot fuse distributions over different parameter counts");
    area += d.area();
  }
  std::vector<double> p(n, 0.0);
  for (const auto& d : parts) {
    for (std::size_t j = 0; j < n; ++j) p[j] += d.area() * d[j];
  }
  for (double& v : p) v /= area;
  return MeshDistribution(std::move(p), area);
}

std::vector<MeshDistribution> subdivide(const CoverageScene& scene, const MeshGrid& grid, int index,
                                        int factor, int subsamples) {
  if (factor < 2) throw std::invalid_argument("subdivision factor must be >= 2");
  const Rect parent = grid.bounds(index);
  const double w = parent.width / factor;
  const double h = parent.height / factor;
  std::vector<MeshDistribution> children;
  children.reserve(static_cast<std::size_t>(factor) * factor);
  for (int row = 0; row < factor; ++row) {
    for (int col = 0; col < factor; ++col) {
      children.push_back(estimate_distribution(scene, Rect{parent.x0 + col * w, parent.y0 + row * h, w, h}, subsamples));
    }
  }
  return children;
}

}  // namespace remsim
