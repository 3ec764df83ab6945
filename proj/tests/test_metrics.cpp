#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "remsim/bounds.hpp"
#include "remsim/metrics.hpp"
#include "remsim/rng.hpp"

using namespace remsim;

namespace {

MeshDistribution dirichlet(Engine& rng, int n, double concentration_bias) {
  std::vector<double> p(static_cast<std::size_t>(n));
  double sum = 0.0;
  for (auto& v : p) {
    v = std::pow(uniform_open01(rng), concentration_bias);
    sum += v;
  }
  for (auto& v : p) v /= sum;
  return MeshDistribution(std::move(p), 1.0);
}

}  // namespace

TEST_CASE("mesh RPE") {
  CHECK(mesh_rpe(MeshDistribution({0, 0, 1, 0}, 1.0)) == 0.0);
  CHECK(mesh_rpe(MeshDistribution({0.25, 0.25, 0.25, 0.25}, 1.0)) == doctest::Approx(0.75));
  CHECK(mesh_rpe(MeshDistribution({0.6, 0.4}, 1.0)) == doctest::Approx(0.4));
}

TEST_CASE("region RPE") {
  const RegionPartition pure({MeshDistribution({1, 0}, 1.0), MeshDistribution({0, 1}, 1.0)});
  CHECK(region_rpe(pure) == 0.0);
  const RegionPartition two({MeshDistribution({0.9, 0.1}, 2.0), MeshDistribution({0.3, 0.7}, 2.0)});
  CHECK(region_rpe(two) == doctest::Approx(0.2));
  const RegionPartition unequal({MeshDistribution({0.9, 0.1}, 1.0), MeshDistribution({0.5, 0.5}, 3.0)});
  CHECK(region_rpe(unequal) == doctest::Approx(0.25 * 0.1 + 0.75 * 0.5));
}

TEST_CASE("mesh entropy") {
  CHECK(mesh_entropy(MeshDistribution({0.5, 0.5}, 1.0)) == doctest::Approx(1.0));
  CHECK(mesh_entropy(MeshDistribution({0, 1, 0}, 1.0)) == 0.0);
  CHECK(mesh_entropy(MeshDistribution({0.5, 0.25, 0.25}, 1.0)) == doctest::Approx(1.5));
}

TEST_CASE("region entropy on a regular grid") {
  constexpr int kMeshes = 16;
  std::vector<MeshDistribution> meshes;
  meshes.emplace_back(std::vector<double>{0.5, 0.5}, 1.0);
  for (int i = 1; i < kMeshes; ++i) meshes.emplace_back(std::vector<double>{1.0, 0.0}, 1.0);
  CHECK(region_entropy(RegionPartition(meshes)) == doctest::Approx(1.0 / kMeshes));
}

TEST_CASE("measured REM error") {
  const RegionPartition part({MeshDistribution({0.7, 0.3}, 1.0), MeshDistribution({0.2, 0.8}, 1.0)});
  CHECK(measured_rem_error(part, std::vector<int>{0, 1}) == doctest::Approx(region_rpe(part)));
  CHECK(measured_rem_error(RegionPartition({MeshDistribution({0.7, 0.3}, 1.0)}), std::vector<int>{1}) ==
        doctest::Approx(0.7));
  CHECK_THROWS_AS(measured_rem_error(part, std::vector<int>{0}), std::invalid_argument);
  CHECK_THROWS_AS(measured_rem_error(part, std::vector<int>{0, 2}), std::invalid_argument);

  SUBCASE("uniform random assignment on uniform meshes") {
    constexpr int n = 8;
    std::vector<MeshDistribution> meshes(400, MeshDistribution(std::vector<double>(n, 1.0 / n), 1.0));
    const RegionPartition uniform(meshes);
    Engine rng(4);
    std::vector<int> a(uniform.size());
    for (auto& v : a) v = static_cast<int>(uniform_index(rng, n));
    CHECK(measured_rem_error(uniform, a) == doctest::Approx(1.0 - 1.0 / n));
  }
}

TEST_CASE("metric ranges, optimality of the majority and the Fano sandwich per mesh") {
  Engine rng(2024);
  for (int n : {2, 4, 8, 32, 256}) {
    for (int trial = 0; trial < 500; ++trial) {
      const auto d = dirichlet(rng, n, 1.0 + 6.0 * uniform01(rng));
      const double pe = mesh_rpe(d);
      const double h = mesh_entropy(d);
      CHECK(pe >= 0.0);
      CHECK(pe <= 1.0 - 1.0 / n + 1e-12);
      CHECK(h >= 0.0);
      CHECK(h <= std::log2(n) + 1e-12);
      CHECK(feder_merhav_phi(pe, n) <= h + 1e-9);
      CHECK(h <= fano_upper_psi(pe, n) + 1e-9);

      const RegionPartition one({d});
      const int any = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(n)));
      CHECK(measured_rem_error(one, std::vector<int>{any}) >= region_rpe(one));
    }
  }
}

TEST_CASE("metrics report is consistent with its per-mesh vectors") {
  const RegionPartition part(
      {MeshDistribution({0.7, 0.3}, 1.0), MeshDistribution({0.2, 0.8}, 3.0), MeshDistribution({1.0, 0.0}, 2.0)});
  const auto r = compute_metrics(part);
  double rpe = 0.0;
  double h = 0.0;
  for (std::size_t i = 0; i < part.size(); ++i) {
    rpe += part.weights()[i] * r.per_mesh_rpe[i];
    h += part.weights()[i] * r.per_mesh_entropy[i];
  }
  CHECK(std::abs(rpe - r.region_rpe) < 1e-9);
  CHECK(std::abs(h - r.region_entropy) < 1e-9);
  CHECK_FALSE(r.measured_rem_error.has_value());
  const auto j = to_json(r);
  CHECK(j.at("per_mesh_rpe").size() == 3);
}
