#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

namespace remsim {

/// Inputs shared by the analytical bounds.
struct BoundsConfig {
  int parameters = 2;            // N = 2^T
  double boundary_length = 0.0;  // xi
  double region_edge = 1.0;      // L
  double target_rpe = 0.05;      // beta, in (0, 1)
  double density_ratio = 1.0;    // k = J / M, random deployment only

  double area() const noexcept { return region_edge * region_edge; }
  // Throws std::invalid_argument when an invariant is broken.
  void validate() const;
};

// Fano upper bound on entropy given error probability p (bits).
// Domain [0, 1 - 1/N]; throws std::domain_error outside it.
double fano_upper_psi(double p, int parameters);

// Feder-Merhav piecewise-linear lower bound. Domain [0, (N-1)/N].
double feder_merhav_phi(double p, int parameters);

// Packing-argument bounds on region entropy and RPE for M regular meshes.
double entropy_scaling_upper(const BoundsConfig& cfg, std::int64_t meshes);
double rpe_scaling_upper(const BoundsConfig& cfg, std::int64_t meshes);

/// A straight boundary crossing a unit mesh: angle to the horizontal in
/// [0, pi/4] and distance from the nearest corner, up to the mesh center.
class LineCut {
 public:
  LineCut(double angle, double offset);

  double angle() const noexcept { return angle_; }
  double offset() const noexcept { return offset_; }

  // Largest offset at which the cut still clips a triangular corner (x1 = x3).
  double corner_reach() const noexcept;
  // Width of the band in which the cut spans two opposite edges (x2).
  double band_width() const noexcept;
  static double max_offset(double angle) noexcept;

 private:
  double angle_;
  double offset_;
};

// Length of the cut inside the unit mesh.
double cut_length(const LineCut& c);
// Area on the minority side of the cut.
double cut_rpe(const LineCut& c);

struct CutConstants {
  double mean_length;  // E[xi_i]  ~ 0.7935
  double mean_rpe;     // E[p_e,i] ~ 0.1937
};

CutConstants expected_cut_constants();

struct LineOracleResult {
  std::int64_t samples = 0;
  double mean_xi = 0.0;
  double mean_pe = 0.0;
  double std_err_xi = 0.0;
  double std_err_pe = 0.0;
};

/// Monte Carlo means of cut_length / cut_rpe under a uniform angle and an
/// offset uniform on its angle-dependent support. Samples are drawn in
/// fixed-size batches, each with its own derived stream.
LineOracleResult mc_line_oracle(std::int64_t samples, std::uint64_t seed);

// Expected number of meshes crossed by a boundary of length xi.
double estimate_impure_meshes(double boundary_length, double mesh_edge);

double rpe_kappa(double boundary_length, double region_edge);
// kappa / sqrt(M).
double rpe_estimate(double boundary_length, double region_edge, std::int64_t meshes);

struct SensorRequirements {
  std::int64_t loose = 0;                   // M1
  std::int64_t estimated = 0;               // M2
  std::optional<std::int64_t> random_deployment;  // M3; empty when beta is unreachable at k
  // The same two quantities before rounding up to whole meshes.
  double estimated_real = 0.0;
  std::optional<double> random_deployment_real;
};

SensorRequirements sensor_requirements(const BoundsConfig& cfg);

struct EmptyMeshStats {
  double p_empty = 0.0;         // (1 - 1/M)^J
  double expected_empty = 0.0;  // M * p_empty
};

EmptyMeshStats empty_mesh_stats(std::int64_t meshes, std::int64_t sensors);

double random_rpe_upper(double boundary_length, double region_edge, std::int64_t meshes,
                        double density_ratio, int parameters);

/// Every analytical quantity for one configuration at M meshes.
struct BoundsReport {
  BoundsConfig config;
  std::int64_t meshes = 0;
  double kappa = 0.0;
  double predicted_rpe = 0.0;
  double psi_at_predicted = 0.0;
  double phi_at_predicted = 0.0;
  double impure_estimate = 0.0;
  double impure_packing_upper = 0.0;
  double entropy_upper = 0.0;
  double rpe_upper = 0.0;
  SensorRequirements requirements;
  std::int64_t sensors = 0;  // J = round(k M)
  EmptyMeshStats empty;
  double empty_limit = 0.0;  // e^-k
  double random_rpe_upper = 0.0;
  CutConstants cut_constants{};
};

BoundsReport make_bounds_report(const BoundsConfig& cfg, std::int64_t meshes);
nlohmann::json to_json(const BoundsReport& report);
std::string format_table(const BoundsReport& report);

}  // namespace remsim
