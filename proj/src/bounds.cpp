#include "remsim/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "remsim/rng.hpp"

namespace remsim {

namespace {

constexpr double kDomainSlack = 1e-12;
constexpr double kQuarterPi = std::numbers::pi / 4.0;
constexpr std::int64_t kOracleBatch = 1 << 16;

double binary_entropy(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

double clamp_to_domain(double p, double hi, const char* what) {
  if (!(p >= -kDomainSlack && p <= hi + kDomainSlack)) throw std::domain_error(what);
  return std::clamp(p, 0.0, hi);
}

void require_parameters(int n) {
  if (n < 2) throw std::domain_error("parameter count must be >= 2");
}

void require_meshes(std::int64_t m) {
  if (m < 1) throw std::domain_error("mesh count must be >= 1");
}

// Rounds up, forgiving the last-bit error of products like (a/b)^2 that are
// integral in exact arithmetic.
std::int64_t ceil_count(double v) { return static_cast<std::int64_t>(std::ceil(v * (1.0 - 1e-12))); }

}  // namespace

void BoundsConfig::validate() const {
  if (parameters < 2) throw std::invalid_argument("N must be >= 2");
  if (!(boundary_length >= 0.0) || !std::isfinite(boundary_length)) throw std::invalid_argument("xi must be >= 0");
  if (!(region_edge > 0.0) || !std::isfinite(region_edge)) throw std::invalid_argument("L must be positive");
  if (!(target_rpe > 0.0 && target_rpe < 1.0)) throw std::invalid_argument("beta must lie in (0, 1)");
  if (!(density_ratio > 0.0) || !std::isfinite(density_ratio)) throw std::invalid_argument("k must be positive");
}

double fano_upper_psi(double p, int parameters) {
  require_parameters(parameters);
  const double n = parameters;
  p = clamp_to_domain(p, 1.0 - 1.0 / n, "psi: error probability outside [0, 1 - 1/N]");
  return binary_entropy(p) + p * std::log2(n - 1.0);
}

double feder_merhav_phi(double p, int parameters) {
  require_parameters(parameters);
  const double n = parameters;
  p = clamp_to_domain(p, (n - 1.0) / n, "phi: error probability outside [0, (N-1)/N]");
  // Segment i covers [(i-1)/i, i/(i+1)].
  const int seg = std::clamp(static_cast<int>(std::ceil(p / (1.0 - p))), 1, parameters - 1);
  const double i = seg;
  const double lo = (i - 1.0) / i;
  const double hi = i / (i + 1.0);
  const double slope = i * (i + 1.0) * std::log2((i + 1.0) / i);
  // Evaluate from the nearer breakpoint so both ends are exact.
  if (p - lo <= hi - p) return slope * (p - lo) + std::log2(i);
  return std::log2(i + 1.0) - slope * (hi - p);
}

double entropy_scaling_upper(const BoundsConfig& cfg, std::int64_t meshes) {
  require_meshes(meshes);
  return 2.0 * std::numbers::sqrt2 * cfg.boundary_length * std::log2(static_cast<double>(cfg.parameters)) /
         (std::sqrt(cfg.area()) * std::sqrt(static_cast<double>(meshes)));
}

double rpe_scaling_upper(const BoundsConfig& cfg, std::int64_t meshes) {
  require_meshes(meshes);
  return 2.0 * std::numbers::sqrt2 * cfg.boundary_length * cfg.region_edge / cfg.area() *
         (1.0 - 1.0 / cfg.parameters) / std::sqrt(static_cast<double>(meshes));
}

LineCut::LineCut(double angle, double offset) : angle_(angle), offset_(offset) {
  if (!(angle >= 0.0 && angle <= kQuarterPi + kDomainSlack)) throw std::domain_error("cut angle outside [0, pi/4]");
  angle_ = std::min(angle, kQuarterPi);
  if (!(offset >= 0.0 && offset <= max_offset(angle_) + kDomainSlack)) {
    throw std::domain_error("cut offset outside its support");
  }
}

double LineCut::max_offset(double angle) noexcept {
  return std::numbers::sqrt2 * std::sin(angle + kQuarterPi) / 2.0;
}

double LineCut::corner_reach() const noexcept { return std::sin(angle_); }

double LineCut::band_width() const noexcept {
  return std::max(0.0, std::numbers::sqrt2 * std::sin(angle_ + kQuarterPi) - 2.0 * std::sin(angle_));
}

double cut_length(const LineCut& c) {
  const double t = c.angle();
  const double x = c.offset();
  if (x < c.corner_reach()) return x * (std::tan(t) + 1.0 / std::tan(t));
  return 1.0 / std::cos(t);
}

double cut_rpe(const LineCut& c) {
  const double t = c.angle();
  const double x = c.offset();
  if (x < c.corner_reach()) return x * x / std::sin(2.0 * t);
  return x / std::cos(t) - std::tan(t) / 2.0;
}

CutConstants expected_cut_constants() {
  const double pi = std::numbers::pi;
  return {-4.0 * std::numbers::sqrt2 * std::atanh(1.0 - std::numbers::sqrt2) / pi,
          (pi + std::log(64.0)) / (12.0 * pi)};
}

LineOracleResult mc_line_oracle(std::int64_t samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("oracle needs at least one sample");
  double sum_xi = 0.0;
  double sum_xi2 = 0.0;
  double sum_pe = 0.0;
  double sum_pe2 = 0.0;
  const std::int64_t batches = (samples + kOracleBatch - 1) / kOracleBatch;
  for (std::int64_t b = 0; b < batches; ++b) {
    Engine rng = make_engine(seed, static_cast<std::uint64_t>(b));
    const std::int64_t count = std::min(kOracleBatch, samples - b * kOracleBatch);
    for (std::int64_t s = 0; s < count; ++s) {
      const double angle = uniform01(rng) * kQuarterPi;
      const double offset = uniform01(rng) * LineCut::max_offset(angle);
      const LineCut cut(angle, offset);
      const double xi = cut_length(cut);
      const double pe = cut_rpe(cut);
      sum_xi += xi;
      sum_xi2 += xi * xi;
      sum_pe += pe;
      sum_pe2 += pe * pe;
    }
  }
  const double n = static_cast<double>(samples);
  LineOracleResult r;
  r.samples = samples;
  r.mean_xi = sum_xi / n;
  r.mean_pe = sum_pe / n;
  if (samples > 1) {
    const double var_xi = std::max(0.0, (sum_xi2 - n * r.mean_xi * r.mean_xi) / (n - 1.0));
    const double var_pe = std::max(0.0, (sum_pe2 - n * r.mean_pe * r.mean_pe) / (n - 1.0));
    r.std_err_xi = std::sqrt(var_xi / n);
    r.std_err_pe = std::sqrt(var_pe / n);
  }
  return r;
}

double estimate_impure_meshes(double boundary_length, double mesh_edge) {
  if (!(mesh_edge > 0.0)) throw std::domain_error("mesh edge must be positive");
  return boundary_length / (expected_cut_constants().mean_length * mesh_edge);
}

double rpe_kappa(double boundary_length, double region_edge) {
  const auto c = expected_cut_constants();
  return c.mean_rpe * boundary_length / (c.mean_length * region_edge);
}

double rpe_estimate(double boundary_length, double region_edge, std::int64_t meshes) {
  require_meshes(meshes);
  return rpe_kappa(boundary_length, region_edge) / std::sqrt(static_cast<double>(meshes));
}

SensorRequirements sensor_requirements(const BoundsConfig& cfg) {
  cfg.validate();
  const double n = cfg.parameters;
  const double beta = cfg.target_rpe;
  SensorRequirements r;
  const double loose = 2.0 * std::numbers::sqrt2 * cfg.boundary_length * (n - 1.0) / (cfg.region_edge * n * beta);
  r.loose = ceil_count(loose * loose);
  const double kappa = rpe_kappa(cfg.boundary_length, cfg.region_edge);
  r.estimated_real = (kappa / beta) * (kappa / beta);
  r.estimated = ceil_count(r.estimated_real);
  const double margin = beta - std::exp(-cfg.density_ratio) * (1.0 - 1.0 / n);
  if (margin > 0.0) {
    r.random_deployment_real = (kappa / margin) * (kappa / margin);
    r.random_deployment = ceil_count(*r.random_deployment_real);
  }
  return r;
}

EmptyMeshStats empty_mesh_stats(std::int64_t meshes, std::int64_t sensors) {
  require_meshes(meshes);
  if (sensors < 0) throw std::domain_error("sensor count must be >= 0");
  const double m = static_cast<double>(meshes);
  const double p0 = std::pow(1.0 - 1.0 / m, static_cast<double>(sensors));
  return {p0, m * p0};
}

double random_rpe_upper(double boundary_length, double region_edge, std::int64_t meshes, double density_ratio,
                        int parameters) {
  require_parameters(parameters);
  return rpe_estimate(boundary_length, region_edge, meshes) +
         std::exp(-density_ratio) * (1.0 - 1.0 / parameters);
}

BoundsReport make_bounds_report(const BoundsConfig& cfg, std::int64_t meshes) {
  cfg.validate();
  require_meshes(meshes);
  BoundsReport r;
  r.config = cfg;
  r.meshes = meshes;
  r.kappa = rpe_kappa(cfg.boundary_length, cfg.region_edge);
  r.predicted_rpe = rpe_estimate(cfg.boundary_length, cfg.region_edge, meshes);
  const double p = std::min(r.predicted_rpe, 1.0 - 1.0 / cfg.parameters);
  r.psi_at_predicted = fano_upper_psi(p, cfg.parameters);
  r.phi_at_predicted = feder_merhav_phi(p, cfg.parameters);
  const double eps = cfg.region_edge / std::sqrt(static_cast<double>(meshes));
  r.impure_estimate = estimate_impure_meshes(cfg.boundary_length, eps);
  r.impure_packing_upper = 2.0 * std::numbers::sqrt2 * cfg.boundary_length / eps;
  r.entropy_upper = entropy_scaling_upper(cfg, meshes);
  r.rpe_upper = rpe_scaling_upper(cfg, meshes);
  r.requirements = sensor_requirements(cfg);
  r.sensors = std::llround(cfg.density_ratio * static_cast<double>(meshes));
  r.empty = empty_mesh_stats(meshes, r.sensors);
  r.empty_limit = std::exp(-cfg.density_ratio);
  r.random_rpe_upper =
      random_rpe_upper(cfg.boundary_length, cfg.region_edge, meshes, cfg.density_ratio, cfg.parameters);
  r.cut_constants = expected_cut_constants();
  return r;
}

nlohmann::json to_json(const BoundsReport& r) {
  nlohmann::json m3 = nullptr;
  if (r.requirements.random_deployment) m3 = *r.requirements.random_deployment;
  return {
      {"config",
       {{"N", r.config.parameters},
        {"xi", r.config.boundary_length},
        {"L", r.config.region_edge},
        {"S", r.config.area()},
        {"beta", r.config.target_rpe},
        {"k", r.config.density_ratio}}},
      {"M", r.meshes},
      {"kappa", r.kappa},
      {"predicted_rpe", r.predicted_rpe},
      {"psi", r.psi_at_predicted},
      {"phi", r.phi_at_predicted},
      {"K_estimate", r.impure_estimate},
      {"K_packing_upper", r.impure_packing_upper},
      {"entropy_upper", r.entropy_upper},
      {"rpe_upper", r.rpe_upper},
      {"M1", r.requirements.loose},
      {"M2", r.requirements.estimated},
      {"M3", m3},
      {"M3_feasible", r.requirements.random_deployment.has_value()},
      {"J", r.sensors},
      {"p_empty", r.empty.p_empty},
      {"expected_empty", r.empty.expected_empty},
      {"p_empty_limit", r.empty_limit},
      {"random_rpe_upper", r.random_rpe_upper},
      {"E_xi", r.cut_constants.mean_length},
      {"E_pe", r.cut_constants.mean_rpe},
  };
}

std::string format_table(const BoundsReport& r) {
  std::ostringstream out;
  auto row = [&out](const char* name, const std::string& value) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-20s %s\n", name, value.c_str());
    out << buf;
  };
  auto num = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::string(buf);
  };
  row("N", std::to_string(r.config.parameters));
  row("xi", num(r.config.boundary_length));
  row("L", num(r.config.region_edge));
  row("beta", num(r.config.target_rpe));
  row("k", num(r.config.density_ratio));
  row("M", std::to_string(r.meshes));
  row("E[xi_i]", num(r.cut_constants.mean_length));
  row("E[p_e,i]", num(r.cut_constants.mean_rpe));
  row("kappa", num(r.kappa));
  row("predicted p_e", num(r.predicted_rpe));
  row("psi(p_e)", num(r.psi_at_predicted));
  row("phi(p_e)", num(r.phi_at_predicted));
  row("K estimate", num(r.impure_estimate));
  row("K packing upper", num(r.impure_packing_upper));
  row("entropy upper", num(r.entropy_upper));
  row("rpe upper", num(r.rpe_upper));
  row("M1", std::to_string(r.requirements.loose));
  row("M2", std::to_string(r.requirements.estimated));
  row("M3", r.requirements.random_deployment ? std::to_string(*r.requirements.random_deployment)
                                             : std::string("infeasible"));
  row("J", std::to_string(r.sensors));
  row("p_empty", num(r.empty.p_empty));
  row("expected empty", num(r.empty.expected_empty));
  row("p_empty limit", num(r.empty_limit));
  row("random rpe upper", num(r.random_rpe_upper));
  return out.str();
}

}  // namespace remsim
