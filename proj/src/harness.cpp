#include "remsim/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>

#include "remsim/bounds.hpp"
#include "remsim/metrics.hpp"
#include "remsim/rng.hpp"

namespace remsim {

void SweepSpec::validate() const {
  if (meshes_per_side.empty()) throw std::invalid_argument("sweep needs at least one mesh count");
  for (int m : meshes_per_side) {
    if (m < 1) throw std::invalid_argument("meshes per side must be >= 1");
  }
  if (schemes.empty()) throw std::invalid_argument("sweep needs at least one scheme");
  for (double k : density_ratios) {
    if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("density ratio k must be positive");
  }
  if (std::find(schemes.begin(), schemes.end(), Scheme::Random) != schemes.end() && density_ratios.empty()) {
    throw std::invalid_argument("random scheme needs at least one density ratio");
  }
  if (seeds < 1) throw std::invalid_argument("seeds per point must be >= 1");
  if (subsamples < 1) throw std::invalid_argument("subsamples must be >= 1");
  if (raster_resolution < 2) throw std::invalid_argument("raster resolution must be >= 2");
  for (double b : betas) {
    if (!(b > 0.0 && b < 1.0)) throw std::invalid_argument("beta must lie in (0, 1)");
  }
}

nlohmann::json to_json(const SweepSpec& spec) {
  std::vector<std::string> schemes;
  for (auto s : spec.schemes) schemes.emplace_back(to_string(s));
  return {{"scene", scene_to_json(spec.scene)},
          {"scene_source", spec.scene_source},
          {"meshes_per_side", spec.meshes_per_side},
          {"schemes", schemes},
          {"density_ratios", spec.density_ratios},
          {"seeds", spec.seeds},
          {"master_seed", spec.master_seed},
          {"subsamples", spec.subsamples},
          {"raster_resolution", spec.raster_resolution},
          {"betas", spec.betas},
          {"out_dir", spec.out_dir}};
}

SweepSpec sweep_spec_from_json(const nlohmann::json& j) {
  try {
    SweepSpec spec(scene_from_json(j.at("scene")));
    spec.scene_source = j.value("scene_source", std::string{});
    spec.meshes_per_side = j.at("meshes_per_side").get<std::vector<int>>();
    spec.schemes.clear();
    for (const auto& s : j.at("schemes")) spec.schemes.push_back(parse_scheme(s.get<std::string>()));
    spec.density_ratios = j.value("density_ratios", std::vector<double>{1.0});
    spec.seeds = j.value("seeds", 20);
    spec.master_seed = j.value("master_seed", std::uint64_t{1});
    spec.subsamples = j.value("subsamples", 32);
    spec.raster_resolution = j.value("raster_resolution", 1024);
    spec.betas = j.value("betas", std::vector<double>{});
    spec.out_dir = j.value("out_dir", std::string{});
    spec.validate();
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed sweep config: ") + e.what());
  }
}

Summary summarize(const std::vector<double>& values) {
  Summary s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

namespace {

struct PointKey {
  Scheme scheme;
  double k;
};

std::vector<PointKey> point_keys(const SweepSpec& spec) {
  std::vector<PointKey> keys;
  for (auto scheme : spec.schemes) {
    if (scheme == Scheme::OnePerMesh) {
      keys.push_back({scheme, 1.0});
    } else {
      for (double k : spec.density_ratios) keys.push_back({scheme, k});
    }
  }
  return keys;
}

SweepAggregate aggregate(const std::vector<SweepRow>& rows, std::size_t begin, std::size_t end) {
  std::vector<double> rpe, measured, entropy, empty;
  for (std::size_t i = begin; i < end; ++i) {
    rpe.push_back(rows[i].region_rpe);
    measured.push_back(rows[i].measured_rem_error);
    entropy.push_back(rows[i].region_entropy);
    empty.push_back(rows[i].empty_fraction);
  }
  const auto& first = rows[begin];
  SweepAggregate a;
  a.scheme = first.scheme;
  a.meshes = first.meshes;
  a.density_ratio = first.density_ratio;
  a.runs = static_cast<int>(end - begin);
  a.region_rpe = summarize(rpe);
  a.measured_rem_error = summarize(measured);
  a.region_entropy = summarize(entropy);
  a.empty_fraction = summarize(empty);
  a.predicted_rpe = first.predicted_rpe;
  a.entropy_upper = first.entropy_upper;
  a.rpe_upper = first.rpe_upper;
  return a;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json summary_json(const Summary& s) { return {{"mean", s.mean}, {"std", s.stddev}}; }

}  // namespace

RunRecord run_sweep(const SweepSpec& spec) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();
  const CoverageScene& scene = spec.scene;

  RunRecord rec;
  rec.config = to_json(spec);
  rec.networks = scene.network_count();
  rec.parameters = scene.parameter_count();
  rec.xi_analytic = boundary_length(scene);
  rec.xi_raster = boundary_length_raster(scene, spec.raster_resolution);

  BoundsConfig bcfg;
  bcfg.parameters = rec.parameters;
  bcfg.boundary_length = rec.xi_analytic;
  bcfg.region_edge = scene.region_edge();

  const auto keys = point_keys(spec);
  std::uint64_t point_index = 0;
  for (int m : spec.meshes_per_side) {
    const MeshGrid grid(scene.region_edge(), m);
    const RegionPartition part = estimate_partition(scene, grid, spec.subsamples);
    const double rpe = region_rpe(part);
    const double entropy = region_entropy(part);
    const std::int64_t meshes = grid.count();
    const double predicted = rpe_estimate(rec.xi_analytic, scene.region_edge(), meshes);
    const double h_upper = entropy_scaling_upper(bcfg, meshes);
    const double p_upper = rpe_scaling_upper(bcfg, meshes);

    for (const auto& key : keys) {
      const std::size_t group_begin = rec.rows.size();
      const std::int64_t sensors =
          key.scheme == Scheme::OnePerMesh ? meshes : std::llround(key.k * static_cast<double>(meshes));
      for (int s = 0; s < spec.seeds; ++s) {
        const std::uint64_t seed = derive_seed(spec.master_seed, point_index++);
        const Deployment dep = key.scheme == Scheme::OnePerMesh ? deploy_one_per_mesh(scene, grid, seed)
                                                                : deploy_random(scene, grid, sensors, seed);
        const Rem rem = build_rem(scene, grid, dep, seed);
        SweepRow row;
        row.scheme = key.scheme;
        row.meshes = meshes;
        row.sensors = static_cast<std::int64_t>(dep.sensor_count());
        row.density_ratio = key.k;
        row.seed = seed;
        row.region_rpe = rpe;
        row.measured_rem_error = measured_rem_error(part, rem);
        row.region_entropy = entropy;
        row.predicted_rpe = predicted;
        row.entropy_upper = h_upper;
        row.rpe_upper = p_upper;
        row.empty_fraction = static_cast<double>(rem.empty_count()) / static_cast<double>(meshes);
        rec.rows.push_back(row);
      }
      rec.aggregates.push_back(aggregate(rec.rows, group_begin, rec.rows.size()));
    }
  }

  for (double beta : spec.betas) {
    for (double k : spec.density_ratios) {
      BoundsConfig c = bcfg;
      c.target_rpe = beta;
      c.density_ratio = k;
      const auto req = sensor_requirements(c);
      rec.requirements.push_back({beta, k, req.loose, req.estimated, req.random_deployment});
    }
  }

  rec.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!spec.out_dir.empty()) write_run_outputs(rec, spec.out_dir);
  return rec;
}

RunRecord compare_schemes(const SweepSpec& spec) {
  const auto has = [&spec](Scheme s) {
    return std::find(spec.schemes.begin(), spec.schemes.end(), s) != spec.schemes.end();
  };
  if (!has(Scheme::OnePerMesh) || !has(Scheme::Random)) {
    throw std::invalid_argument("scheme comparison needs both one-per-mesh and random");
  }
  return run_sweep(spec);
}

std::string results_csv(const RunRecord& record) {
  std::string out = kResultsCsvHeader;
  out += '\n';
  for (const auto& r : record.rows) {
    out += std::string(to_string(r.scheme)) + ',' + std::to_string(r.meshes) + ',' + std::to_string(r.sensors) + ',' +
           fmt(r.density_ratio) + ',' + std::to_string(r.seed) + ',' + fmt(r.region_rpe) + ',' +
           fmt(r.measured_rem_error) + ',' + fmt(r.region_entropy) + ',' + fmt(r.predicted_rpe) + ',' +
           fmt(r.entropy_upper) + ',' + fmt(r.rpe_upper) + ',' + fmt(r.empty_fraction) + '\n';
  }
  return out;
}

nlohmann::json to_json(const RunRecord& record) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : record.rows) {
    rows.push_back({{"scheme", to_string(r.scheme)},
                    {"M", r.meshes},
                    {"J", r.sensors},
                    {"k", r.density_ratio},
                    {"seed", r.seed},
                    {"region_rpe", r.region_rpe},
                    {"measured_rem_error", r.measured_rem_error},
                    {"region_entropy", r.region_entropy},
                    {"predicted_rpe", r.predicted_rpe},
                    {"entropy_upper", r.entropy_upper},
                    {"rpe_upper", r.rpe_upper},
                    {"empty_fraction", r.empty_fraction}});
  }
  nlohmann::json aggs = nlohmann::json::array();
  for (const auto& a : record.aggregates) {
    aggs.push_back({{"scheme", to_string(a.scheme)},
                    {"M", a.meshes},
                    {"k", a.density_ratio},
                    {"runs", a.runs},
                    {"region_rpe", summary_json(a.region_rpe)},
                    {"measured_rem_error", summary_json(a.measured_rem_error)},
                    {"region_entropy", summary_json(a.region_entropy)},
                    {"empty_fraction", summary_json(a.empty_fraction)},
                    {"predicted_rpe", a.predicted_rpe},
                    {"entropy_upper", a.entropy_upper},
                    {"rpe_upper", a.rpe_upper}});
  }
  nlohmann::json reqs = nlohmann::json::array();
  for (const auto& q : record.requirements) {
    nlohmann::json m3 = nullptr;
    if (q.m3) m3 = *q.m3;
    reqs.push_back({{"beta", q.beta}, {"k", q.density_ratio}, {"M1", q.m1}, {"M2", q.m2}, {"M3", m3}});
  }
  return {{"tool", "remsim"},
          {"version", record.tool_version},
          {"config", record.config},
          {"scene", {{"T", record.networks}, {"N", record.parameters}, {"xi_analytic", record.xi_analytic},
                     {"xi_raster", record.xi_raster}}},
          {"rows", std::move(rows)},
          {"aggregates", std::move(aggs)},
          {"requirements", std::move(reqs)},
          {"wall_clock_seconds", record.wall_clock_seconds}};
}

void write_run_outputs(const RunRecord& record, const std::string& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  const auto dir = std::filesystem::path(out_dir);
  {
    std::ofstream csv(dir / "results.csv", std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write results to " + out_dir);
    csv << results_csv(record);
  }
  std::ofstream json(dir / "run.json");
  if (!json) throw std::runtime_error("cannot write run record to " + out_dir);
  json << to_json(record).dump(2) << '\n';
}

std::vector<bool> boundary_meshes(const CoverageScene& scene, const MeshGrid& grid) {
  std::vector<bool> hit(static_cast<std::size_t>(grid.count()), false);
  for (int i = 0; i < grid.count(); ++i) {
    const Rect r = grid.bounds(i);
    for (const auto& net : scene.networks()) {
      for (const auto& d : net.disks) {
        const double nx = std::clamp(d.center.x, r.x0, r.x0 + r.width);
        const double ny = std::clamp(d.center.y, r.y0, r.y0 + r.height);
        const double near = std::hypot(d.center.x - nx, d.center.y - ny);
        const double fx = std::max(std::abs(d.center.x - r.x0), std::abs(d.center.x - r.x0 - r.width));
        const double fy = std::max(std::abs(d.center.y - r.y0), std::abs(d.center.y - r.y0 - r.height));
        if (near <= d.radius && d.radius <= std::hypot(fx, fy)) hit[static_cast<std::size_t>(i)] = true;
      }
    }
  }
  return hit;
}

std::vector<bool> boundary_adjacent_meshes(const CoverageScene& scene, const MeshGrid& grid) {
  const auto hit = boundary_meshes(scene, grid);
  const int m = grid.per_side();
  std::vector<bool> near(hit.size(), false);
  for (int row = 0; row < m; ++row) {
    for (int col = 0; col < m; ++col) {
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          const int r = row + dr;
          const int c = col + dc;
          if (r >= 0 && r < m && c >= 0 && c < m && hit[static_cast<std::size_t>(r * m + c)]) {
            near[static_cast<std::size_t>(row * m + col)] = true;
          }
        }
      }
    }
  }
  return near;
}

}  // namespace remsim
