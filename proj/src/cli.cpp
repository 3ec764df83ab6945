#include "remsim/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "remsim/bounds.hpp"
#include "remsim/deploy.hpp"
#include "remsim/harness.hpp"
#include "remsim/metrics.hpp"
#include "remsim/render.hpp"
#include "remsim/scene.hpp"

namespace remsim {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  std::uint64_t seed = 1;
  std::string out;
  std::optional<int> subsamples;
};

struct SceneGenOptions {
  SceneGenParams params;
};

struct SweepOptions {
  std::string scene_path;
  std::string config_path;
  std::vector<int> meshes{16, 32, 64, 128};
  std::vector<std::string> schemes;
  std::vector<double> ks{1.0};
  int seeds = 20;
  int raster = 1024;
  std::vector<double> betas;
};

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

void add_sweep_flags(CLI::App* cmd, SweepOptions& o) {
  cmd->add_option("--scene", o.scene_path, "Scene JSON file");
  cmd->add_option("--config", o.config_path, "Rerun the config echo of an earlier run.json");
  cmd->add_option("--meshes", o.meshes, "Meshes per side, M = m^2")->delimiter(',');
  cmd->add_option("--scheme", o.schemes, "one-per-mesh and/or random")->delimiter(',');
  cmd->add_option("--k", o.ks, "Density ratios J/M for the random scheme")->delimiter(',');
  cmd->add_option("--seeds", o.seeds, "Seeds per point")->check(CLI::PositiveNumber);
  cmd->add_option("--raster", o.raster, "Raster resolution for the boundary-length estimate");
  cmd->add_option("--betas", o.betas, "Target RPEs for sensor-requirement tables")->delimiter(',');
}

SweepSpec make_sweep_spec(const SweepOptions& o, const GlobalOptions& g, bool compare) {
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw std::runtime_error("cannot open config: " + o.config_path);
    nlohmann::json j;
    in >> j;
    // Accept either a bare spec or a full run record.
    SweepSpec spec = sweep_spec_from_json(j.contains("config") ? j.at("config") : j);
    if (!g.out.empty()) spec.out_dir = g.out;
    return spec;
  }
  if (o.scene_path.empty()) throw UsageError("a scene is required (--scene FILE or --config RUN.json)");
  SweepSpec spec(load_scene(o.scene_path));
  spec.scene_source = o.scene_path;
  spec.meshes_per_side = o.meshes;
  spec.schemes.clear();
  if (o.schemes.empty()) {
    spec.schemes.push_back(Scheme::OnePerMesh);
    if (compare) spec.schemes.push_back(Scheme::Random);
  } else {
    for (const auto& s : o.schemes) {
      try {
        spec.schemes.push_back(parse_scheme(s));
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
    }
  }
  spec.density_ratios = o.ks;
  spec.seeds = o.seeds;
  spec.master_seed = g.seed;
  spec.subsamples = g.subsamples.value_or(32);
  spec.raster_resolution = o.raster;
  spec.betas = o.betas;
  if (compare && spec.betas.empty()) spec.betas = {0.02, 0.04, 0.06, 0.08, 0.1};
  spec.out_dir = g.out;
  return spec;
}

void print_aggregates(const RunRecord& rec, std::ostream& out) {
  out << "T=" << rec.networks << " N=" << rec.parameters << " xi(analytic)=" << fmt(rec.xi_analytic)
      << " xi(raster)=" << fmt(rec.xi_raster) << '\n';
  char line[256];
  std::snprintf(line, sizeof line, "%-13s %7s %6s %12s %12s %12s %12s %12s %10s\n", "scheme", "M", "k",
                "region_rpe", "measured", "entropy", "predicted", "rpe_upper", "empty");
  out << line;
  for (const auto& a : rec.aggregates) {
    std::snprintf(line, sizeof line, "%-13s %7lld %6.3g %12.6g %12.6g %12.6g %12.6g %12.6g %10.5g\n",
                  std::string(to_string(a.scheme)).c_str(), static_cast<long long>(a.meshes), a.density_ratio,
                  a.region_rpe.mean, a.measured_rem_error.mean, a.region_entropy.mean, a.predicted_rpe,
                  a.rpe_upper, a.empty_fraction.mean);
    out << line;
  }
  for (const auto& q : rec.requirements) {
    out << "beta=" << fmt(q.beta) << " k=" << fmt(q.density_ratio) << " M1=" << q.m1 << " M2=" << q.m2
        << " M3=" << (q.m3 ? std::to_string(*q.m3) : std::string("infeasible")) << '\n';
  }
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Radio environment map simulator and bound checker", "remsim"};
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Master seed");
  app.add_option("--out", g.out, "Output file, prefix or directory");
  app.add_option("--subsamples", g.subsamples, "Sub-sampling lattice per mesh side")->check(CLI::PositiveNumber);

  // scene gen | show
  auto* scene_cmd = app.add_subcommand("scene", "Generate or inspect a coverage scene");
  scene_cmd->require_subcommand(1);
  SceneGenOptions gen;
  auto* scene_gen = scene_cmd->add_subcommand("gen", "Generate a random disk scene");
  scene_gen->add_option("--networks", gen.params.networks, "Number of networks T (1-8)");
  scene_gen->add_option("--edge", gen.params.region_edge, "Region edge L");
  scene_gen->add_option("--rmin", gen.params.radius_min, "Minimum disk radius");
  scene_gen->add_option("--rmax", gen.params.radius_max, "Maximum disk radius");
  scene_gen->add_option("--disks", gen.params.disks_per_network, "Disks per network");
  std::string show_path;
  int show_raster = 1024;
  auto* scene_show = scene_cmd->add_subcommand("show", "Summarize a scene file");
  scene_show->add_option("file", show_path, "Scene JSON")->required();
  scene_show->add_option("--raster", show_raster, "Raster resolution");

  // rem build
  auto* rem_cmd = app.add_subcommand("rem", "Construct a single REM");
  rem_cmd->require_subcommand(1);
  std::string rem_scene;
  int rem_meshes = 16;
  std::string rem_scheme = "one-per-mesh";
  double rem_k = 1.0;
  auto* rem_build = rem_cmd->add_subcommand("build", "Deploy sensors, vote, render");
  rem_build->add_option("--scene", rem_scene, "Scene JSON")->required();
  rem_build->add_option("--meshes", rem_meshes, "Meshes per side")->check(CLI::PositiveNumber);
  rem_build->add_option("--scheme", rem_scheme, "one-per-mesh or random")
      ->check(CLI::IsMember({"one-per-mesh", "random"}));
  rem_build->add_option("--k", rem_k, "Density ratio J/M for the random scheme")->check(CLI::PositiveNumber);

  SweepOptions sweep_opts;
  auto* sweep_cmd = app.add_subcommand("sweep", "RPE vs number of meshes");
  add_sweep_flags(sweep_cmd, sweep_opts);
  SweepOptions compare_opts;
  compare_opts.ks = {1.0, 2.0, 4.0};
  auto* compare_cmd = app.add_subcommand("compare", "One-per-mesh vs random deployment");
  add_sweep_flags(compare_cmd, compare_opts);

  BoundsConfig theory;
  theory.target_rpe = 0.04;
  int theory_networks = 3;
  std::int64_t theory_meshes = 1024;
  auto* theory_cmd = app.add_subcommand("theory", "Print every analytical quantity");
  theory_cmd->add_option("--networks", theory_networks, "Number of networks T, N = 2^T")
      ->check(CLI::Range(1, kMaxNetworks));
  theory_cmd->add_option("--xi", theory.boundary_length, "Total boundary length")->required();
  theory_cmd->add_option("--edge", theory.region_edge, "Region edge L");
  theory_cmd->add_option("--beta", theory.target_rpe, "Target RPE");
  theory_cmd->add_option("--k", theory.density_ratio, "Density ratio J/M");
  theory_cmd->add_option("--meshes", theory_meshes, "Total mesh count M")->check(CLI::PositiveNumber);

  std::int64_t mc_samples = 1000000;
  auto* mc_cmd = app.add_subcommand("mc-line", "Monte Carlo line-cut constants");
  mc_cmd->add_option("--samples", mc_samples, "Number of samples")->check(CLI::PositiveNumber);

  for (auto* sub : {scene_cmd, scene_gen, scene_show, rem_cmd, rem_build, sweep_cmd, compare_cmd, theory_cmd, mc_cmd}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return 2;
  }

  try {
    if (scene_gen->parsed()) {
      gen.params.seed = g.seed;
      const auto scene = generate_scene(gen.params);
      if (g.out.empty()) {
        out << scene_to_json(scene).dump(2) << '\n';
      } else {
        save_scene(scene, g.out);
      }
      return 0;
    }
    if (scene_show->parsed()) {
      const auto scene = load_scene(show_path);
      out << "region_edge " << fmt(scene.region_edge()) << '\n'
          << "networks    " << scene.network_count() << '\n'
          << "parameters  " << scene.parameter_count() << '\n';
      for (const auto& net : scene.networks()) {
        out << "network " << net.index << ": " << net.disks.size() << " disk(s)\n";
      }
      out << "xi analytic " << fmt(boundary_length(scene), "%.9g") << '\n'
          << "xi raster   " << fmt(boundary_length_raster(scene, show_raster), "%.9g") << " (f=" << show_raster
          << ")\n";
      return 0;
    }
    if (rem_build->parsed()) {
      const auto scene = load_scene(rem_scene);
      const MeshGrid grid(scene.region_edge(), rem_meshes);
      const auto part = estimate_partition(scene, grid, g.subsamples.value_or(128));
      const Scheme scheme = parse_scheme(rem_scheme);
      const Deployment dep =
          scheme == Scheme::OnePerMesh
              ? deploy_one_per_mesh(scene, grid, g.seed)
              : deploy_random(scene, grid, std::llround(rem_k * grid.count()), g.seed);
      const Rem rem = build_rem(scene, grid, dep, g.seed);
      const auto report = compute_metrics(part, &rem);
      const std::string prefix = g.out.empty() ? std::string("rem") : g.out;
      const auto parent = std::filesystem::path(prefix).parent_path();
      if (!parent.empty()) std::filesystem::create_directories(parent);
      render_rem(rem, part, prefix);
      write_deployment_csv(dep, prefix + "_sensors.csv");
      nlohmann::json j = to_json(report);
      j["scheme"] = to_string(scheme);
      j["M"] = grid.count();
      j["J"] = dep.sensor_count();
      j["empty_meshes"] = rem.empty_count();
      j["seed"] = g.seed;
      std::ofstream(prefix + "_metrics.json") << j.dump(2) << '\n';
      out << "scheme " << to_string(scheme) << " M=" << grid.count() << " J=" << dep.sensor_count()
          << " empty=" << rem.empty_count() << " region_rpe=" << fmt(report.region_rpe)
          << " measured_error=" << fmt(*report.measured_rem_error) << '\n'
          << "wrote " << prefix << "_params.ppm, " << prefix << "_error.pgm\n";
      return 0;
    }
    if (sweep_cmd->parsed() || compare_cmd->parsed()) {
      const bool compare = compare_cmd->parsed();
      const SweepSpec spec = make_sweep_spec(compare ? compare_opts : sweep_opts, g, compare);
      const RunRecord rec = compare ? compare_schemes(spec) : run_sweep(spec);
      print_aggregates(rec, out);
      if (!spec.out_dir.empty()) out << "wrote " << spec.out_dir << "/results.csv and run.json\n";
      return 0;
    }
    if (theory_cmd->parsed()) {
      theory.parameters = 1 << theory_networks;
      const auto report = make_bounds_report(theory, theory_meshes);
      out << to_json(report).dump(2) << '\n' << format_table(report);
      return 0;
    }
    if (mc_cmd->parsed()) {
      const auto r = mc_line_oracle(mc_samples, g.seed);
      const auto c = expected_cut_constants();
      nlohmann::json j{{"samples", r.samples},
                       {"seed", g.seed},
                       {"mean_xi", r.mean_xi},
                       {"mean_pe", r.mean_pe},
                       {"std_err_xi", r.std_err_xi},
                       {"std_err_pe", r.std_err_pe},
                       {"closed_form_xi", c.mean_length},
                       {"closed_form_pe", c.mean_rpe},
                       {"rel_err_xi", std::abs(r.mean_xi - c.mean_length) / c.mean_length},
                       {"rel_err_pe", std::abs(r.mean_pe - c.mean_rpe) / c.mean_rpe}};
      out << j.dump(2) << '\n';
      return 0;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  err << app.help();
  return 2;
}

}  // namespace remsim
