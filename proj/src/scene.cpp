#include "remsim/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "remsim/rng.hpp"

namespace remsim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool finite(double v) { return std::isfinite(v); }

double normalize_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a;
}

bool same_disk(const Disk& a, const Disk& b) {
  return a.center.x == b.center.x && a.center.y == b.center.y && a.radius == b.radius;
}

// Angles at which a circle meets the line x = c (vertical) or y = c.
void line_crossings(const Disk& d, double c, bool vertical, std::vector<double>& out) {
  const double offset = (vertical ? c - d.center.x : c - d.center.y) / d.radius;
  if (offset < -1.0 || offset > 1.0) return;
  if (vertical) {
    const double a = std::acos(offset);
    out.push_back(normalize_angle(a));
    out.push_back(normalize_angle(-a));
  } else {
    const double a = std::asin(offset);
    out.push_back(normalize_angle(a));
    out.push_back(normalize_angle(std::numbers::pi - a));
  }
}

void circle_crossings(const Disk& a, const Disk& b, std::vector<double>& out) {
  const double dx = b.center.x - a.center.x;
  const double dy = b.center.y - a.center.y;
  const double d = std::hypot(dx, dy);
  if (d == 0.0 || d >= a.radius + b.radius || d <= std::abs(a.radius - b.radius)) return;
  const double cos_half = (d * d + a.radius * a.radius - b.radius * b.radius) / (2.0 * d * a.radius);
  const double half = std::acos(std::clamp(cos_half, -1.0, 1.0));
  const double dir = std::atan2(dy, dx);
  out.push_back(normalize_angle(dir + half));
  out.push_back(normalize_angle(dir - half));
}

// Length of the part of disk `self` of network `net` that is a network edge.
double contributing_arc(const NetworkCoverage& net, std::size_t self, double edge) {
  const Disk& d = net.disks[self];
  std::vector<double> cuts{0.0, kTwoPi};
  line_crossings(d, 0.0, true, cuts);
  line_crossings(d, edge, true, cuts);
  line_crossings(d, 0.0, false, cuts);
  line_crossings(d, edge, false, cuts);
  for (std::size_t j = 0; j < net.disks.size(); ++j) {
    if (j != self) circle_crossings(d, net.disks[j], cuts);
  }
  std::sort(cuts.begin(), cuts.end());

  const double tol = 1e-12 * std::max(edge, d.radius);
  double total = 0.0;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double span = cuts[c + 1] - cuts[c];
    if (span <= 0.0) continue;
    const double mid = 0.5 * (cuts[c] + cuts[c + 1]);
    const Point q{d.center.x + d.radius * std::cos(mid), d.center.y + d.radius * std::sin(mid)};
    if (q.x < -tol || q.x > edge + tol || q.y < -tol || q.y > edge + tol) continue;
    bool covered = false;
    for (std::size_t j = 0; j < net.disks.size() && !covered; ++j) {
      if (j == self) continue;
      const Disk& other = net.disks[j];
      if (same_disk(other, d)) {
        covered = j < self;  // duplicates contribute once
        continue;
      }
      covered = std::hypot(q.x - other.center.x, q.y - other.center.y) < other.radius - tol;
    }
    if (!covered) total += span * d.radius;
  }
  return total;
}

}  // namespace

CoverageScene::CoverageScene(double region_edge, std::vector<NetworkCoverage> networks)
    : edge_(region_edge), networks_(std::move(networks)) {
  if (!finite(edge_) || edge_ <= 0.0) throw std::invalid_argument("region edge must be positive");
  if (networks_.empty()) throw std::invalid_argument("scene needs at least one network");
  if (networks_.size() > static_cast<std::size_t>(kMaxNetworks)) {
    throw std::invalid_argument("scene supports at most 8 networks");
  }
  std::sort(networks_.begin(), networks_.end(),
            [](const NetworkCoverage& a, const NetworkCoverage& b) { return a.index < b.index; });
  for (std::size_t k = 0; k < networks_.size(); ++k) {
    const auto& net = networks_[k];
    if (net.index != static_cast<int>(k) + 1) {
      throw std::invalid_argument("network indices must be unique and contiguous from 1");
    }
    if (net.disks.empty()) throw std::invalid_argument("network has no disks");
    for (const auto& d : net.disks) {
      if (!finite(d.center.x) || !finite(d.center.y)) throw std::invalid_argument("non-finite disk center");
      if (!finite(d.radius) || d.radius <= 0.0) throw std::invalid_argument("disk radius must be positive");
    }
  }
}

bool CoverageScene::contains(Point p) const noexcept {
  return p.x >= 0.0 && p.x <= edge_ && p.y >= 0.0 && p.y <= edge_;
}

bool CoverageScene::covers_unchecked(int k, Point p) const noexcept {
  for (const auto& d : networks_[static_cast<std::size_t>(k - 1)].disks) {
    const double dx = p.x - d.center.x;
    const double dy = p.y - d.center.y;
    if (dx * dx + dy * dy <= d.radius * d.radius) return true;
  }
  return false;
}

int CoverageScene::radio_parameter_unchecked(Point p) const noexcept {
  int value = 0;
  for (int k = 1; k <= network_count(); ++k) {
    if (covers_unchecked(k, p)) value |= 1 << (k - 1);
  }
  return value;
}

bool CoverageScene::detect(int k, Point p) const {
  if (k < 1 || k > network_count()) throw std::domain_error("network index out of range");
  if (!contains(p)) throw std::domain_error("point outside region");
  return covers_unchecked(k, p);
}

int CoverageScene::radio_parameter(Point p) const {
  if (!contains(p)) throw std::domain_error("point outside region");
  return radio_parameter_unchecked(p);
}

double boundary_length(const CoverageScene& scene) {
  double total = 0.0;
  for (const auto& net : scene.networks()) {
    for (std::size_t i = 0; i < net.disks.size(); ++i) {
      total += contributing_arc(net, i, scene.region_edge());
    }
  }
  return total;
}

namespace {

struct RasterField {
  const CoverageScene& scene;
  int n;
  double step;
  std::vector<std::uint8_t> values;  // row-major, y outer

  Point at(int ix, int iy) const { return {ix * step, iy * step}; }
  int bit(int ix, int iy, int mask) const {
    return (values[static_cast<std::size_t>(iy) * n + ix] & mask) != 0;
  }

  // Crossing of bit `mask` between two samples with different bit values.
  Point crossing(Point a, Point b, int mask) const {
    const bool va = (scene.radio_parameter_unchecked(a) & mask) != 0;
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 40; ++it) {
      const double mid = 0.5 * (lo + hi);
      const Point q{a.x + mid * (b.x - a.x), a.y + mid * (b.y - a.y)};
      if (((scene.radio_parameter_unchecked(q) & mask) != 0) == va) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double t = 0.5 * (lo + hi);
    return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
  }
};

double dist(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace

double boundary_length_raster(const CoverageScene& scene, int resolution) {
  if (resolution < 2) throw std::invalid_argument("raster resolution must be at least 2");
  RasterField field{scene, resolution, scene.region_edge() / (resolution - 1), {}};
  field.values.resize(static_cast<std::size_t>(resolution) * resolution);
  for (int iy = 0; iy < resolution; ++iy) {
    for (int ix = 0; ix < resolution; ++ix) {
      field.values[static_cast<std::size_t>(iy) * resolution + ix] =
          static_cast<std::uint8_t>(scene.radio_parameter_unchecked(field.at(ix, iy)));
    }
  }

  double total = 0.0;
  for (int k = 1; k <= scene.network_count(); ++k) {
    const int mask = 1 << (k - 1);
    for (int iy = 0; iy + 1 < resolution; ++iy) {
      for (int ix = 0; ix + 1 < resolution; ++ix) {
        const int bl = field.bit(ix, iy, mask);
        const int br = field.bit(ix + 1, iy, mask);
        const int tr = field.bit(ix + 1, iy + 1, mask);
        const int tl = field.bit(ix, iy + 1, mask);
        const int config = bl | (br << 1) | (tr << 2) | (tl << 3);
        if (config == 0 || config == 0b1111) continue;

        const Point p_bl = field.at(ix, iy);
        const Point p_br = field.at(ix + 1, iy);
        const Point p_tr = field.at(ix + 1, iy + 1);
        const Point p_tl = field.at(ix, iy + 1);
        // Crossing points on the four cell edges, computed on demand.
        auto bottom = [&] { return field.crossing(p_bl, p_br, mask); };
        auto right = [&] { return field.crossing(p_br, p_tr, mask); };
        auto top = [&] { return field.crossing(p_tl, p_tr, mask); };
        auto left = [&] { return field.crossing(p_bl, p_tl, mask); };

        switch (config) {
          case 0b0001: case 0b1110: total += dist(left(), bottom()); break;
          case 0b0010: case 0b1101: total += dist(bottom(), right()); break;
          case 0b0100: case 0b1011: total += dist(right(), top()); break;
          case 0b1000: case 0b0111: total += dist(top(), left()); break;
          case 0b0011: case 0b1100: total += dist(left(), right()); break;
          case 0b0110: case 0b1001: total += dist(bottom(), top()); break;
          case 0b0101: case 0b1010: {
            // Saddle: the cell center decides which diagonal pair is joined.
            const Point center{p_bl.x + 0.5 * field.step, p_bl.y + 0.5 * field.step};
            const int c = (scene.radio_parameter_unchecked(center) & mask) != 0;
            if (c == bl) {
              total += dist(bottom(), right()) + dist(top(), left());
            } else {
              total += dist(left(), bottom()) + dist(right(), top());
            }
            break;
          }
          default: break;
        }
      }
    }
  }
  return total;
}

CoverageScene generate_scene(const SceneGenParams& params) {
  if (params.networks < 1 || params.networks > kMaxNetworks) {
    throw std::invalid_argument("network count must be in [1, 8]");
  }
  if (!(params.region_edge > 0.0)) throw std::invalid_argument("region edge must be positive");
  if (!(params.radius_min > 0.0) || params.radius_min > params.radius_max) {
    throw std::invalid_argument("radius range must satisfy 0 < min <= max");
  }
  if (params.disks_per_network < 1) throw std::invalid_argument("disks per network must be >= 1");

  Engine rng = make_engine(params.seed, 0);
  std::vector<NetworkCoverage> nets;
  for (int k = 1; k <= params.networks; ++k) {
    NetworkCoverage net{k, {}};
    for (int d = 0; d < params.disks_per_network; ++d) {
      const double cx = uniform01(rng) * params.region_edge;
      const double cy = uniform01(rng) * params.region_edge;
      const double r = params.radius_min + uniform01(rng) * (params.radius_max - params.radius_min);
      net.disks.push_back({{cx, cy}, r});
    }
    nets.push_back(std::move(net));
  }
  return CoverageScene(params.region_edge, std::move(nets));
}

nlohmann::json scene_to_json(const CoverageScene& scene) {
  nlohmann::json nets = nlohmann::json::array();
  for (const auto& net : scene.networks()) {
    nlohmann::json disks = nlohmann::json::array();
    for (const auto& d : net.disks) {
      disks.push_back({{"cx", d.center.x}, {"cy", d.center.y}, {"r", d.radius}});
    }
    nets.push_back({{"index", net.index}, {"disks", std::move(disks)}});
  }
  return {{"region_edge", scene.region_edge()}, {"networks", std::move(nets)}};
}

CoverageScene scene_from_json(const nlohmann::json& j) {
  try {
    const auto& nets_json = j.at("networks");
    if (!nets_json.is_array()) throw std::invalid_argument("scene 'networks' must be an array");
    if (nets_json.size() > static_cast<std::size_t>(kMaxNetworks)) {
      throw std::invalid_argument("scene has more than 8 networks");
    }
    std::vector<NetworkCoverage> nets;
    for (const auto& n : nets_json) {
      NetworkCoverage net{n.at("index").get<int>(), {}};
      for (const auto& d : n.at("disks")) {
        net.disks.push_back({{d.at("cx").get<double>(), d.at("cy").get<double>()}, d.at("r").get<double>()});
      }
      nets.push_back(std::move(net));
    }
    return CoverageScene(j.at("region_edge").get<double>(), std::move(nets));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed scene: ") + e.what());
  }
}

CoverageScene load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scene file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("scene file is not valid JSON: " + path);
  }
  return scene_from_json(j);
}

void save_scene(const CoverageScene& scene, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write scene file: " + path);
  out << scene_to_json(scene).dump(2) << '\n';
}

}  // namespace remsim
