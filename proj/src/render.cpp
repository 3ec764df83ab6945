#include "remsim/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace remsim {

namespace {

Rgb hsv(double h, double s, double v) {
  const double c = v * s;
  const double hp = std::fmod(h, 1.0) * 6.0;
  const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(hp)) {
    case 0: r = c; g = x; break;
    case 1: r = x; g = c; break;
    case 2: g = c; b = x; break;
    case 3: g = x; b = c; break;
    case 4: r = x; b = c; break;
    default: r = c; b = x; break;
  }
  const double m = v - c;
  auto to8 = [m](double u) { return static_cast<std::uint8_t>(std::lround((u + m) * 255.0)); };
  return {to8(r), to8(g), to8(b)};
}

std::array<Rgb, kPaletteSize + 1> make_palette() {
  std::array<Rgb, kPaletteSize + 1> p{};
  p[0] = {0, 0, 139};  // dark blue: nothing detected
  for (int i = 1; i < kPaletteSize; ++i) {
    // Golden-ratio hue walk starting away from red; saturation/value vary by band.
    const double hue = std::fmod(0.18 + 0.61803398874989485 * i, 1.0);
    const double sat = 0.55 + 0.15 * (i % 3);
    const double val = 0.95 - 0.2 * ((i / 3) % 2);
    p[static_cast<std::size_t>(i)] = hsv(hue, sat, val);
  }
  p[kEmptyPaletteEntry] = {255, 0, 0};
  return p;
}

std::ofstream open_binary(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write image: " + path);
  return out;
}

}  // namespace

const std::array<Rgb, kPaletteSize + 1>& palette() {
  static const auto table = make_palette();
  return table;
}

void write_ppm(const std::string& path, int width, int height, const std::vector<Rgb>& pixels) {
  if (pixels.size() != static_cast<std::size_t>(width) * height) throw std::invalid_argument("pixel count mismatch");
  auto out = open_binary(path);
  out << "P6\n" << width << ' ' << height << "\n255\n";
  for (const auto& px : pixels) {
    const char bytes[3] = {static_cast<char>(px.r), static_cast<char>(px.g), static_cast<char>(px.b)};
    out.write(bytes, 3);
  }
  if (!out) throw std::runtime_error("failed writing image: " + path);
}

void write_pgm(const std::string& path, int width, int height, const std::vector<std::uint8_t>& pixels) {
  if (pixels.size() != static_cast<std::size_t>(width) * height) throw std::invalid_argument("pixel count mismatch");
  auto out = open_binary(path);
  out << "P5\n" << width << ' ' << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
  if (!out) throw std::runtime_error("failed writing image: " + path);
}

RemImages rasterize_rem(const Rem& rem, const RegionPartition& part) {
  const int m = rem.grid.per_side();
  if (part.size() != static_cast<std::size_t>(rem.grid.count()) || rem.assignment.size() != part.size()) {
    throw std::invalid_argument("REM and partition disagree on mesh count");
  }
  RemImages img;
  img.side = m;
  img.parameters.resize(part.size());
  img.errors.resize(part.size());
  const auto& pal = palette();
  for (int row = 0; row < m; ++row) {
    for (int col = 0; col < m; ++col) {
      const auto mesh = static_cast<std::size_t>(row * m + col);
      const auto pixel = static_cast<std::size_t>((m - 1 - row) * m + col);
      const int j = rem.assignment[mesh];
      img.parameters[pixel] = rem.filled_randomly[mesh] ? pal[kEmptyPaletteEntry]
                                                        : pal[static_cast<std::size_t>(j % kPaletteSize)];
      const double err = 1.0 - part.meshes()[mesh][static_cast<std::size_t>(j)];
      img.errors[pixel] = static_cast<std::uint8_t>(std::lround(std::clamp(err, 0.0, 1.0) * 255.0));
    }
  }
  return img;
}

void render_rem(const Rem& rem, const RegionPartition& part, const std::string& prefix) {
  const auto img = rasterize_rem(rem, part);
  write_ppm(prefix + "_params.ppm", img.side, img.side, img.parameters);
  write_pgm(prefix + "_error.pgm", img.side, img.side, img.errors);
}

}  // namespace remsim
