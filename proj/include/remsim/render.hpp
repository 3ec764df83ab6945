#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "remsim/mesh.hpp"
#include "remsim/rem.hpp"

namespace remsim {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

inline constexpr int kPaletteSize = 256;
inline constexpr int kEmptyPaletteEntry = kPaletteSize;  // reserved, pure red

// 256 fixed parameter colors followed by the reserved empty-mesh entry.
const std::array<Rgb, kPaletteSize + 1>& palette();

// Binary P6 / P5 writers. Pixel rows are top to bottom.
void write_ppm(const std::string& path, int width, int height, const std::vector<Rgb>& pixels);
void write_pgm(const std::string& path, int width, int height, const std::vector<std::uint8_t>& pixels);

struct RemImages {
  int side = 0;
  std::vector<Rgb> parameters;        // m x m, empty meshes in the reserved color
  std::vector<std::uint8_t> errors;   // m x m, per-mesh error 1 - p_{i,j_i} scaled to [0, 255]
};

/// Rasterizes a REM one pixel per mesh. Mesh row 0 (bottom of the region) is
/// the last image row.
RemImages rasterize_rem(const Rem& rem, const RegionPartition& part);

/// Writes `<prefix>_params.ppm` and `<prefix>_error.pgm`.
void render_rem(const Rem& rem, const RegionPartition& part, const std::string& prefix);

}  // namespace remsim
