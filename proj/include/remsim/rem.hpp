#pragma once

#include <vector>

#include "remsim/mesh.hpp"

namespace remsim {

/// A constructed radio environment map: one parameter per mesh, plus whether
/// the mesh had no sensor and was filled at random.
struct Rem {
  MeshGrid grid;
  std::vector<int> assignment;
  std::vector<bool> filled_randomly;

  int empty_count() const noexcept {
    int n = 0;
    for (bool b : filled_randomly) n += b ? 1 : 0;
    return n;
  }
};

}  // namespace remsim
