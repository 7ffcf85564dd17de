#pragma once

#include <vector>

#include "sipf/vec.hpp"

namespace sipf {

// Empirical-measure representation of the tumor cell density: each of the P
// particles carries mass total_mass / P. The particle count and total mass
// are fixed for the lifetime of a simulation (no birth/death).
struct ParticleEnsemble {
  std::vector<Vec3> positions;
  double total_mass = 0.0;

  long count() const { return static_cast<long>(positions.size()); }
};

}  // namespace sipf
