#include "sipf/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sipf {

void SimulationParams::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("SimulationParams: " + what); };
  if (!(d_n >= 0.0)) fail("d_n must be >= 0");
  if (!(d_m > 0.0)) fail("d_m must be > 0");
  if (!(gamma >= 0.0)) fail("gamma must be >= 0");
  if (!(eta >= 0.0)) fail("eta must be >= 0");
  if (!(alpha >= 0.0)) fail("alpha must be >= 0");
  if (!(beta >= 0.0)) fail("beta must be >= 0");
  if (!(epsilon > 0.0)) fail("epsilon must be > 0");
  if (!(L > 0.0)) fail("L must be > 0");
  if (!(dt > 0.0)) fail("dt must be > 0");
  if (!(T >= dt)) fail("T must be >= dt");
  if (P < 1) fail("P must be >= 1");
  if (H < 2 || H % 2 != 0) fail("H must be an even integer >= 2");
  if (dim != 2 && dim != 3) fail("dim must be 2 or 3");
}

double InitialCondition::blob_profile(double r, double epsilon) const {
  if (r > truncation_radius) return 0.0;
  return std::exp(-r * r / epsilon);
}

double InitialCondition::rho0(const Vec3& x, double epsilon) const {
  double v = 0.0;
  for (const auto& b : blobs) v += b.weight * blob_profile(norm(x - b.center), epsilon);
  return v;
}

void InitialCondition::validate(double box) const {
  if (!(truncation_radius > 0.0)) throw std::invalid_argument("InitialCondition: truncation_radius must be > 0");
  for (const auto& b : blobs) {
    if (b.weight < 0.0) throw std::invalid_argument("InitialCondition: blob weight must be >= 0");
    for (int d = 0; d < 3; ++d) {
      if (std::fabs(b.center[d]) + truncation_radius >= 0.5 * box)
        throw std::invalid_argument("InitialCondition: blob support extends outside the box");
    }
  }
}

}  // namespace sipf
