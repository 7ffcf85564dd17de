#pragma once

#include <vector>

#include "sipf/params.hpp"

namespace sipf {

// Cell-centered radial mesh on (0, R]: r_i = (i + 1/2) dr with dr = R/n_r.
// Cell centers exclude the origin, so the spherical operators need no
// special-casing at r = 0; the r = 0 face has zero area and the r = R face
// carries a zero-flux condition.
struct RadialGrid {
  int n_r = 0;
  double R = 1.0;
  double time = 0.0;
  std::vector<double> rho, f, m;

  double dr() const { return R / n_r; }
  double center(int i) const { return (i + 0.5) * dr(); }
};

// Radially symmetric initial data; every blob must sit at the origin.
RadialGrid make_initial_radial(const SimulationParams& params, const InitialCondition& ic, int n_r,
                               double R);

// One step of the spherically symmetric system: conservative-form diffusion
// (1/r^2) d_r (r^2 d_r .) backward-Euler via a tridiagonal solve, explicit
// conservative advection flux gamma rho d_r f on faces, explicit ECM decay.
void radial_step_inplace(RadialGrid& g, const SimulationParams& params, double dt);
RadialGrid radial_step(const RadialGrid& g, const SimulationParams& params, double dt);

std::vector<RadialGrid> radial_run(const SimulationParams& params, const InitialCondition& ic, int n_r,
                                   double dt, double R, const std::vector<double>& snapshot_times);

// Total mass sum 4 pi r_i^2 rho_i dr.
double radial_mass(const RadialGrid& g);
// Shell-sum integral of an arbitrary cell array.
double radial_integral(const RadialGrid& g, const std::vector<double>& values);

}  // namespace sipf
