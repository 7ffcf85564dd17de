#pragma once

#include <vector>

#include "sipf/params.hpp"

namespace sipf {

// Node-centered uniform grid over the closed box [-L/2, L/2]^dim including
// boundary nodes, so dx = L/(n-1). Arrays are x-fastest.
struct GridField {
  int dim = 3;
  int n = 0;
  double box = 0.0;
  double time = 0.0;
  std::vector<double> rho, f, m;

  double spacing() const { return box / (n - 1); }
  std::size_t cells() const;
  double node_coord(int i) const { return -0.5 * box + spacing() * i; }
};

GridField make_initial_grid(const SimulationParams& params, const InitialCondition& ic, int n);

// One time step: backward-Euler diffusion for m (decay implicit, production
// explicit), pointwise explicit ECM degradation, then backward-Euler
// diffusion for rho with an explicit conservative advection flux
// gamma rho grad f on cell faces (centered averages, zero flux at walls).
// Diffusion systems are solved matrix-free by conjugate gradients with
// Jacobi scaling to a 1e-10 relative residual.
GridField fdm_step(const GridField& g, const SimulationParams& params);
void fdm_step_inplace(GridField& g, const SimulationParams& params);

std::vector<GridField> fdm_run(const SimulationParams& params, const InitialCondition& ic, int n,
                               const std::vector<double>& snapshot_times);

// Signed relative drift of the plain cell sum of rho between two states.
double conservation_error(const GridField& g0, const GridField& gT);

}  // namespace sipf
