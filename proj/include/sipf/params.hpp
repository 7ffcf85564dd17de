#pragma once

#include <cstdint>
#include <vector>

#include "sipf/vec.hpp"

namespace sipf {

// Model constants and discretization knobs. Defaults are the haptotaxis
// benchmark set used throughout the experiments.
struct SimulationParams {
  double d_n = 0.001;      // tumor cell motility
  double d_m = 0.001;      // MDE diffusion
  double gamma = 0.005;    // haptotactic coefficient
  double eta = 10.0;       // ECM degradation rate
  double alpha = 0.1;      // MDE production rate
  double beta = 0.0;       // MDE decay rate
  double epsilon = 0.0025; // squared width of the initial Gaussian blobs
  double L = 2.0;          // periodic box side, domain [-L/2, L/2)^3
  double dt = 0.01;        // time step
  double T = 4.0;          // final time
  long P = 10000;          // particle count
  int H = 24;              // Fourier modes per dimension (even)
  uint64_t seed = 12345;
  int dim = 3;             // grid solver dimension; the particle-field solver is 3D only

  long steps() const { return static_cast<long>(T / dt + 0.5); }
  // Throws std::invalid_argument naming the violated invariant.
  void validate() const;
};

// Sum of truncated Gaussian blobs: rho0(x) = sum_b w_b exp(-|x-c_b|^2/eps),
// hard-truncated at truncation_radius. Derived fields f0 = 1 - rho0/2 and
// m0 = rho0/2 share the truncation.
struct InitialCondition {
  struct Blob {
    Vec3 center{0.0, 0.0, 0.0};
    double weight = 1.0;
  };
  std::vector<Blob> blobs{Blob{}};
  double truncation_radius = 0.1;

  double rho0(const Vec3& x, double epsilon) const;
  double f0(const Vec3& x, double epsilon) const { return 1.0 - 0.5 * rho0(x, epsilon); }
  double m0(const Vec3& x, double epsilon) const { return 0.5 * rho0(x, epsilon); }
  // Radial profile of a unit blob about its own center.
  double blob_profile(double r, double epsilon) const;

  // Every blob (plus truncation radius) must sit strictly inside the box.
  void validate(double box) const;
};

}  // namespace sipf
