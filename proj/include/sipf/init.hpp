#pragma once

#include <cstdint>

#include "sipf/params.hpp"
#include "sipf/particles.hpp"
#include "sipf/spectral_field.hpp"

namespace sipf {

// Total mass M0 = sum_b w_b 4 pi int_0^rt exp(-r^2/eps) r^2 dr, by adaptive
// quadrature with relative tolerance 1e-10.
double compute_total_mass(const InitialCondition& ic, double epsilon);

// P i.i.d. samples from rho0 / M0. The radius comes from an inverse-CDF lookup
// on a tabulated CDF of r^2 exp(-r^2/eps) (1e4-node table, linear
// interpolation), the direction is uniform on the sphere, and the blob is
// chosen proportional to its weight. Every draw is a pure function of
// (seed, p), so the ensemble is reproducible bitwise.
ParticleEnsemble sample_initial_particles(const InitialCondition& ic, double epsilon, double box, long P,
                                          uint64_t seed);

enum class InitialField { m0, f0 };

// Fourier coefficients of the initial m0 or f0. Blobs are radial, so each
// coefficient reduces to a 1D integral (4 pi / kappa) int g(r) r sin(kappa r) dr
// evaluated per distinct |k| by adaptive quadrature, times the blob phase
// factors; Hermitian symmetry is exact by construction.
SpectralField initial_field_coefficients(const InitialCondition& ic, double epsilon, int modes_per_dim,
                                         double box, InitialField which);

}  // namespace sipf
