#pragma once

#include <cstdint>
#include <string>

#include "sipf/diagnostics.hpp"
#include "sipf/fdm_solver.hpp"
#include "sipf/particles.hpp"
#include "sipf/radial_solver.hpp"
#include "sipf/spectral_field.hpp"

namespace sipf::io {

// Full-precision decimal formatting shared by every writer, so identical
// runs emit byte-identical files.
std::string format_double(double v);

// Coefficient dump: CSV with columns j,m,l,re,im in sorted signed-index order.
void write_spectral_csv(const SpectralField& f, const std::string& path);

// Particle snapshot: CSV with columns step,p,x,y,z.
void write_particles_csv(long step, const ParticleEnsemble& ens, const std::string& path);

// Binned profile: CSV with columns r,value,count (r = bin midpoint).
void write_profile_csv(const RadialProfile& p, const std::string& path);

// Radial solver snapshot: columns r,rho,f,m with time and dr in the header.
void write_radial_grid_csv(const RadialGrid& g, const std::string& path);
RadialGrid read_radial_grid_csv(const std::string& path);

// Grid snapshot: one-line text header "dim n dx time" then raw little-endian
// 64-bit floats in x-fastest order.
void write_grid_binary(const GridField& g, const std::string& field, const std::string& path);
GridField read_grid_binary(const std::string& path);

// Axis slices through the box center: columns axis,coord,rho,f,m.
void write_grid_slices_csv(const GridField& g, const std::string& path);

// Comparison table mirroring the published layout.
void write_error_report_csv(const ErrorReport& r, const std::string& path);

uint64_t fnv1a64(const std::string& s);

}  // namespace sipf::io
