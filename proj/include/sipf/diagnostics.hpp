#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sipf/fdm_solver.hpp"
#include "sipf/params.hpp"
#include "sipf/particles.hpp"
#include "sipf/radial_solver.hpp"
#include "sipf/spectral_field.hpp"

namespace sipf {

// Radially binned representation of a 3D (or 2D) field or particle cloud;
// the common comparison format for all solvers. Bins with no samples stay
// flagged via counts == 0 and are excluded from error sums.
struct RadialProfile {
  std::vector<double> edges;
  std::vector<double> values;
  std::vector<long> counts;
  std::string tag;
  double time = 0.0;

  int bins() const { return static_cast<int>(values.size()); }
  double midpoint(int i) const { return 0.5 * (edges[i] + edges[i + 1]); }
  double bin_width() const { return edges[1] - edges[0]; }
};

// Benchmark table mirroring the published comparison layout; ratio and rate
// are defined from the second row onward (NaN in the first).
struct ErrorReport {
  struct Row {
    std::string label;
    double control = 0.0;
    double runtime_s = 0.0;
    double ratio = 0.0;
    double error = 0.0;
    double rate = 0.0;
  };
  std::vector<Row> rows;
};

// Mean of lattice/grid sample values per radial bin about `center`.
RadialProfile bin_lattice_radially(const LatticeField& g, const Vec3& center, double bin_width,
                                   double r_max, std::string tag = "sipf");
RadialProfile bin_grid_radially(const GridField& g, const std::vector<double>& values, const Vec3& center,
                                double bin_width, double r_max, std::string tag = "fdm");
// Density estimate per spherical shell: (M0/P) count_i / (4 pi rmid_i^2 w).
RadialProfile bin_particles_radially(const ParticleEnsemble& ens, const Vec3& center, double bin_width,
                                     double r_max);
// View of a radial-solver array as a profile (cell centers as bin midpoints).
RadialProfile profile_from_radial(const RadialGrid& g, const std::vector<double>& values,
                                  std::string tag = "radial");

// sqrt(sum (M_i - R_i)^2) / sqrt(sum R_i^2) over nonempty bins; the reference
// is resampled onto num's bin midpoints by linear interpolation when the bin
// layouts differ. Throws if the reference sum vanishes.
double relative_l2_error(const RadialProfile& num, const RadialProfile& ref);

// |log(e_prev/e_curr) / log(h_prev/h_curr)|
double convergence_rate(double err_prev, double err_curr, double h_prev, double h_curr);
// |log(t_curr/t_prev) / log(h_prev/h_curr)|
double runtime_scaling_ratio(double t_prev, double t_curr, double h_prev, double h_curr);

// Closed-form integral of the MDE concentration at time t (exact solution of
// the zero-mode ODE d/dt int m = -beta int m + alpha M0).
double integral_m_reference(double t, const SimulationParams& params, const InitialCondition& ic);
// Closed-form integral of ln f at time t; requires beta = 0 and one
// origin-centered blob.
double integral_lnf_reference(double t, const SimulationParams& params, const InitialCondition& ic);

// Method-specific quadratures of int m and int ln f.
double integral_m_sipf(const SpectralField& m);
double integral_m_radial(const RadialGrid& g);
double integral_m_fdm(const GridField& g);
// Throws std::domain_error when any lattice/grid value of f is nonpositive.
double integral_lnf_sipf(const SpectralField& f);
double integral_lnf_radial(const RadialGrid& g);
double integral_lnf_fdm(const GridField& g);

// |m_n - m_r| / |m_r|
double error_m(double numerical, double reference);

enum class FitMode { loglog, semilog };

// Least-squares slope of log(err) against log(x) (loglog) or x (semilog).
double fit_loglog_slope(const std::vector<std::pair<double, double>>& points,
                        FitMode mode = FitMode::loglog);

}  // namespace sipf
