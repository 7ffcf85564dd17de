#include "sipf/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sipf/init.hpp"
#include "sipf/quadrature.hpp"

namespace sipf {

namespace {

struct Binner {
  RadialProfile p;
  std::vector<double> sums;

  Binner(double bin_width, double r_max, std::string tag) {
    if (!(bin_width > 0.0)) throw std::invalid_argument("radial binning: bin_width must be > 0");
    const int n = static_cast<int>(std::ceil(r_max / bin_width - 1e-12));
    p.tag = std::move(tag);
    p.edges.resize(n + 1);
    for (int i = 0; i <= n; ++i) p.edges[i] = i * bin_width;
    p.values.assign(n, 0.0);
    p.counts.assign(n, 0);
    sums.assign(n, 0.0);
  }

  void add(double r, double value) {
    if (r >= p.edges.back()) return;
    const int i = std::min<int>(static_cast<int>(r / (p.edges[1] - p.edges[0])),
                                static_cast<int>(p.values.size()) - 1);
    sums[i] += value;
    p.counts[i] += 1;
  }

  RadialProfile finish() {
    for (std::size_t i = 0; i < sums.size(); ++i)
      p.values[i] = p.counts[i] > 0 ? sums[i] / static_cast<double>(p.counts[i]) : 0.0;
    return std::move(p);
  }
};

// Piecewise-linear interpolation over (x, y) samples, clamped at the ends.
double interp_linear(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - xs.begin());
  const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return ys[i - 1] + t * (ys[i] - ys[i - 1]);
}

}  // namespace

RadialProfile bin_lattice_radially(const LatticeField& g, const Vec3& center, double bin_width,
                                   double r_max, std::string tag) {
  Binner b(bin_width, r_max, std::move(tag));
  for (int iz = 0; iz < g.n; ++iz)
    for (int iy = 0; iy < g.n; ++iy)
      for (int ix = 0; ix < g.n; ++ix) {
        const Vec3 x{g.node_coord(ix), g.node_coord(iy), g.node_coord(iz)};
        b.add(norm(min_image(x, center, g.box)), g.values[g.flat(ix, iy, iz)]);
      }
  return b.finish();
}

RadialProfile bin_grid_radially(const GridField& g, const std::vector<double>& values, const Vec3& center,
                                double bin_width, double r_max, std::string tag) {
  if (values.size() != g.cells()) throw std::invalid_argument("bin_grid_radially: value array mismatch");
  Binner b(bin_width, r_max, std::move(tag));
  const int nz = g.dim == 3 ? g.n : 1;
  for (int iz = 0; iz < nz; ++iz)
    for (int iy = 0; iy < g.n; ++iy)
      for (int ix = 0; ix < g.n; ++ix) {
        const Vec3 x{g.node_coord(ix), g.node_coord(iy), g.dim == 3 ? g.node_coord(iz) : 0.0};
        const Vec3 c{center[0], center[1], g.dim == 3 ? center[2] : 0.0};
        const std::size_t i = (static_cast<std::size_t>(iz) * g.n + iy) * g.n + ix;
        b.add(norm(x - c), values[i]);
      }
  return b.finish();
}

RadialProfile bin_particles_radially(const ParticleEnsemble& ens, const Vec3& center, double bin_width,
                                     double r_max) {
  Binner b(bin_width, r_max, "sipf");
  for (const auto& x : ens.positions) b.add(norm(x - center), 1.0);
  RadialProfile p = b.finish();
  const double mass_per_particle = ens.total_mass / static_cast<double>(ens.count());
  for (int i = 0; i < p.bins(); ++i) {
    const double rmid = p.midpoint(i);
    const double shell = 4.0 * std::numbers::pi * rmid * rmid * bin_width;
    p.values[i] = mass_per_particle * static_cast<double>(p.counts[i]) / shell;
  }
  return p;
}

RadialProfile profile_from_radial(const RadialGrid& g, const std::vector<double>& values,
                                  std::string tag) {
  RadialProfile p;
  p.tag = std::move(tag);
  p.time = g.time;
  const double dr = g.dr();
  p.edges.resize(g.n_r + 1);
  for (int i = 0; i <= g.n_r; ++i) p.edges[i] = i * dr;
  p.values = values;
  p.counts.assign(g.n_r, 1);
  return p;
}

double relative_l2_error(const RadialProfile& num, const RadialProfile& ref) {
  // Reference values at num's bin midpoints.
  std::vector<double> ref_mid(num.bins());
  const bool same_layout = num.edges == ref.edges;
  if (same_layout) {
    ref_mid = ref.values;
  } else {
    std::vector<double> xs, ys;
    xs.reserve(ref.bins());
    ys.reserve(ref.bins());
    for (int i = 0; i < ref.bins(); ++i) {
      if (ref.counts[i] == 0) continue;
      xs.push_back(ref.midpoint(i));
      ys.push_back(ref.values[i]);
    }
    if (xs.size() < 2) throw std::invalid_argument("relative_l2_error: reference profile too sparse");
    for (int i = 0; i < num.bins(); ++i) ref_mid[static_cast<std::size_t>(i)] = interp_linear(xs, ys, num.midpoint(i));
  }
  double num2 = 0.0, ref2 = 0.0;
  for (int i = 0; i < num.bins(); ++i) {
    if (num.counts[i] == 0) continue;
    if (same_layout && ref.counts[i] == 0) continue;
    const double d = num.values[i] - ref_mid[static_cast<std::size_t>(i)];
    num2 += d * d;
    ref2 += ref_mid[static_cast<std::size_t>(i)] * ref_mid[static_cast<std::size_t>(i)];
  }
  if (ref2 == 0.0) throw std::domain_error("relative_l2_error: reference is identically zero");
  return std::sqrt(num2) / std::sqrt(ref2);
}

double convergence_rate(double err_prev, double err_curr, double h_prev, double h_curr) {
  if (!(err_prev > 0.0 && err_curr > 0.0 && h_prev > 0.0 && h_curr > 0.0))
    throw std::invalid_argument("convergence_rate: inputs must be positive");
  return std::fabs(std::log(err_prev / err_curr) / std::log(h_prev / h_curr));
}

double runtime_scaling_ratio(double t_prev, double t_curr, double h_prev, double h_curr) {
  if (!(t_prev > 0.0 && t_curr > 0.0 && h_prev > 0.0 && h_curr > 0.0))
    throw std::invalid_argument("runtime_scaling_ratio: inputs must be positive");
  return std::fabs(std::log(t_curr / t_prev) / std::log(h_prev / h_curr));
}

double integral_m_reference(double t, const SimulationParams& params, const InitialCondition& ic) {
  const double m0_total = 0.5 * compute_total_mass(ic, params.epsilon);
  const double source = params.alpha * compute_total_mass(ic, params.epsilon);
  if (params.beta == 0.0) return m0_total + source * t;
  return std::exp(-params.beta * t) * m0_total + source / params.beta * (1.0 - std::exp(-params.beta * t));
}

double integral_lnf_reference(double t, const SimulationParams& params, const InitialCondition& ic) {
  if (params.beta != 0.0)
    throw std::invalid_argument("integral_lnf_reference: closed form requires beta = 0");
  if (ic.blobs.size() != 1 || norm(ic.blobs[0].center) != 0.0)
    throw std::invalid_argument("integral_lnf_reference: requires a single origin-centered blob");
  const double w = ic.blobs[0].weight;
  if (!(w < 2.0)) throw std::invalid_argument("integral_lnf_reference: blob weight must keep f0 positive");
  const double lnf0 = 4.0 * std::numbers::pi *
                      integrate(
                          [&](double r) {
                            return std::log(1.0 - 0.5 * w * std::exp(-r * r / params.epsilon)) * r * r;
                          },
                          0.0, ic.truncation_radius, 1e-10);
  const double m0_total = 0.5 * compute_total_mass(ic, params.epsilon);
  const double mass = compute_total_mass(ic, params.epsilon);
  return lnf0 - params.eta * (m0_total * t + 0.5 * params.alpha * mass * t * t);
}

double integral_m_sipf(const SpectralField& m) {
  const double vol = m.box() * m.box() * m.box();
  return m.at(0, 0, 0).real() * vol;
}

double integral_m_radial(const RadialGrid& g) { return radial_integral(g, g.m); }

double integral_m_fdm(const GridField& g) {
  double s = 0.0;
  for (double v : g.m) s += v;
  const double dx = g.spacing();
  return s * std::pow(dx, g.dim);
}

double integral_lnf_sipf(const SpectralField& f) {
  const LatticeField g = inverse_transform_to_lattice(f);
  long bad = 0;
  double s = 0.0;
  for (double v : g.values) {
    if (v <= 0.0) {
      ++bad;
      continue;
    }
    s += std::log(v);
  }
  if (bad > 0)
    throw std::domain_error("integral_lnf_sipf: " + std::to_string(bad) +
                            " nonpositive lattice values of f");
  const double h = g.spacing();
  return s * h * h * h;
}

double integral_lnf_radial(const RadialGrid& g) {
  std::vector<double> lnf(g.f.size());
  for (std::size_t i = 0; i < g.f.size(); ++i) {
    if (g.f[i] <= 0.0) throw std::domain_error("integral_lnf_radial: nonpositive f");
    lnf[i] = std::log(g.f[i]);
  }
  return radial_integral(g, lnf);
}

double integral_lnf_fdm(const GridField& g) {
  double s = 0.0;
  long bad = 0;
  for (double v : g.f) {
    if (v <= 0.0) {
      ++bad;
      continue;
    }
    s += std::log(v);
  }
  if (bad > 0)
    throw std::domain_error("integral_lnf_fdm: " + std::to_string(bad) + " nonpositive grid values of f");
  return s * std::pow(g.spacing(), g.dim);
}

double error_m(double numerical, double reference) {
  if (reference == 0.0) throw std::domain_error("error_m: zero reference");
  return std::fabs(numerical - reference) / std::fabs(reference);
}

double fit_loglog_slope(const std::vector<std::pair<double, double>>& points, FitMode mode) {
  if (points.size() < 2) throw std::invalid_argument("fit_loglog_slope: need at least 2 points");
  std::vector<double> xs, ys;
  for (const auto& [x, err] : points) {
    if (!(err > 0.0)) throw std::invalid_argument("fit_loglog_slope: errors must be positive");
    if (mode == FitMode::loglog && !(x > 0.0))
      throw std::invalid_argument("fit_loglog_slope: abscissae must be positive in log-log mode");
    xs.push_back(mode == FitMode::loglog ? std::log(x) : x);
    ys.push_back(std::log(err));
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_loglog_slope: degenerate abscissae");
  return sxy / sxx;
}

}  // namespace sipf
