#include "sipf/radial_solver.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sipf {

namespace {

// Thomas algorithm; diagonally dominant systems only (ours are).
void solve_tridiagonal(std::vector<double>& a, std::vector<double>& b, std::vector<double>& c,
                       std::vector<double>& rhs) {
  const std::size_t n = b.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double w = a[i] / b[i - 1];
    b[i] -= w * c[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[n - 1] /= b[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - c[i] * rhs[i + 1]) / b[i];
}

// Backward-Euler solve of (c0 I - d dt D) u = rhs where D is the spherical
// diffusion operator in conservative form; the result replaces rhs.
void implicit_diffusion(const RadialGrid& g, double c0, double d_dt, std::vector<double>& rhs) {
  const int n = g.n_r;
  const double dr = g.dr();
  std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double r = g.center(i);
    const double face_lo = i == 0 ? 0.0 : (i * dr) * (i * dr);
    const double face_hi = i == n - 1 ? 0.0 : ((i + 1) * dr) * ((i + 1) * dr);
    const double scale = d_dt / (r * r * dr * dr);
    a[i] = -scale * face_lo;
    c[i] = -scale * face_hi;
    b[i] = c0 - a[i] - c[i];
  }
  solve_tridiagonal(a, b, c, rhs);
}

}  // namespace

RadialGrid make_initial_radial(const SimulationParams& params, const InitialCondition& ic, int n_r,
                               double R) {
  if (n_r < 3) throw std::invalid_argument("make_initial_radial: need n_r >= 3");
  for (const auto& b : ic.blobs)
    if (norm(b.center) != 0.0)
      throw std::invalid_argument("make_initial_radial: radial reduction needs origin-centered blobs");
  RadialGrid g;
  g.n_r = n_r;
  g.R = R;
  g.rho.resize(n_r);
  g.f.resize(n_r);
  g.m.resize(n_r);
  double weight = 0.0;
  for (const auto& b : ic.blobs) weight += b.weight;
  for (int i = 0; i < n_r; ++i) {
    const double v = weight * ic.blob_profile(g.center(i), params.epsilon);
    g.rho[i] = v;
    g.f[i] = 1.0 - 0.5 * v;
    g.m[i] = 0.5 * v;
  }
  return g;
}

void radial_step_inplace(RadialGrid& g, const SimulationParams& params, double dt) {
  const int n = g.n_r;
  const double dr = g.dr();

  // MDE with explicit production from the current rho.
  std::vector<double> m_new(g.m);
  for (int i = 0; i < n; ++i) m_new[i] += params.alpha * dt * g.rho[i];
  implicit_diffusion(g, 1.0 + params.beta * dt, params.d_m * dt, m_new);

  // ECM decay from the current m.
  std::vector<double> f_new(n);
  for (int i = 0; i < n; ++i) f_new[i] = g.f[i] * (1.0 - params.eta * dt * g.m[i]);

  // Tumor cells: explicit conservative advection, implicit diffusion.
  std::vector<double> rho_new(n);
  double flux_lo = 0.0;  // zero-area face at r = 0
  for (int i = 0; i < n; ++i) {
    double flux_hi = 0.0;
    if (i + 1 < n) {
      const double face_r = (i + 1) * dr;
      flux_hi = face_r * face_r * params.gamma * 0.5 * (g.rho[i] + g.rho[i + 1]) *
                (g.f[i + 1] - g.f[i]) / dr;
    }
    const double r = g.center(i);
    rho_new[i] = g.rho[i] - dt * (flux_hi - flux_lo) / (r * r * dr);
    flux_lo = flux_hi;
  }
  implicit_diffusion(g, 1.0, params.d_n * dt, rho_new);

  g.m = std::move(m_new);
  g.f = std::move(f_new);
  g.rho = std::move(rho_new);
  g.time += dt;
}

RadialGrid radial_step(const RadialGrid& g, const SimulationParams& params, double dt) {
  RadialGrid out = g;
  radial_step_inplace(out, params, dt);
  return out;
}

std::vector<RadialGrid> radial_run(const SimulationParams& params, const InitialCondition& ic, int n_r,
                                   double dt, double R, const std::vector<double>& snapshot_times) {
  if (!(dt > 0.0)) throw std::invalid_argument("radial_run: dt must be > 0");
  const long n_steps = std::lround(params.T / dt);
  std::vector<bool> wanted(static_cast<std::size_t>(n_steps) + 1, false);
  for (double t : snapshot_times) {
    const double steps = t / dt;
    const long idx = std::lround(steps);
    if (idx < 0 || idx > n_steps || std::fabs(steps - static_cast<double>(idx)) > 1e-9)
      throw std::invalid_argument("radial_run: snapshot time " + std::to_string(t) +
                                  " is not a multiple of dt within [0, T]");
    wanted[static_cast<std::size_t>(idx)] = true;
  }
  std::vector<RadialGrid> snapshots;
  RadialGrid g = make_initial_radial(params, ic, n_r, R);
  if (wanted[0]) snapshots.push_back(g);
  for (long s = 1; s <= n_steps; ++s) {
    radial_step_inplace(g, params, dt);
    if (wanted[static_cast<std::size_t>(s)]) snapshots.push_back(g);
  }
  return snapshots;
}

double radial_integral(const RadialGrid& g, const std::vector<double>& values) {
  const double dr = g.dr();
  double s = 0.0;
  for (int i = 0; i < g.n_r; ++i) {
    const double r = g.center(i);
    s += values[i] * 4.0 * std::numbers::pi * r * r * dr;
  }
  return s;
}

double radial_mass(const RadialGrid& g) { return radial_integral(g, g.rho); }

}  // namespace sipf
