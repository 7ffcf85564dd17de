#include "sipf/fdm_solver.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sipf {

namespace {

// Deterministic weighted dot product: fixed-chunk partials summed in index
// order, so the result does not depend on the thread count.
double weighted_dot(const std::vector<double>& a, const std::vector<double>& b,
                    const std::vector<double>& w) {
  const long n = static_cast<long>(a.size());
  constexpr int kChunks = 256;
  double partial[kChunks] = {0.0};
  const long chunk = (n + kChunks - 1) / kChunks;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int c = 0; c < kChunks; ++c) {
    const long lo = c * chunk, hi = std::min(n, lo + chunk);
    double s = 0.0;
    for (long i = lo; i < hi; ++i) s += a[i] * b[i] * w[i];
    partial[c] = s;
  }
  double total = 0.0;
  for (int c = 0; c < kChunks; ++c) total += partial[c];
  return total;
}

// Geometry helpers shared by the stencil loops.
struct GridGeom {
  int dim, n;
  double dx;
  long sx, sy, sz;
  long total;

  explicit GridGeom(const GridField& g)
      : dim(g.dim), n(g.n), dx(g.spacing()), sx(1), sy(g.n), sz(static_cast<long>(g.n) * g.n) {
    total = dim == 3 ? sz * n : sy * n;
  }
};

// v = (c0 I - cd Lap) u with mirrored ghost nodes (zero normal derivative).
void apply_helmholtz(const GridGeom& gg, double c0, double cd, const std::vector<double>& u,
                     std::vector<double>& v) {
  const double inv_dx2 = 1.0 / (gg.dx * gg.dx);
  const int n = gg.n;
  const int nz = gg.dim == 3 ? n : 1;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) collapse(2)
#endif
  for (int iz = 0; iz < nz; ++iz)
    for (int iy = 0; iy < n; ++iy) {
      const long base = iz * gg.sz + iy * gg.sy;
      for (int ix = 0; ix < n; ++ix) {
        const long i = base + ix;
        double lap = 0.0;
        const double ui = u[i];
        {
          const double up = ix + 1 < n ? u[i + gg.sx] : u[i - gg.sx];
          const double um = ix > 0 ? u[i - gg.sx] : u[i + gg.sx];
          lap += up + um - 2.0 * ui;
        }
        {
          const double up = iy + 1 < n ? u[i + gg.sy] : u[i - gg.sy];
          const double um = iy > 0 ? u[i - gg.sy] : u[i + gg.sy];
          lap += up + um - 2.0 * ui;
        }
        if (gg.dim == 3) {
          const double up = iz + 1 < n ? u[i + gg.sz] : u[i - gg.sz];
          const double um = iz > 0 ? u[i - gg.sz] : u[i + gg.sz];
          lap += up + um - 2.0 * ui;
        }
        v[i] = c0 * ui - cd * lap * inv_dx2;
      }
    }
}

// Trapezoid weights make the mirrored Helmholtz operator self-adjoint.
std::vector<double> trapezoid_weights(const GridGeom& gg) {
  std::vector<double> w(static_cast<std::size_t>(gg.total), 1.0);
  const int n = gg.n;
  const int nz = gg.dim == 3 ? n : 1;
  for (int iz = 0; iz < nz; ++iz)
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) {
        double v = 1.0;
        if (ix == 0 || ix == n - 1) v *= 0.5;
        if (iy == 0 || iy == n - 1) v *= 0.5;
        if (gg.dim == 3 && (iz == 0 || iz == n - 1)) v *= 0.5;
        w[iz * gg.sz + iy * gg.sy + ix] = v;
      }
  return w;
}

void axpy(double a, const std::vector<double>& x, std::vector<double>& y) {
  const long n = static_cast<long>(x.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long i = 0; i < n; ++i) y[i] += a * x[i];
}

// Preconditioned CG in the trapezoid-weighted inner product. The diagonal of
// the operator is constant, so Jacobi scaling is a single multiplier.
void solve_helmholtz(const GridGeom& gg, double c0, double cd, const std::vector<double>& rhs,
                     std::vector<double>& u, const std::vector<double>& w, double tol = 1e-10,
                     int max_iter = 2000) {
  const double diag = c0 + cd * 2.0 * gg.dim / (gg.dx * gg.dx);
  const double inv_diag = 1.0 / diag;
  std::vector<double> r = rhs, z(rhs.size()), p(rhs.size()), ap(rhs.size());
  apply_helmholtz(gg, c0, cd, u, ap);
  const long total = static_cast<long>(rhs.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long i = 0; i < total; ++i) {
    r[i] = rhs[i] - ap[i];
    p[i] = z[i] = r[i] * inv_diag;
  }
  const double b_norm = std::sqrt(weighted_dot(rhs, rhs, w));
  if (b_norm == 0.0) {
    std::fill(u.begin(), u.end(), 0.0);
    return;
  }
  double rz = weighted_dot(r, z, w);
  for (int it = 0; it < max_iter; ++it) {
    const double r_norm = std::sqrt(weighted_dot(r, r, w));
    if (r_norm <= tol * b_norm) return;
    apply_helmholtz(gg, c0, cd, p, ap);
    const double alpha = rz / weighted_dot(p, ap, w);
    axpy(alpha, p, u);
    axpy(-alpha, ap, r);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long i = 0; i < total; ++i) z[i] = r[i] * inv_diag;
    const double rz_next = weighted_dot(r, z, w);
    const double beta = rz_next / rz;
    rz = rz_next;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long i = 0; i < total; ++i) p[i] = z[i] + beta * p[i];
  }
  const double res = std::sqrt(weighted_dot(r, r, w)) / b_norm;
  throw std::runtime_error("fdm: diffusion solve did not converge, relative residual " +
                           std::to_string(res));
}

// Divergence of the centered face flux gamma * avg(rho) * grad f, with zero
// flux through the walls. Returns div F so the caller subtracts dt * adv.
void advection_divergence(const GridGeom& gg, double gamma, const std::vector<double>& rho,
                          const std::vector<double>& f, std::vector<double>& adv) {
  const int n = gg.n;
  const int nz = gg.dim == 3 ? n : 1;
  const double inv_dx = 1.0 / gg.dx;
  std::fill(adv.begin(), adv.end(), 0.0);
  const long strides[3] = {gg.sx, gg.sy, gg.sz};
#ifdef _OPENMP
#pragma omp parallel for schedule(static) collapse(2)
#endif
  for (int iz = 0; iz < nz; ++iz)
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) {
        const long i = iz * gg.sz + iy * gg.sy + ix;
        const int idx[3] = {ix, iy, iz};
        double div = 0.0;
        for (int a = 0; a < gg.dim; ++a) {
          const long s = strides[a];
          double f_hi = 0.0, f_lo = 0.0;
          if (idx[a] + 1 < n) f_hi = 0.5 * (rho[i] + rho[i + s]) * (f[i + s] - f[i]) * inv_dx;
          if (idx[a] > 0) f_lo = 0.5 * (rho[i - s] + rho[i]) * (f[i] - f[i - s]) * inv_dx;
          div += (f_hi - f_lo) * inv_dx;
        }
        adv[i] = gamma * div;
      }
}

}  // namespace

std::size_t GridField::cells() const {
  std::size_t c = static_cast<std::size_t>(n) * n;
  if (dim == 3) c *= n;
  return c;
}

GridField make_initial_grid(const SimulationParams& params, const InitialCondition& ic, int n) {
  if (n < 3) throw std::invalid_argument("make_initial_grid: need n >= 3");
  ic.validate(params.L);
  GridField g;
  g.dim = params.dim;
  g.n = n;
  g.box = params.L;
  g.rho.resize(g.cells());
  g.f.resize(g.cells());
  g.m.resize(g.cells());
  const int nz = g.dim == 3 ? n : 1;
  for (int iz = 0; iz < nz; ++iz)
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) {
        const std::size_t i = (static_cast<std::size_t>(iz) * n + iy) * static_cast<std::size_t>(n) + ix;
        const Vec3 x{g.node_coord(ix), g.node_coord(iy), g.dim == 3 ? g.node_coord(iz) : 0.0};
        const double r = ic.rho0(x, params.epsilon);
        g.rho[i] = r;
        g.f[i] = 1.0 - 0.5 * r;
        g.m[i] = 0.5 * r;
      }
  return g;
}

void fdm_step_inplace(GridField& g, const SimulationParams& params) {
  const GridGeom gg(g);
  std::vector<double> w = trapezoid_weights(gg);
  std::vector<double> rhs(g.cells());

  // MDE: (1 + beta dt) m' - d_m dt Lap m' = m + alpha dt rho
  const long total = static_cast<long>(g.cells());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long i = 0; i < total; ++i) rhs[i] = g.m[i] + params.alpha * params.dt * g.rho[i];
  std::vector<double> m_new = g.m;  // warm start from the previous level
  solve_helmholtz(gg, 1.0 + params.beta * params.dt, params.d_m * params.dt, rhs, m_new, w);

  // ECM: f' = f (1 - eta dt m), both factors at the old time level
  std::vector<double> f_new(g.cells());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long i = 0; i < total; ++i) f_new[i] = g.f[i] * (1.0 - params.eta * params.dt * g.m[i]);

  // Tumor cells: rho' - d_n dt Lap rho' = rho - dt div(gamma rho grad f)
  std::vector<double> adv(g.cells());
  advection_divergence(gg, params.gamma, g.rho, g.f, adv);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long i = 0; i < total; ++i) rhs[i] = g.rho[i] - params.dt * adv[i];
  std::vector<double> rho_new = g.rho;
  solve_helmholtz(gg, 1.0, params.d_n * params.dt, rhs, rho_new, w);

  g.m = std::move(m_new);
  g.f = std::move(f_new);
  g.rho = std::move(rho_new);
  g.time += params.dt;
}

GridField fdm_step(const GridField& g, const SimulationParams& params) {
  GridField out = g;
  fdm_step_inplace(out, params);
  return out;
}

std::vector<GridField> fdm_run(const SimulationParams& params, const InitialCondition& ic, int n,
                               const std::vector<double>& snapshot_times) {
  params.validate();
  const long n_steps = params.steps();
  std::vector<bool> wanted(static_cast<std::size_t>(n_steps) + 1, false);
  for (double t : snapshot_times) {
    const double steps = t / params.dt;
    const long idx = std::lround(steps);
    if (idx < 0 || idx > n_steps || std::fabs(steps - static_cast<double>(idx)) > 1e-9)
      throw std::invalid_argument("fdm_run: snapshot time " + std::to_string(t) +
                                  " is not a multiple of dt within [0, T]");
    wanted[static_cast<std::size_t>(idx)] = true;
  }
  std::vector<GridField> snapshots;
  GridField g = make_initial_grid(params, ic, n);
  if (wanted[0]) snapshots.push_back(g);
  for (long s = 1; s <= n_steps; ++s) {
    fdm_step_inplace(g, params);
    if (wanted[static_cast<std::size_t>(s)]) snapshots.push_back(g);
  }
  return snapshots;
}

double conservation_error(const GridField& g0, const GridField& gT) {
  if (g0.rho.size() != gT.rho.size())
    throw std::invalid_argument("conservation_error: grids must share shape");
  double s0 = 0.0, sT = 0.0;
  for (std::size_t i = 0; i < g0.rho.size(); ++i) {
    s0 += g0.rho[i];
    sT += gT.rho[i];
  }
  return (sT - s0) / s0;
}

}  // namespace sipf
