#include "sipf/sipf_solver.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sipf/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sipf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// exp(-41) ~ 1.6e-18: beyond this many decay lengths the kernel is below
// double roundoff relative to its near field.
constexpr double kKernelDecayLengths = 41.0;

void axis_phases(int h, double box, double x, std::complex<double>* ph) {
  for (int i = 0; i < h; ++i) {
    const int k = i < h / 2 ? i : i - h;
    ph[i] = std::polar(1.0, kTwoPi * k * x / box);
  }
}

// Value and gradient of f plus value of m at x in a single pass over the
// shared phase tables (the hot path of the particle loop).
void fused_field_eval(const SpectralField& f, const SpectralField& m, const Vec3& x, double* f_val,
                      Vec3* f_grad, double* m_val) {
  constexpr int kStackModes = 64;
  const int h = f.modes();
  const double box = f.box();
  std::complex<double> stack[3 * kStackModes];
  std::vector<std::complex<double>> heap;
  std::complex<double>* px;
  if (h <= kStackModes) {
    px = stack;
  } else {
    heap.resize(3 * static_cast<std::size_t>(h));
    px = heap.data();
  }
  std::complex<double>* py = px + h;
  std::complex<double>* pz = py + h;
  axis_phases(h, box, x[0], px);
  axis_phases(h, box, x[1], py);
  axis_phases(h, box, x[2], pz);
  const std::complex<double> iw{0.0, kTwoPi / box};
  std::complex<double> vf{0, 0}, vm{0, 0}, gx{0, 0}, gy{0, 0}, gz{0, 0};
  for (int iz = 0; iz < h; ++iz) {
    const std::complex<double> wz = iw * static_cast<double>(f.freq(iz));
    for (int iy = 0; iy < h; ++iy) {
      const std::complex<double>* frow = f.data() + f.flat(0, iy, iz);
      const std::complex<double>* mrow = m.data() + m.flat(0, iy, iz);
      std::complex<double> sf{0, 0}, sfx{0, 0}, sm{0, 0};
      for (int ix = 0; ix < h; ++ix) {
        const std::complex<double> ph = px[ix];
        sf += frow[ix] * ph;
        sfx += frow[ix] * ph * static_cast<double>(f.freq(ix));
        sm += mrow[ix] * ph;
      }
      const std::complex<double> w = py[iy] * pz[iz];
      vf += sf * w;
      vm += sm * w;
      gx += sfx * (iw * w);
      gy += sf * w * (iw * static_cast<double>(f.freq(iy)));
      gz += sf * w * wz;
    }
  }
  *f_val = vf.real();
  *m_val = vm.real();
  *f_grad = {gx.real(), gy.real(), gz.real()};
}

// Periodic Catmull-Rom interpolation on a fine lattice.
class Tricubic {
 public:
  explicit Tricubic(LatticeField g) : g_(std::move(g)) {}

  double value(const Vec3& x) const {
    const int n = g_.n;
    const double h = g_.box / n;
    int base[3];
    double w[3][4];
    for (int d = 0; d < 3; ++d) {
      const double u = x[d] / h;
      const double fl = std::floor(u);
      base[d] = static_cast<int>(fl);
      const double t = u - fl;
      const double t2 = t * t, t3 = t2 * t;
      w[d][0] = 0.5 * (-t3 + 2.0 * t2 - t);
      w[d][1] = 0.5 * (3.0 * t3 - 5.0 * t2 + 2.0);
      w[d][2] = 0.5 * (-3.0 * t3 + 4.0 * t2 + t);
      w[d][3] = 0.5 * (t3 - t2);
    }
    double acc = 0.0;
    for (int kz = 0; kz < 4; ++kz) {
      const int iz = wrap_idx(base[2] + kz - 1, n);
      for (int ky = 0; ky < 4; ++ky) {
        const int iy = wrap_idx(base[1] + ky - 1, n);
        const double wyz = w[1][ky] * w[2][kz];
        const double* row = g_.values.data() + g_.flat(0, iy, iz);
        double s = 0.0;
        for (int kx = 0; kx < 4; ++kx) s += w[0][kx] * row[wrap_idx(base[0] + kx - 1, n)];
        acc += s * wyz;
      }
    }
    return acc;
  }

 private:
  static int wrap_idx(int i, int n) {
    i %= n;
    return i < 0 ? i + n : i;
  }
  LatticeField g_;
};

// Uniform cell decomposition of the periodic box for cutoff pair sums.
class CellList {
 public:
  CellList(const std::vector<Vec3>& pts, double box, double cell_target) : box_(box) {
    nc_ = std::max(1, static_cast<int>(std::floor(box / cell_target)));
    nc_ = std::min(nc_, 64);
    cells_.assign(static_cast<std::size_t>(nc_) * nc_ * nc_, {});
    for (std::size_t q = 0; q < pts.size(); ++q) cells_[cell_of(pts[q])].push_back(q);
    pts_ = &pts;
  }

  template <class F>
  void for_neighbors(const Vec3& x, double r_cut, F&& fn) const {
    const double r2max = r_cut * r_cut;
    auto scan = [&](std::size_t c) {
      for (std::size_t q : cells_[c]) {
        const Vec3 d = min_image(x, (*pts_)[q], box_);
        if (dot(d, d) <= r2max) fn(q, d);
      }
    };
    if (nc_ < 3) {  // too few cells to sweep by offset without revisits
      for (std::size_t c = 0; c < cells_.size(); ++c) scan(c);
      return;
    }
    const int cx = coord_cell(x[0]), cy = coord_cell(x[1]), cz = coord_cell(x[2]);
    for (int dz = -1; dz <= 1; ++dz)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) scan(flat(wrap(cx + dx), wrap(cy + dy), wrap(cz + dz)));
  }

  int cells_per_dim() const { return nc_; }
  double cell_size() const { return box_ / nc_; }

 private:
  int wrap(int i) const {
    i %= nc_;
    return i < 0 ? i + nc_ : i;
  }
  int coord_cell(double x) const {
    int i = static_cast<int>(std::floor((x / box_ + 0.5) * nc_));
    return wrap(i);
  }
  std::size_t cell_of(const Vec3& x) const { return flat(coord_cell(x[0]), coord_cell(x[1]), coord_cell(x[2])); }
  std::size_t flat(int ix, int iy, int iz) const {
    return (static_cast<std::size_t>(iz) * nc_ + iy) * nc_ + ix;
  }

  double box_;
  int nc_;
  std::vector<std::vector<std::size_t>> cells_;
  const std::vector<Vec3>* pts_ = nullptr;
};

}  // namespace

struct DriftContext::Impl {
  const SipfState& s;
  GradMMode mode;
  bool hybrid_ready = false;

  double lattice_h = 0.0;  // L/H quadrature spacing
  double r_reg = 0.0;      // L/(2H) kernel regularization radius
  double r_cut = 0.0;
  int reach = 0;
  std::unique_ptr<Tricubic> m_lagged;  // m_{n-2} on a 4x oversampled lattice
  std::unique_ptr<CellList> prev_cells;

  explicit Impl(const SipfState& state, GradMMode md) : s(state), mode(md) {
    const auto& p = s.params;
    lattice_h = p.L / p.H;
    r_reg = 0.5 * lattice_h;
    hybrid_ready = s.n >= 2 && !s.m_prev2.empty();
    if (mode == GradMMode::paper && hybrid_ready) {
      r_cut = std::min(0.499 * p.L, kKernelDecayLengths / s.kernel.zeta);
      reach = static_cast<int>(std::ceil(r_cut / lattice_h));
      // The quadrature window must stay inside one period: 2 reach + 2 <= H.
      reach = std::min(reach, p.H / 2 - 1);
      m_lagged = std::make_unique<Tricubic>(inverse_transform_to_lattice(s.m_prev2, 4 * p.H));
      if (!s.particles_prev.positions.empty())
        prev_cells = std::make_unique<CellList>(s.particles_prev.positions, p.L, std::max(r_cut, p.L / 64.0));
    }
  }

  Vec3 hybrid_grad_m(const Vec3& x) const {
    const auto& p = s.params;
    const double h = lattice_h;
    // Half-cell shift keeps every kernel evaluation at least half a cell away
    // from the singularity: x + xbar is the center of the cell containing x.
    Vec3 center;
    double base[3];
    for (int d = 0; d < 3; ++d) {
      base[d] = std::floor(x[d] / h);
      center[d] = (base[d] + 0.5) * h;
    }
    const Vec3 xbar = center - x;

    Vec3 acc{0.0, 0.0, 0.0};
    const double cell_vol = h * h * h;
    for (int oz = -reach; oz <= reach + 1; ++oz) {
      const double dz = (0.5 - oz) * h;
      for (int oy = -reach; oy <= reach + 1; ++oy) {
        const double dy = (0.5 - oy) * h;
        for (int ox = -reach; ox <= reach + 1; ++ox) {
          const Vec3 d{(0.5 - ox) * h, dy, dz};
          const double r2 = dot(d, d);
          if (r2 > r_cut * r_cut) continue;
          // Node x_jml = (base + o) h; the lagged field is sampled at
          // x_jml - xbar, the kernel at x + xbar - x_jml = d.
          const Vec3 node{(base[0] + ox) * h, (base[1] + oy) * h, (base[2] + oz) * h};
          const double mval = m_lagged->value(wrap_point(node - xbar, p.L));
          const Vec3 grad_k = kernel_gradient_reg(s.kernel, d, r_reg);
          acc += (mval * cell_vol) * grad_k;
        }
      }
    }
    Vec3 result = (-1.0 / (p.d_m * p.dt)) * acc;

    if (prev_cells) {
      Vec3 pair_sum{0.0, 0.0, 0.0};
      prev_cells->for_neighbors(x, r_cut, [&](std::size_t, const Vec3& d) {
        pair_sum += kernel_gradient_reg(s.kernel, d, r_reg);
      });
      const double w = p.alpha / p.d_m * s.particles_prev.total_mass /
                       static_cast<double>(s.particles_prev.count());
      result += (-w) * pair_sum;
    }
    return result;
  }
};

DriftContext::DriftContext(const SipfState& state, GradMMode mode)
    : impl_(std::make_unique<Impl>(state, mode)) {}
DriftContext::~DriftContext() = default;

bool DriftContext::has_history() const { return impl_->hybrid_ready; }

Vec3 DriftContext::grad_m(const Vec3& x) const {
  if (impl_->mode == GradMMode::spectral) return impl_->s.m_prev.gradient_at(x);
  if (!impl_->hybrid_ready)
    throw std::logic_error("grad_m: missing history (needs n >= 2 with m_{n-2} retained)");
  return impl_->hybrid_grad_m(x);
}

Vec3 DriftContext::drift_grad_f(const Vec3& x) const {
  const SipfState& s = impl_->s;
  if (s.n <= 1 || (impl_->mode == GradMMode::paper && !impl_->hybrid_ready)) {
    const SpectralField& f0 = s.n == 0 ? s.f : s.f_prev;
    return f0.gradient_at(x);
  }
  double f_val, m_val;
  Vec3 grad_f;
  fused_field_eval(s.f_prev, s.m_prev, x, &f_val, &grad_f, &m_val);
  const double eta_dt = s.params.eta * s.params.dt;
  const Vec3 gm = grad_m(x);
  return (1.0 - eta_dt * m_val) * grad_f - (eta_dt * f_val) * gm;
}

SipfState make_initial_state(const SimulationParams& params, const InitialCondition& ic) {
  params.validate();
  if (params.dim != 3) throw std::invalid_argument("SIPF solver is three-dimensional (params.dim must be 3)");
  ic.validate(params.L);
  SipfState s;
  s.params = params;
  s.kernel = ScreenedKernel::make(params.d_m, params.beta, params.dt);
  s.particles = sample_initial_particles(ic, params.epsilon, params.L, params.P, params.seed);
  s.m = initial_field_coefficients(ic, params.epsilon, params.H, params.L, InitialField::m0);
  s.f = initial_field_coefficients(ic, params.epsilon, params.H, params.L, InitialField::f0);
  return s;
}

SpectralField update_mde(const SpectralField& m_prev, const ParticleEnsemble& ens,
                         const SimulationParams& params) {
  const ScreenedKernel kern = ScreenedKernel::make(params.d_m, params.beta, params.dt);
  SpectralField rho_hat = particle_fourier_coefficients(ens, m_prev.modes(), m_prev.box());
  const double c_prev = 1.0 / (params.d_m * params.dt);
  const double c_rho = params.alpha / params.d_m;
  const int h = m_prev.modes();
  const double w2 = 4.0 * std::numbers::pi * std::numbers::pi / (m_prev.box() * m_prev.box());
  SpectralField out(h, m_prev.box());
  for (int iz = 0; iz < h; ++iz)
    for (int iy = 0; iy < h; ++iy)
      for (int ix = 0; ix < h; ++ix) {
        const double j = out.freq(ix), m = out.freq(iy), l = out.freq(iz);
        const double denom = w2 * (j * j + m * m + l * l) + kern.zeta2;
        const std::size_t i = out.flat(ix, iy, iz);
        out.data()[i] = (c_prev * m_prev.data()[i] + c_rho * rho_hat.data()[i]) / denom;
      }
  return out;
}

SpectralField update_ecm(const SpectralField& f_prev, const SpectralField& m_prev,
                         const SimulationParams& params) {
  SpectralField conv = multiply_dealiased(m_prev, f_prev);
  SpectralField out = f_prev;
  const double c = params.eta * params.dt;
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] -= c * conv.data()[i];
  return out;
}

Vec3 grad_m_at_particle(const SipfState& state, long p, GradMMode mode) {
  if (mode == GradMMode::paper && (state.n < 2 || state.m_prev2.empty()))
    throw std::logic_error("grad_m_at_particle: missing history (needs n >= 2)");
  DriftContext ctx(state, mode);
  return ctx.grad_m(state.particles.positions.at(static_cast<std::size_t>(p)));
}

Vec3 grad_f_at_particle(const SipfState& state, long p, GradMMode mode) {
  DriftContext ctx(state, mode);
  return ctx.drift_grad_f(state.particles.positions.at(static_cast<std::size_t>(p)));
}

ParticleEnsemble update_particles(const SipfState& state, GradMMode mode) {
  const auto& p = state.params;
  const DriftContext ctx(state, mode);
  const double noise_scale = std::sqrt(2.0 * p.d_n * p.dt);
  const long count = state.particles.count();
  ParticleEnsemble out;
  out.total_mass = state.particles.total_mass;
  out.positions.resize(static_cast<std::size_t>(count));

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long q = 0; q < count; ++q) {
    const Vec3& x = state.particles.positions[static_cast<std::size_t>(q)];
    Vec3 drift{0.0, 0.0, 0.0};
    if (p.gamma != 0.0) drift = ctx.drift_grad_f(x);
    Vec3 next = x + (p.gamma * p.dt) * drift;
    if (noise_scale != 0.0) {
      for (int d = 0; d < 3; ++d)
        next[d] += noise_scale * rng::normal(p.seed, rng::kStepNoise + static_cast<uint64_t>(d),
                                             static_cast<uint64_t>(state.n), static_cast<uint64_t>(q));
    }
    out.positions[static_cast<std::size_t>(q)] = wrap_point(next, p.L);
  }
  return out;
}

SipfState step(SipfState state, GradMMode mode) {
  ParticleEnsemble next = update_particles(state, mode);
  SpectralField f_next = update_ecm(state.f, state.m, state.params);
  SpectralField m_next = update_mde(state.m, next, state.params);

  SipfState out;
  out.n = state.n + 1;
  out.params = state.params;
  out.kernel = state.kernel;
  out.particles = std::move(next);
  out.particles_prev = std::move(state.particles);
  out.m = std::move(m_next);
  out.m_prev = std::move(state.m);
  out.m_prev2 = std::move(state.m_prev);
  out.f = std::move(f_next);
  out.f_prev = std::move(state.f);
  return out;
}

std::vector<SipfState> run(const SimulationParams& params, const InitialCondition& ic,
                           const std::vector<double>& snapshot_times, GradMMode mode) {
  const long n_steps = params.steps();
  std::vector<bool> wanted(static_cast<std::size_t>(n_steps) + 1, false);
  for (double t : snapshot_times) {
    const double steps = t / params.dt;
    const long idx = std::lround(steps);
    if (idx < 0 || idx > n_steps || std::fabs(steps - static_cast<double>(idx)) > 1e-9)
      throw std::invalid_argument("run: snapshot time " + std::to_string(t) +
                                  " is not a multiple of dt within [0, T]");
    wanted[static_cast<std::size_t>(idx)] = true;
  }

  std::vector<SipfState> snapshots;
  SipfState state = make_initial_state(params, ic);
  if (wanted[0]) snapshots.push_back(state);
  for (long n = 1; n <= n_steps; ++n) {
    state = step(std::move(state), mode);
    if (wanted[static_cast<std::size_t>(n)]) snapshots.push_back(state);
  }
  return snapshots;
}

}  // namespace sipf
