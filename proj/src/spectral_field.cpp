#include "sipf/spectral_field.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sipf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Per-axis phase table exp(sign * i 2 pi k(idx) x / L) in storage order.
void axis_phases(int h, double box, double x, double sign, std::complex<double>* ph) {
  for (int i = 0; i < h; ++i) {
    const int k = i < h / 2 ? i : i - h;
    ph[i] = std::polar(1.0, sign * kTwoPi * k * x / box);
  }
}

// FFTW plans are cached by (n, sign); planning is serialized, execution uses
// the new-array interface on fftw_malloc'd buffers.
class PlanCache {
 public:
  static fftw_plan get(int n, int sign) {
    static PlanCache cache;
    std::lock_guard<std::mutex> lock(cache.mu_);
    auto key = std::make_pair(n, sign);
    auto it = cache.plans_.find(key);
    if (it != cache.plans_.end()) return it->second;
    std::size_t total = static_cast<std::size_t>(n) * n * n;
    fftw_complex* buf = fftw_alloc_complex(total);
    fftw_plan p = fftw_plan_dft_3d(n, n, n, buf, buf, sign, FFTW_ESTIMATE);
    fftw_free(buf);
    cache.plans_.emplace(key, p);
    return p;
  }

 private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [k, p] : plans_) fftw_destroy_plan(p);
  }
  std::mutex mu_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n) : data(fftw_alloc_complex(n)) {}
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

}  // namespace

SpectralField::SpectralField(int modes_per_dim, double box) : h_(modes_per_dim), box_(box) {
  if (modes_per_dim < 2 || modes_per_dim % 2 != 0)
    throw std::invalid_argument("SpectralField: modes_per_dim must be even and >= 2");
  if (!(box > 0.0)) throw std::invalid_argument("SpectralField: box must be > 0");
  c_.assign(static_cast<std::size_t>(h_) * h_ * h_, {0.0, 0.0});
}

double SpectralField::evaluate_at(const Vec3& x) const {
  std::vector<std::complex<double>> px(h_), py(h_), pz(h_);
  axis_phases(h_, box_, x[0], +1.0, px.data());
  axis_phases(h_, box_, x[1], +1.0, py.data());
  axis_phases(h_, box_, x[2], +1.0, pz.data());
  std::complex<double> acc{0.0, 0.0};
  for (int iz = 0; iz < h_; ++iz) {
    for (int iy = 0; iy < h_; ++iy) {
      const std::complex<double>* row = c_.data() + flat(0, iy, iz);
      std::complex<double> s{0.0, 0.0};
      for (int ix = 0; ix < h_; ++ix) s += row[ix] * px[ix];
      acc += s * (py[iy] * pz[iz]);
    }
  }
  return acc.real();
}

Vec3 SpectralField::gradient_at(const Vec3& x) const {
  std::vector<std::complex<double>> px(h_), py(h_), pz(h_), pxg(h_);
  axis_phases(h_, box_, x[0], +1.0, px.data());
  axis_phases(h_, box_, x[1], +1.0, py.data());
  axis_phases(h_, box_, x[2], +1.0, pz.data());
  const std::complex<double> iw{0.0, kTwoPi / box_};
  for (int i = 0; i < h_; ++i) pxg[i] = px[i] * (iw * static_cast<double>(freq(i)));
  std::complex<double> gx{0, 0}, gy{0, 0}, gz{0, 0};
  for (int iz = 0; iz < h_; ++iz) {
    const std::complex<double> wz = iw * static_cast<double>(freq(iz));
    for (int iy = 0; iy < h_; ++iy) {
      const std::complex<double>* row = c_.data() + flat(0, iy, iz);
      std::complex<double> s0{0, 0}, s1{0, 0};
      for (int ix = 0; ix < h_; ++ix) {
        s0 += row[ix] * px[ix];
        s1 += row[ix] * pxg[ix];
      }
      const std::complex<double> w = py[iy] * pz[iz];
      gx += s1 * w;
      gy += s0 * w * (iw * static_cast<double>(freq(iy)));
      gz += s0 * w * wz;
    }
  }
  return {gx.real(), gy.real(), gz.real()};
}

double SpectralField::hermitian_error() const {
  double worst = 0.0;
  for (int iz = 0; iz < h_; ++iz)
    for (int iy = 0; iy < h_; ++iy)
      for (int ix = 0; ix < h_; ++ix) {
        const std::complex<double> a = c_[flat(ix, iy, iz)];
        const std::complex<double> b = c_[flat((h_ - ix) % h_, (h_ - iy) % h_, (h_ - iz) % h_)];
        worst = std::max(worst, std::abs(b - std::conj(a)));
      }
  return worst;
}

void SpectralField::make_hermitian() {
  for (int iz = 0; iz < h_; ++iz)
    for (int iy = 0; iy < h_; ++iy)
      for (int ix = 0; ix < h_; ++ix) {
        const std::size_t a = flat(ix, iy, iz);
        const std::size_t b = flat((h_ - ix) % h_, (h_ - iy) % h_, (h_ - iz) % h_);
        if (b < a) continue;
        const std::complex<double> avg = 0.5 * (c_[a] + std::conj(c_[b]));
        c_[a] = avg;
        c_[b] = std::conj(avg);
      }
}

ScreenedKernel ScreenedKernel::make(double d_m, double beta, double dt) {
  if (!(d_m > 0.0) || !(dt > 0.0) || beta < 0.0)
    throw std::invalid_argument("ScreenedKernel: need d_m > 0, dt > 0, beta >= 0");
  ScreenedKernel k;
  k.zeta2 = beta / d_m + 1.0 / (d_m * dt);
  k.zeta = std::sqrt(k.zeta2);
  return k;
}

double kernel_real(const ScreenedKernel& k, const Vec3& x) {
  const double r = norm(x);
  if (r <= 0.0) throw std::domain_error("kernel_real: singular at x = 0");
  return -std::exp(-k.zeta * r) / (4.0 * std::numbers::pi * r);
}

Vec3 kernel_gradient_real(const ScreenedKernel& k, const Vec3& x) {
  const double r = norm(x);
  if (r <= 0.0) throw std::domain_error("kernel_gradient_real: singular at x = 0");
  const double s = std::exp(-k.zeta * r) * (1.0 + k.zeta * r) / (4.0 * std::numbers::pi * r * r * r);
  return s * x;
}

double kernel_real_reg(const ScreenedKernel& k, double r, double r_reg) {
  const double re = std::max(r, r_reg);
  if (re <= 0.0) throw std::domain_error("kernel_real_reg: zero radius with no regularization");
  return -std::exp(-k.zeta * re) / (4.0 * std::numbers::pi * re);
}

Vec3 kernel_gradient_reg(const ScreenedKernel& k, const Vec3& x, double r_reg) {
  const double r = norm(x);
  if (r == 0.0) return {0.0, 0.0, 0.0};
  const double re = std::max(r, r_reg);
  // Direction from x, magnitude from the clamped radius.
  const double s = std::exp(-k.zeta * re) * (1.0 + k.zeta * re) / (4.0 * std::numbers::pi * re * re) / r;
  return s * x;
}

SpectralField screened_inverse(const SpectralField& rhs, const ScreenedKernel& k) {
  SpectralField out(rhs.modes(), rhs.box());
  const int h = rhs.modes();
  const double w2 = 4.0 * std::numbers::pi * std::numbers::pi / (rhs.box() * rhs.box());
  for (int iz = 0; iz < h; ++iz)
    for (int iy = 0; iy < h; ++iy)
      for (int ix = 0; ix < h; ++ix) {
        const double j = rhs.freq(ix), m = rhs.freq(iy), l = rhs.freq(iz);
        const double denom = w2 * (j * j + m * m + l * l) + k.zeta2;
        out.data()[out.flat(ix, iy, iz)] = rhs.data()[rhs.flat(ix, iy, iz)] / denom;
      }
  return out;
}

SpectralField shifted_coefficients(const SpectralField& f, const Vec3& shift) {
  SpectralField out(f.modes(), f.box());
  const int h = f.modes();
  std::vector<std::complex<double>> px(h), py(h), pz(h);
  axis_phases(h, f.box(), shift[0], -1.0, px.data());
  axis_phases(h, f.box(), shift[1], -1.0, py.data());
  axis_phases(h, f.box(), shift[2], -1.0, pz.data());
  for (int iz = 0; iz < h; ++iz)
    for (int iy = 0; iy < h; ++iy) {
      const std::complex<double> w = py[iy] * pz[iz];
      const std::complex<double>* in = f.data() + f.flat(0, iy, iz);
      std::complex<double>* out_row = out.data() + out.flat(0, iy, iz);
      for (int ix = 0; ix < h; ++ix) out_row[ix] = in[ix] * (px[ix] * w);
    }
  return out;
}

SpectralField particle_fourier_coefficients(const ParticleEnsemble& ens, int modes_per_dim, double box) {
  const int h = modes_per_dim;
  const long p_count = ens.count();
  const double scale = ens.total_mass / (static_cast<double>(p_count) * box * box * box);
  SpectralField out(h, box);

  // Fixed chunking makes the reduction order independent of the thread count.
  const int n_chunks = 64;
  const long chunk_size = (p_count + n_chunks - 1) / n_chunks;
  std::vector<std::vector<std::complex<double>>> partial(
      n_chunks, std::vector<std::complex<double>>(out.size(), {0.0, 0.0}));

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int c = 0; c < n_chunks; ++c) {
    const long begin = c * chunk_size;
    const long end = std::min(p_count, begin + chunk_size);
    std::vector<std::complex<double>> px(h), py(h), pz(h);
    auto& acc = partial[c];
    for (long p = begin; p < end; ++p) {
      const Vec3& x = ens.positions[static_cast<std::size_t>(p)];
      axis_phases(h, box, x[0], -1.0, px.data());
      axis_phases(h, box, x[1], -1.0, py.data());
      axis_phases(h, box, x[2], -1.0, pz.data());
      for (int iz = 0; iz < h; ++iz)
        for (int iy = 0; iy < h; ++iy) {
          const std::complex<double> w = py[iy] * pz[iz];
          std::complex<double>* row = acc.data() + out.flat(0, iy, iz);
          for (int ix = 0; ix < h; ++ix) row[ix] += w * px[ix];
        }
    }
  }
  for (int c = 0; c < n_chunks; ++c)
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += partial[c][i];
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] *= scale;
  return out;
}

LatticeField inverse_transform_to_lattice(const SpectralField& f, int n) {
  const int h = f.modes();
  if (n == 0) n = h;
  if (n < h) throw std::invalid_argument("inverse_transform_to_lattice: lattice must have n >= H");
  const std::size_t total = static_cast<std::size_t>(n) * n * n;
  FftwBuffer in(total), out_buf(total);
  for (std::size_t i = 0; i < total; ++i) in.data[i][0] = in.data[i][1] = 0.0;
  // Scatter coefficients into the padded array at wrapped positions.
  for (int iz = 0; iz < h; ++iz)
    for (int iy = 0; iy < h; ++iy)
      for (int ix = 0; ix < h; ++ix) {
        const int kx = f.freq(ix), ky = f.freq(iy), kz = f.freq(iz);
        const std::size_t dst =
            (static_cast<std::size_t>((kz + n) % n) * n + (ky + n) % n) * n + (kx + n) % n;
        const std::complex<double> v = f.data()[f.flat(ix, iy, iz)];
        in.data[dst][0] = v.real();
        in.data[dst][1] = v.imag();
      }
  fftw_plan plan = PlanCache::get(n, FFTW_BACKWARD);
  fftw_execute_dft(plan, in.data, out_buf.data);
  LatticeField g;
  g.n = n;
  g.box = f.box();
  g.values.resize(total);
  for (std::size_t i = 0; i < total; ++i) g.values[i] = out_buf.data[i][0];
  return g;
}

SpectralField forward_from_lattice(const LatticeField& g, int modes_per_dim) {
  const int n = g.n;
  if (modes_per_dim > n) throw std::invalid_argument("forward_from_lattice: H must be <= lattice size");
  const std::size_t total = static_cast<std::size_t>(n) * n * n;
  FftwBuffer in(total), out_buf(total);
  for (std::size_t i = 0; i < total; ++i) {
    in.data[i][0] = g.values[i];
    in.data[i][1] = 0.0;
  }
  fftw_plan plan = PlanCache::get(n, FFTW_FORWARD);
  fftw_execute_dft(plan, in.data, out_buf.data);
  SpectralField f(modes_per_dim, g.box);
  const double inv = 1.0 / static_cast<double>(total);
  const int h = modes_per_dim;
  for (int iz = 0; iz < h; ++iz)
    for (int iy = 0; iy < h; ++iy)
      for (int ix = 0; ix < h; ++ix) {
        const int kx = f.freq(ix), ky = f.freq(iy), kz = f.freq(iz);
        const std::size_t src =
            (static_cast<std::size_t>((kz + n) % n) * n + (ky + n) % n) * n + (kx + n) % n;
        f.data()[f.flat(ix, iy, iz)] =
            std::complex<double>(out_buf.data[src][0], out_buf.data[src][1]) * inv;
      }
  return f;
}

SpectralField multiply_dealiased(const SpectralField& a, const SpectralField& b) {
  if (a.modes() != b.modes() || a.box() != b.box())
    throw std::invalid_argument("multiply_dealiased: fields must share (H, L)");
  const int n = 2 * a.modes();
  LatticeField ga = inverse_transform_to_lattice(a, n);
  LatticeField gb = inverse_transform_to_lattice(b, n);
  for (std::size_t i = 0; i < ga.values.size(); ++i) ga.values[i] *= gb.values[i];
  return forward_from_lattice(ga, a.modes());
}

}  // namespace sipf
