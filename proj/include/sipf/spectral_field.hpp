#pragma once

#include <complex>
#include <vector>

#include "sipf/particles.hpp"
#include "sipf/vec.hpp"

namespace sipf {

// Truncated Fourier representation of a real scalar field on the periodic
// cube [-L/2, L/2)^3. Coefficients follow the "average" convention
//   c_k = (1/L^3) \int g(x) exp(-i 2 pi k.x / L) dx,
// so g(x) = sum_k c_k exp(+i 2 pi k.x / L). Storage is an H^3 tensor in
// wrap-around (FFT) order; the retained frequencies per axis are the even-size
// DFT set {-H/2, ..., H/2 - 1}.
class SpectralField {
 public:
  SpectralField() = default;
  SpectralField(int modes_per_dim, double box);

  int modes() const { return h_; }
  double box() const { return box_; }
  bool empty() const { return c_.empty(); }
  std::size_t size() const { return c_.size(); }

  // Signed frequency of a storage index along one axis.
  int freq(int idx) const { return idx < h_ / 2 ? idx : idx - h_; }
  // Storage index of a signed frequency in [-H/2, H/2).
  int idx(int k) const { return k >= 0 ? k : k + h_; }

  std::complex<double>& at(int j, int m, int l) { return c_[flat(idx(j), idx(m), idx(l))]; }
  const std::complex<double>& at(int j, int m, int l) const { return c_[flat(idx(j), idx(m), idx(l))]; }

  std::complex<double>* data() { return c_.data(); }
  const std::complex<double>* data() const { return c_.data(); }
  // x-fastest flat index from storage indices.
  std::size_t flat(int ix, int iy, int iz) const {
    return (static_cast<std::size_t>(iz) * h_ + iy) * h_ + ix;
  }

  // Real part of the truncated series at x (periodic in each coordinate).
  double evaluate_at(const Vec3& x) const;
  // Real part of sum_k c_k (i 2 pi k / L) exp(i 2 pi k.x / L).
  Vec3 gradient_at(const Vec3& x) const;

  // Max deviation from c_{-k} = conj(c_k) with -k taken modulo H.
  double hermitian_error() const;
  // Project onto the Hermitian subspace (test helper for random fields).
  void make_hermitian();

 private:
  int h_ = 0;
  double box_ = 0.0;
  std::vector<std::complex<double>> c_;
};

// Screened-Laplacian kernel constants for the backward-Euler MDE solve:
// (Delta - zeta^2) m_n = -rhs with zeta^2 = beta/d_m + 1/(d_m dt).
struct ScreenedKernel {
  double zeta2 = 0.0;
  double zeta = 0.0;

  static ScreenedKernel make(double d_m, double beta, double dt);
};

// Free-space Green's function -exp(-zeta r)/(4 pi r); throws on |x| = 0.
double kernel_real(const ScreenedKernel& k, const Vec3& x);
// Its exact gradient exp(-zeta r)(1 + zeta r) x / (4 pi r^3); throws on |x| = 0.
Vec3 kernel_gradient_real(const ScreenedKernel& k, const Vec3& x);
// Regularized variants used in quadrature/pair sums: the radius is clamped to
// r_reg from below; the gradient of an exactly zero displacement is zero
// (self-pairs carry no force).
double kernel_real_reg(const ScreenedKernel& k, double r, double r_reg);
Vec3 kernel_gradient_reg(const ScreenedKernel& k, const Vec3& x, double r_reg);

// Coefficient-wise solve of (-Delta + zeta^2) u = rhs in Fourier space:
// c_k -> c_k / (4 pi^2 |k|^2 / L^2 + zeta^2).
SpectralField screened_inverse(const SpectralField& rhs, const ScreenedKernel& k);

// c_k -> c_k exp(-i 2 pi k.shift / L); evaluating the result at x equals
// evaluating the original at x - shift.
SpectralField shifted_coefficients(const SpectralField& f, const Vec3& shift);

// Exact Fourier coefficients of the empirical measure:
// c_k = M0 / (P L^3) sum_p exp(-i 2 pi k.X_p / L). Direct O(P H^3) summation
// with a fixed-chunk reduction, so the result is independent of threading.
SpectralField particle_fourier_coefficients(const ParticleEnsemble& ens, int modes_per_dim, double box);

// Real field values on the uniform n^3 lattice x_s = s L/n (wrap-around node
// order, x-fastest storage).
struct LatticeField {
  int n = 0;
  double box = 0.0;
  std::vector<double> values;

  double node_coord(int i) const { return (i < n / 2 ? i : i - n) * (box / n); }
  std::size_t flat(int ix, int iy, int iz) const {
    return (static_cast<std::size_t>(iz) * n + iy) * n + ix;
  }
  double spacing() const { return box / n; }
};

// Fast inverse transform to the n^3 lattice (n >= H, zero-padded above H).
// With n = H this is the standard quadrature lattice of the method.
LatticeField inverse_transform_to_lattice(const SpectralField& f, int n = 0);

// Forward lattice DFT truncated to modes_per_dim (inverse of the above for
// fields supported on the retained mode set).
SpectralField forward_from_lattice(const LatticeField& g, int modes_per_dim);

// Pointwise product of two fields, exact on the retained modes (computed on a
// zero-padded 2H lattice, so no aliasing enters the truncated result).
SpectralField multiply_dealiased(const SpectralField& a, const SpectralField& b);

}  // namespace sipf
