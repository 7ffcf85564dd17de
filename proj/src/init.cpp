#include "sipf/init.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "sipf/quadrature.hpp"
#include "sipf/rng.hpp"

namespace sipf {

namespace {

constexpr int kCdfNodes = 10000;

// Cumulative table of r^2 exp(-r^2/eps) on [0, rt], normalized to [0, 1].
std::vector<double> radial_cdf_table(double epsilon, double rt) {
  std::vector<double> cdf(kCdfNodes + 1, 0.0);
  const double h = rt / kCdfNodes;
  auto f = [&](double r) { return r * r * std::exp(-r * r / epsilon); };
  for (int i = 0; i < kCdfNodes; ++i) {
    const double a = i * h, b = a + h;
    cdf[i + 1] = cdf[i] + h / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
  }
  const double total = cdf.back();
  for (auto& v : cdf) v /= total;
  return cdf;
}

double invert_cdf(const std::vector<double>& cdf, double rt, double u) {
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  std::size_t i = it == cdf.end() ? cdf.size() - 1 : static_cast<std::size_t>(it - cdf.begin());
  if (i == 0) i = 1;
  const double c0 = cdf[i - 1], c1 = cdf[i];
  const double frac = c1 > c0 ? (u - c0) / (c1 - c0) : 0.0;
  return (static_cast<double>(i - 1) + frac) * rt / kCdfNodes;
}

}  // namespace

double compute_total_mass(const InitialCondition& ic, double epsilon) {
  double total_weight = 0.0;
  for (const auto& b : ic.blobs) total_weight += b.weight;
  const double shell = integrate([&](double r) { return r * r * std::exp(-r * r / epsilon); }, 0.0,
                                 ic.truncation_radius, 1e-10);
  return total_weight * 4.0 * std::numbers::pi * shell;
}

ParticleEnsemble sample_initial_particles(const InitialCondition& ic, double epsilon, double box, long P,
                                          uint64_t seed) {
  if (P < 1) throw std::invalid_argument("sample_initial_particles: P must be >= 1");
  ic.validate(box);
  double total_weight = 0.0;
  std::vector<double> cum;
  for (const auto& b : ic.blobs) {
    total_weight += b.weight;
    cum.push_back(total_weight);
  }
  if (!(total_weight > 0.0))
    throw std::invalid_argument("sample_initial_particles: total blob weight must be positive");

  const std::vector<double> cdf = radial_cdf_table(epsilon, ic.truncation_radius);
  ParticleEnsemble ens;
  ens.total_mass = compute_total_mass(ic, epsilon);
  ens.positions.resize(static_cast<std::size_t>(P));

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long p = 0; p < P; ++p) {
    std::size_t b = 0;
    if (ic.blobs.size() > 1) {
      const double u = rng::uniform01(seed, rng::kInitBlob, static_cast<uint64_t>(p), 0) * total_weight;
      b = static_cast<std::size_t>(std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
      if (b >= ic.blobs.size()) b = ic.blobs.size() - 1;
    }
    const double r =
        invert_cdf(cdf, ic.truncation_radius, rng::uniform01(seed, rng::kInitRadius, static_cast<uint64_t>(p), 0));
    const double z = 2.0 * rng::uniform01(seed, rng::kInitDirection, static_cast<uint64_t>(p), 0) - 1.0;
    const double phi =
        2.0 * std::numbers::pi * rng::uniform01(seed, rng::kInitDirection, static_cast<uint64_t>(p), 1);
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    const Vec3 dir{s * std::cos(phi), s * std::sin(phi), z};
    ens.positions[static_cast<std::size_t>(p)] = ic.blobs[b].center + r * dir;
  }
  return ens;
}

SpectralField initial_field_coefficients(const InitialCondition& ic, double epsilon, int modes_per_dim,
                                         double box, InitialField which) {
  SpectralField out(modes_per_dim, box);
  const int h = modes_per_dim;
  const double rt = ic.truncation_radius;

  // Radial transform of the unit blob, cached over the distinct |k|^2 values.
  std::map<long, double> ghat;
  auto blob_hat = [&](long k2) {
    auto it = ghat.find(k2);
    if (it != ghat.end()) return it->second;
    double v;
    if (k2 == 0) {
      v = 4.0 * std::numbers::pi *
          integrate([&](double r) { return r * r * std::exp(-r * r / epsilon); }, 0.0, rt, 1e-12);
    } else {
      const double kappa = 2.0 * std::numbers::pi * std::sqrt(static_cast<double>(k2)) / box;
      v = 4.0 * std::numbers::pi / kappa *
          integrate([&](double r) { return r * std::sin(kappa * r) * std::exp(-r * r / epsilon); }, 0.0, rt,
                    1e-12);
    }
    ghat.emplace(k2, v);
    return v;
  };

  const double sign = which == InitialField::m0 ? 0.5 : -0.5;
  const double inv_vol = 1.0 / (box * box * box);
  for (int iz = 0; iz < h; ++iz)
    for (int iy = 0; iy < h; ++iy)
      for (int ix = 0; ix < h; ++ix) {
        const long j = out.freq(ix), m = out.freq(iy), l = out.freq(iz);
        const double hat = blob_hat(j * j + m * m + l * l);
        std::complex<double> phase_sum{0.0, 0.0};
        for (const auto& b : ic.blobs) {
          const double arg = -2.0 * std::numbers::pi *
                             (j * b.center[0] + m * b.center[1] + l * b.center[2]) / box;
          phase_sum += b.weight * std::polar(1.0, arg);
        }
        out.data()[out.flat(ix, iy, iz)] = sign * inv_vol * hat * phase_sum;
      }
  if (which == InitialField::f0) out.at(0, 0, 0) += 1.0;
  return out;
}

}  // namespace sipf
