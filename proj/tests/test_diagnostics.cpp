#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "sipf/diagnostics.hpp"
#include "sipf/init.hpp"
#include "sipf/quadrature.hpp"

using namespace sipf;

namespace {
constexpr double kPi = std::numbers::pi;

LatticeField lattice_of(int n, double box, double (*fn)(const Vec3&)) {
  LatticeField g;
  g.n = n;
  g.box = box;
  g.values.resize(static_cast<std::size_t>(n) * n * n);
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix)
        g.values[g.flat(ix, iy, iz)] = fn({g.node_coord(ix), g.node_coord(iy), g.node_coord(iz)});
  return g;
}
}  // namespace

TEST_CASE("bin_lattice_radially: constant field fills every nonempty bin") {
  const auto g = lattice_of(32, 2.0, [](const Vec3&) { return 3.25; });
  const auto p = bin_lattice_radially(g, {0, 0, 0}, 0.02, 1.0);
  for (int i = 0; i < p.bins(); ++i)
    if (p.counts[i] > 0) CHECK(p.values[i] == doctest::Approx(3.25).epsilon(1e-14));
}

TEST_CASE("bin_lattice_radially: radius field lands near bin midpoints") {
  const auto g = lattice_of(64, 2.0, [](const Vec3& x) { return norm(x); });
  const auto p = bin_lattice_radially(g, {0, 0, 0}, 0.02, 1.0);
  for (int i = 2; i < p.bins(); ++i) {
    if (p.counts[i] == 0) continue;
    CHECK(std::fabs(p.values[i] - p.midpoint(i)) <= 0.5 * p.bin_width());
  }
}

TEST_CASE("bin_lattice_radially: Gaussian bin means match the quadrature oracle within 2%") {
  static constexpr double eps = 0.09;
  const auto g = lattice_of(64, 2.0, [](const Vec3& x) { return std::exp(-dot(x, x) / eps); });
  const auto p = bin_lattice_radially(g, {0, 0, 0}, 0.02, 0.9);
  for (int i = 0; i < p.bins(); ++i) {
    if (p.counts[i] < 30) continue;  // inner bins hold too few lattice samples to average
    const double a = p.edges[i], b = p.edges[i + 1];
    const double num = integrate([&](double r) { return std::exp(-r * r / eps) * r * r; }, a, b);
    const double den = (b * b * b - a * a * a) / 3.0;
    CHECK(p.values[i] == doctest::Approx(num / den).epsilon(0.02));
  }
}

TEST_CASE("bin_particles_radially: one occupied bin carries all the mass") {
  ParticleEnsemble e;
  e.total_mass = 0.5;
  e.positions.assign(100, Vec3{0.25, 0.0, 0.0});
  const auto p = bin_particles_radially(e, {0, 0, 0}, 0.1, 1.0);
  for (int i = 0; i < p.bins(); ++i) {
    if (p.midpoint(i) == doctest::Approx(0.25)) {
      const double shell = 4.0 * kPi * 0.25 * 0.25 * 0.1;
      CHECK(p.values[i] == doctest::Approx(0.5 / shell).epsilon(1e-12));
    } else {
      CHECK(p.values[i] == 0.0);
    }
  }
}

TEST_CASE("bin_particles_radially: uniform ball is flat, sampled Gaussian matches the density") {
  std::mt19937 gen(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ParticleEnsemble ball;
  ball.total_mass = 1.0;
  while (ball.positions.size() < 60000) {
    const Vec3 x{u(gen), u(gen), u(gen)};
    if (norm(x) < 0.8) ball.positions.push_back(x);
  }
  const double density = 1.0 / (4.0 / 3.0 * kPi * 0.8 * 0.8 * 0.8);
  const auto flat = bin_particles_radially(ball, {0, 0, 0}, 0.05, 0.8);
  for (int i = 1; i < flat.bins(); ++i) {
    if (flat.counts[i] < 200) continue;
    const double sigma = density / std::sqrt(static_cast<double>(flat.counts[i]));
    CHECK(std::fabs(flat.values[i] - density) <= 4.0 * sigma + 0.02 * density);
  }

  const InitialCondition ic;
  const double eps = 0.0025;
  const auto ens = sample_initial_particles(ic, eps, 2.0, 100000, 99);
  const auto prof = bin_particles_radially(ens, {0, 0, 0}, 0.005, 0.12);
  const double m0 = compute_total_mass(ic, eps);
  for (int i = 0; i < prof.bins(); ++i) {
    if (prof.counts[i] < 50) continue;
    const double a = prof.edges[i], b = prof.edges[i + 1];
    // Shell-averaged analytic density over the bin.
    const double mass_in_bin =
        4.0 * kPi * integrate([&](double r) { return std::exp(-r * r / eps) * r * r; }, a, b);
    const double shell = 4.0 * kPi * prof.midpoint(i) * prof.midpoint(i) * prof.bin_width();
    const double expect = mass_in_bin / shell;
    const double count_sigma = std::sqrt(static_cast<double>(prof.counts[i]));
    const double sigma = (m0 / 100000.0) * count_sigma / shell;
    CHECK(std::fabs(prof.values[i] - expect) <= 3.0 * sigma + 0.03 * expect);
  }
}

TEST_CASE("relative_l2_error: identity, doubling, resampling") {
  RadialProfile a;
  a.edges = {0.0, 0.1, 0.2, 0.3};
  a.values = {1.0, 2.0, 3.0};
  a.counts = {1, 1, 1};
  CHECK(relative_l2_error(a, a) == 0.0);
  RadialProfile twice = a;
  for (auto& v : twice.values) v *= 2.0;
  CHECK(relative_l2_error(twice, a) == doctest::Approx(1.0).epsilon(1e-14));

  // Linear profile on a finer layout resamples exactly.
  RadialProfile fine;
  fine.edges.resize(31);
  for (int i = 0; i <= 30; ++i) fine.edges[i] = i * 0.01;
  fine.values.resize(30);
  fine.counts.assign(30, 1);
  for (int i = 0; i < 30; ++i) fine.values[i] = 5.0 * fine.midpoint(i);
  RadialProfile lin = a;
  for (int i = 0; i < 3; ++i) lin.values[i] = 5.0 * lin.midpoint(i);
  CHECK(relative_l2_error(lin, fine) <= 1e-14);

  RadialProfile zero = a;
  zero.values = {0.0, 0.0, 0.0};
  CHECK_THROWS_AS(relative_l2_error(a, zero), std::domain_error);
}

TEST_CASE("convergence_rate: synthetic and published rows") {
  CHECK(convergence_rate(0.04, 0.01, 0.1, 0.05) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(convergence_rate(1.1430, 0.2808, 1.0 / 20, 1.0 / 40) == doctest::Approx(2.02).epsilon(0.005));
  CHECK(convergence_rate(0.02, 0.02, 0.1, 0.05) == 0.0);
}

TEST_CASE("runtime_scaling_ratio: published rows") {
  CHECK(runtime_scaling_ratio(15.54, 132.87, 1.0 / 20, 1.0 / 40) == doctest::Approx(3.09).epsilon(0.005));
  CHECK(runtime_scaling_ratio(10.37, 18.06, 0.1, 0.05) == doctest::Approx(0.80).epsilon(0.01));
  CHECK(runtime_scaling_ratio(5.0, 5.0, 0.1, 0.05) == 0.0);
}

TEST_CASE("integral_m_reference: initial value, conservation, slope, decay") {
  SimulationParams p;
  InitialCondition ic;
  const double m0 = integral_m_reference(0.0, p, ic);
  CHECK(m0 == doctest::Approx(3.3200748299e-4).epsilon(1e-9));

  SimulationParams frozen = p;
  frozen.alpha = 0.0;
  CHECK(integral_m_reference(3.7, frozen, ic) == doctest::Approx(m0).epsilon(1e-14));

  const double mass = compute_total_mass(ic, p.epsilon);
  CHECK(integral_m_reference(2.0, p, ic) - integral_m_reference(1.0, p, ic) ==
        doctest::Approx(p.alpha * mass).epsilon(1e-12));

  SimulationParams decaying = p;
  decaying.beta = 0.7;
  const double h = 1e-6, t = 1.3;
  const double deriv =
      (integral_m_reference(t + h, decaying, ic) - integral_m_reference(t - h, decaying, ic)) / (2.0 * h);
  const double expect = -decaying.beta * integral_m_reference(t, decaying, ic) + decaying.alpha * mass;
  CHECK(deriv == doctest::Approx(expect).epsilon(1e-6));
}

TEST_CASE("integral_lnf_reference: sign, eta = 0 constancy, initial derivative") {
  SimulationParams p;
  InitialCondition ic;
  CHECK(integral_lnf_reference(0.0, p, ic) < 0.0);

  SimulationParams inert = p;
  inert.eta = 0.0;
  CHECK(integral_lnf_reference(5.0, inert, ic) == doctest::Approx(integral_lnf_reference(0.0, inert, ic)));

  const double h = 1e-6;
  const double deriv = (integral_lnf_reference(h, p, ic) - integral_lnf_reference(0.0, p, ic)) / h;
  CHECK(deriv == doctest::Approx(-p.eta * integral_m_reference(0.0, p, ic)).epsilon(1e-4));

  SimulationParams bad = p;
  bad.beta = 0.1;
  CHECK_THROWS_AS(integral_lnf_reference(1.0, bad, ic), std::invalid_argument);
}

TEST_CASE("method-specific integrals") {
  SpectralField m(8, 2.0);
  m.at(0, 0, 0) = 0.25;
  CHECK(integral_m_sipf(m) == doctest::Approx(0.25 * 8.0).epsilon(1e-14));

  SpectralField f(8, 2.0);
  f.at(0, 0, 0) = 2.0;
  CHECK(integral_lnf_sipf(f) == doctest::Approx(std::log(2.0) * 8.0).epsilon(1e-12));
  f.at(0, 0, 0) = -1.0;
  CHECK_THROWS_AS(integral_lnf_sipf(f), std::domain_error);

  RadialGrid g;
  g.n_r = 400;
  g.R = 1.0;
  g.m.assign(400, 0.6);
  g.rho.assign(400, 0.0);
  g.f.assign(400, 1.0);
  CHECK(integral_m_radial(g) ==
        doctest::Approx(0.6 * 4.0 / 3.0 * kPi).epsilon(1.0 / 400.0));

  GridField grid;
  grid.dim = 3;
  grid.n = 11;
  grid.box = 2.0;
  grid.m.assign(grid.cells(), 0.5);
  const double dx = grid.spacing();
  CHECK(integral_m_fdm(grid) == doctest::Approx(0.5 * 11.0 * 11.0 * 11.0 * dx * dx * dx).epsilon(1e-13));
}

TEST_CASE("error_m basics") {
  CHECK(error_m(3.0, 3.0) == 0.0);
  CHECK(error_m(1.02, 1.0) == doctest::Approx(0.02).epsilon(1e-12));
  CHECK_THROWS_AS(error_m(1.0, 0.0), std::domain_error);
}

TEST_CASE("fit_loglog_slope: exact laws and published columns") {
  std::vector<std::pair<double, double>> quad;
  for (double x : {0.1, 0.2, 0.4, 0.8}) quad.emplace_back(x, x * x);
  CHECK(fit_loglog_slope(quad) == doctest::Approx(2.0).epsilon(1e-10));

  std::vector<std::pair<double, double>> expo;
  for (double x : {4.0, 8.0, 16.0, 24.0}) expo.emplace_back(x, std::exp(-0.2 * x));
  CHECK(fit_loglog_slope(expo, FitMode::semilog) == doctest::Approx(-0.2).epsilon(1e-10));

  // Published time-step sweep: errors vs dt.
  const std::vector<std::pair<double, double>> dt_sweep{
      {0.1, 9.12e-2}, {0.05, 4.50e-2}, {0.01, 8.78e-3}, {0.005, 4.36e-3}, {0.001, 8.59e-4}};
  CHECK(fit_loglog_slope(dt_sweep) == doctest::Approx(1.0130).epsilon(2e-4));

  // Published particle sweep; the least-squares slope of these columns.
  const std::vector<std::pair<double, double>> p_sweep{
      {5000, 1.34e-2}, {10000, 8.78e-3}, {20000, 5.89e-3}, {30000, 4.77e-3}, {40000, 4.11e-3}};
  CHECK(fit_loglog_slope(p_sweep) == doctest::Approx(-0.5688).epsilon(2e-3));

  std::vector<std::pair<double, double>> degenerate{{1.0, 0.5}, {1.0, 0.25}};
  CHECK_THROWS_AS(fit_loglog_slope(degenerate), std::invalid_argument);
  std::vector<std::pair<double, double>> negative{{1.0, 0.5}, {2.0, -0.25}};
  CHECK_THROWS_AS(fit_loglog_slope(negative), std::invalid_argument);
}

TEST_CASE("relative_l2_error scales linearly along num -> ref + s (num - ref)") {
  RadialProfile ref;
  ref.edges = {0.0, 0.1, 0.2, 0.3, 0.4};
  ref.values = {1.0, 0.8, 0.5, 0.2};
  ref.counts = {1, 1, 1, 1};
  RadialProfile num = ref;
  num.values = {1.1, 0.7, 0.55, 0.25};
  const double base = relative_l2_error(num, ref);
  RadialProfile half = ref;
  for (int i = 0; i < 4; ++i) half.values[i] = ref.values[i] + 0.5 * (num.values[i] - ref.values[i]);
  CHECK(relative_l2_error(half, ref) == doctest::Approx(0.5 * base).epsilon(1e-12));
}
