#include <doctest.h>

#include <cmath>

#include "sipf/diagnostics.hpp"
#include "sipf/radial_solver.hpp"

using namespace sipf;

namespace {

RadialGrid constant_radial(int n_r, double R, double rho, double f, double m) {
  RadialGrid g;
  g.n_r = n_r;
  g.R = R;
  g.rho.assign(static_cast<std::size_t>(n_r), rho);
  g.f.assign(static_cast<std::size_t>(n_r), f);
  g.m.assign(static_cast<std::size_t>(n_r), m);
  return g;
}

}  // namespace

TEST_CASE("constant state with zero rates is a fixed point") {
  SimulationParams p;
  p.d_n = 0.0;
  p.gamma = 0.0;
  p.eta = 0.0;
  p.alpha = 0.0;
  RadialGrid g = constant_radial(50, 1.0, 0.7, 0.8, 0.1);
  const RadialGrid out = radial_step(g, p, 1e-3);
  for (int i = 0; i < g.n_r; ++i) {
    CHECK(out.rho[i] == doctest::Approx(0.7).epsilon(1e-13));
    CHECK(out.f[i] == doctest::Approx(0.8).epsilon(1e-13));
    CHECK(out.m[i] == doctest::Approx(0.1).epsilon(1e-13));
  }
}

TEST_CASE("constant m decays by the backward-Euler factor") {
  SimulationParams p;
  p.alpha = 0.0;
  p.beta = 5.0;
  RadialGrid g = constant_radial(80, 1.0, 0.0, 1.0, 0.4);
  const double dt = 2e-3;
  const RadialGrid out = radial_step(g, p, dt);
  for (int i = 0; i < g.n_r; ++i) CHECK(out.m[i] == doctest::Approx(0.4 / (1.0 + p.beta * dt)).epsilon(1e-12));
}

TEST_CASE("mass conservation over 4000 steps at the published resolution") {
  SimulationParams p;  // defaults: full coupled dynamics
  InitialCondition ic;
  RadialGrid g = make_initial_radial(p, ic, 301, 1.0);
  const double mass0 = radial_mass(g);
  for (int s = 0; s < 4000; ++s) radial_step_inplace(g, p, 1e-3);
  // Oracle: direct shell summation of the final state.
  double direct = 0.0;
  const double dr = g.dr();
  for (int i = 0; i < g.n_r; ++i) direct += 4.0 * M_PI * g.center(i) * g.center(i) * g.rho[i] * dr;
  CHECK(std::fabs(direct - mass0) / mass0 < 1e-8);
}

TEST_CASE("spatial self-convergence at order two") {
  SimulationParams p;
  p.T = 1.0;
  InitialCondition ic;
  const double dt = 1e-3;
  auto final_m = [&](int n_r) { return radial_run(p, ic, n_r, dt, 1.0, {p.T}).back(); };
  const RadialGrid fine = final_m(1601);
  const RadialProfile ref = profile_from_radial(fine, fine.m);

  auto err = [&](int n_r) {
    const RadialGrid g = final_m(n_r);
    return relative_l2_error(profile_from_radial(g, g.m), ref);
  };
  const double e101 = err(101), e201 = err(201), e401 = err(401);
  const double r1 = convergence_rate(e101, e201, 1.0 / 101, 1.0 / 201);
  const double r2 = convergence_rate(e201, e401, 1.0 / 201, 1.0 / 401);
  CHECK(r1 == doctest::Approx(2.0).epsilon(0.12));
  CHECK(r2 == doctest::Approx(2.0).epsilon(0.12));
}

TEST_CASE("invasion front: the density peak leaves the origin by T = 4") {
  SimulationParams p;
  InitialCondition ic;
  const RadialGrid g = radial_run(p, ic, 301, 1e-3, 1.0, {4.0}).back();
  int peak = 0;
  for (int i = 0; i < g.n_r; ++i)
    if (g.rho[i] > g.rho[peak]) peak = i;
  CHECK(g.center(peak) > 0.05);
}

TEST_CASE("integral of m matches the closed form within 0.5% at T = 4") {
  SimulationParams p;
  InitialCondition ic;
  const RadialGrid g = radial_run(p, ic, 801, 1e-3, 1.0, {4.0}).back();
  const double numeric = integral_m_radial(g);
  const double reference = integral_m_reference(4.0, p, ic);
  CHECK(std::fabs(numeric - reference) / reference < 0.005);
}

TEST_CASE("f never increases and m stays nonnegative") {
  SimulationParams p;
  InitialCondition ic;
  RadialGrid g = make_initial_radial(p, ic, 201, 1.0);
  std::vector<double> f_prev = g.f;
  for (int s = 0; s < 200; ++s) {
    radial_step_inplace(g, p, 1e-3);
    for (int i = 0; i < g.n_r; ++i) {
      CHECK(g.f[i] <= f_prev[i] + 1e-15);
      CHECK(g.m[i] >= -1e-15);
    }
    f_prev = g.f;
  }
}

TEST_CASE("radial reduction rejects off-center blobs") {
  SimulationParams p;
  InitialCondition ic;
  ic.blobs[0].center = {0.1, 0.0, 0.0};
  CHECK_THROWS_AS(make_initial_radial(p, ic, 100, 1.0), std::invalid_argument);
}
