#pragma once

#include <memory>
#include <vector>

#include "sipf/init.hpp"
#include "sipf/params.hpp"
#include "sipf/particles.hpp"
#include "sipf/spectral_field.hpp"

namespace sipf {

// How the drift obtains grad m at particle positions. "paper" is the hybrid
// kernel-quadrature + pair-sum evaluation (the method's default); "spectral"
// substitutes the direct spectral gradient of the lagged MDE field.
enum class GradMMode { paper, spectral };

// Rolling state of the particle-field recursion after n steps. The drift for
// the next positions needs one extra level of history than the fields being
// evolved: f_{n-1} and m_{n-2} stay retained alongside the current levels.
struct SipfState {
  long n = 0;
  ParticleEnsemble particles;       // X_n
  ParticleEnsemble particles_prev;  // X_{n-1}; empty until n >= 1
  SpectralField m;                  // MDE coefficients at t_n
  SpectralField m_prev;             // t_{n-1}; empty until n >= 1
  SpectralField m_prev2;            // t_{n-2}; empty until n >= 2
  SpectralField f;                  // ECM coefficients at t_n
  SpectralField f_prev;             // t_{n-1}; empty until n >= 1
  ScreenedKernel kernel;
  SimulationParams params;

  double time() const { return static_cast<double>(n) * params.dt; }
};

// Samples particles from rho0 and expands m0, f0 in the truncated basis.
SipfState make_initial_state(const SimulationParams& params, const InitialCondition& ic);

// Backward-Euler MDE update, solved mode by mode:
// a_k <- (a_k/(d_m dt) + (alpha/d_m) rho_k) / (4 pi^2 |k|^2/L^2 + zeta^2).
SpectralField update_mde(const SpectralField& m_prev, const ParticleEnsemble& ens,
                         const SimulationParams& params);

// Explicit-Euler ECM update b <- b - eta dt (a (*) b) with the mode
// convolution computed exactly on the retained set.
SpectralField update_ecm(const SpectralField& f_prev, const SpectralField& m_prev,
                         const SimulationParams& params);

// Per-step shared context for drift evaluations: fine-lattice interpolant of
// m_{n-2}, cell list over X_{n-1}, kernel cutoffs. Read-only once built, so
// the per-particle loop can share it across threads.
class DriftContext {
 public:
  DriftContext(const SipfState& state, GradMMode mode);
  ~DriftContext();
  DriftContext(const DriftContext&) = delete;
  DriftContext& operator=(const DriftContext&) = delete;

  // Estimate of grad m(x, t_{n-1}) from the lagged field and previous
  // particles (or the spectral gradient in spectral mode).
  Vec3 grad_m(const Vec3& x) const;
  // Drift gradient: grad f advanced one level from (f_{n-1}, m_{n-1}) with
  // grad_m above; falls back to the pure spectral gradient of f0 while the
  // history is shorter than the scheme needs (n <= 1).
  Vec3 drift_grad_f(const Vec3& x) const;

  bool has_history() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Convenience single-particle accessors (tests and diagnostics; they build a
// fresh context per call). grad_m_at_particle requires n >= 2.
Vec3 grad_m_at_particle(const SipfState& state, long p, GradMMode mode = GradMMode::paper);
Vec3 grad_f_at_particle(const SipfState& state, long p, GradMMode mode = GradMMode::paper);

// Euler-Maruyama position update with per-particle Gaussian streams keyed by
// (seed, n, p); positions wrap into the periodic box.
ParticleEnsemble update_particles(const SipfState& state, GradMMode mode = GradMMode::paper);

// One full recursion step: particles, then ECM, then MDE from the new
// positions; histories rotate by one level.
SipfState step(SipfState state, GradMMode mode = GradMMode::paper);

// Runs T/dt steps and returns deep-copied snapshots at the requested times,
// which must be multiples of dt inside [0, T].
std::vector<SipfState> run(const SimulationParams& params, const InitialCondition& ic,
                           const std::vector<double>& snapshot_times, GradMMode mode = GradMMode::paper);

}  // namespace sipf
