#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sipf/params.hpp"
#include "sipf/sipf_solver.hpp"

namespace sipf {

// One batch job: a single solver run, a reference comparison, a sweep along
// one axis, or an integral-identity series.
struct ExperimentConfig {
  enum class Mode { sipf, fdm, radial, compare, sweep, identity };

  Mode mode = Mode::sipf;
  SimulationParams params;
  InitialCondition ic;
  std::string out_dir = "out";
  std::vector<double> snapshot_times;  // empty means {T}
  GradMMode grad_m = GradMMode::paper;
  int threads = 0;  // 0 keeps the runtime default

  // Radial binning used for every cross-solver comparison.
  int bin_count = 50;
  double r_max = 1.0;

  // Grid solver resolution.
  int fdm_n = 101;

  // Radial solver resolution for single runs.
  int radial_n_r = 301;
  double radial_dt = 1e-3;
  double radial_R = 1.0;

  // Fine-mesh reference used by compare/sweep (content-address cached).
  int ref_n_r = 801;
  double ref_dt = 1e-3;

  // compare / identity: which solvers to evaluate against the reference.
  std::vector<std::string> solvers{"sipf"};

  // sweep
  std::string sweep_axis;  // dt | P | H | grid
  std::vector<double> sweep_values;
  std::vector<uint64_t> sweep_seeds;  // errors averaged across seeds

  void validate() const;
  // Canonical JSON of the effective configuration (sorted keys, all fields).
  std::string canonical_json() const;
};

// Parses and validates a JSON experiment configuration. Unknown keys are
// rejected; violations name the offending invariant.
ExperimentConfig parse_config(const std::string& text);

// Executes the configured runs and writes every artifact plus a manifest into
// cfg.out_dir. Returns 0 on success; on failure writes error.json and returns
// nonzero. All non-timing outputs are deterministic given the seed.
int run_experiment(const ExperimentConfig& cfg);

}  // namespace sipf
