#include "sipf/experiment.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "sipf/diagnostics.hpp"
#include "sipf/fdm_solver.hpp"
#include "sipf/io.hpp"
#include "sipf/radial_solver.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sipf {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void check_keys(const json& j, const std::string& where, const std::set<std::string>& known) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key()))
      throw std::invalid_argument("config: unknown key '" + it.key() + "' in " + where);
}

std::string time_tag(double t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", t);
  return buf;
}

std::string mode_name(ExperimentConfig::Mode m) {
  switch (m) {
    case ExperimentConfig::Mode::sipf: return "sipf";
    case ExperimentConfig::Mode::fdm: return "fdm";
    case ExperimentConfig::Mode::radial: return "radial";
    case ExperimentConfig::Mode::compare: return "compare";
    case ExperimentConfig::Mode::sweep: return "sweep";
    case ExperimentConfig::Mode::identity: return "identity";
  }
  return "?";
}

ExperimentConfig::Mode mode_from_name(const std::string& s) {
  if (s == "sipf") return ExperimentConfig::Mode::sipf;
  if (s == "fdm") return ExperimentConfig::Mode::fdm;
  if (s == "radial") return ExperimentConfig::Mode::radial;
  if (s == "compare") return ExperimentConfig::Mode::compare;
  if (s == "sweep") return ExperimentConfig::Mode::sweep;
  if (s == "identity") return ExperimentConfig::Mode::identity;
  throw std::invalid_argument("config: solver must be one of sipf|fdm|radial|compare|sweep|identity");
}

json ic_json(const InitialCondition& ic) {
  json blobs = json::array();
  for (const auto& b : ic.blobs)
    blobs.push_back(json{{"center", {b.center[0], b.center[1], b.center[2]}}, {"weight", b.weight}});
  return json{{"blobs", blobs}, {"truncation_radius", ic.truncation_radius}};
}

json params_json(const SimulationParams& p) {
  return json{{"d_n", p.d_n},     {"d_m", p.d_m}, {"gamma", p.gamma}, {"eta", p.eta},
              {"alpha", p.alpha}, {"beta", p.beta}, {"epsilon", p.epsilon}, {"L", p.L},
              {"dt", p.dt},       {"T", p.T},     {"P", p.P},         {"H", p.H},
              {"seed", p.seed},   {"dim", p.dim}};
}

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Collected artifact list; every row carries the hash of the configuration
// that generated it (cache entries keep their own).
class Manifest {
 public:
  explicit Manifest(std::string run_hash) : run_hash_(std::move(run_hash)) {}
  void add(const std::string& file) { rows_.emplace_back(file, run_hash_); }
  void add(const std::string& file, const std::string& hash) { rows_.emplace_back(file, hash); }
  void write(const fs::path& dir) const {
    json artifacts = json::array();
    auto rows = rows_;
    std::sort(rows.begin(), rows.end());
    for (const auto& [file, hash] : rows) artifacts.push_back(json{{"file", file}, {"config_hash", hash}});
    json j{{"config_hash", run_hash_}, {"artifacts", artifacts}};
    std::ofstream out(dir / "manifest.json");
    out << j.dump(2) << '\n';
  }

 private:
  std::string run_hash_;
  std::vector<std::pair<std::string, std::string>> rows_;
};

std::string hex_hash(const std::string& s) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(io::fnv1a64(s)));
  return buf;
}

std::vector<double> effective_snapshot_times(const ExperimentConfig& cfg) {
  if (!cfg.snapshot_times.empty()) return cfg.snapshot_times;
  if (cfg.mode == ExperimentConfig::Mode::identity) {
    std::vector<double> times;
    const long n_steps = cfg.params.steps();
    const long stride = std::max<long>(1, n_steps / 8);
    for (long s = 0; s <= n_steps; s += stride) times.push_back(static_cast<double>(s) * cfg.params.dt);
    if (std::lround(cfg.params.T / cfg.params.dt) % stride != 0) times.push_back(cfg.params.T);
    return times;
  }
  return {cfg.params.T};
}

RadialProfile sipf_m_profile(const SipfState& s, const ExperimentConfig& cfg) {
  const int eval_n = std::max(64, s.params.H);
  LatticeField g = inverse_transform_to_lattice(s.m, eval_n);
  RadialProfile p =
      bin_lattice_radially(g, {0.0, 0.0, 0.0}, cfg.r_max / cfg.bin_count, cfg.r_max, "sipf");
  p.time = s.time();
  return p;
}

RadialProfile fdm_m_profile(const GridField& g, const ExperimentConfig& cfg) {
  RadialProfile p =
      bin_grid_radially(g, g.m, {0.0, 0.0, 0.0}, cfg.r_max / cfg.bin_count, cfg.r_max, "fdm");
  p.time = g.time;
  return p;
}

// Fine-mesh radial reference at the final time, content-addressed by the
// portion of the configuration that determines it.
RadialGrid get_reference(const ExperimentConfig& cfg, Manifest& manifest) {
  json key{{"kind", "radial-reference"},
           {"d_n", cfg.params.d_n},
           {"d_m", cfg.params.d_m},
           {"gamma", cfg.params.gamma},
           {"eta", cfg.params.eta},
           {"alpha", cfg.params.alpha},
           {"beta", cfg.params.beta},
           {"epsilon", cfg.params.epsilon},
           {"T", cfg.params.T},
           {"ic", ic_json(cfg.ic)},
           {"n_r", cfg.ref_n_r},
           {"dt", cfg.ref_dt},
           {"R", cfg.radial_R}};
  const std::string hash = hex_hash(key.dump());
  const fs::path cache_dir = fs::path(cfg.out_dir) / "cache";
  fs::create_directories(cache_dir);
  const fs::path file = cache_dir / ("radial_" + hash + ".csv");
  if (fs::exists(file)) {
    manifest.add("cache/" + file.filename().string(), hash);
    return io::read_radial_grid_csv(file.string());
  }
  auto snaps =
      radial_run(cfg.params, cfg.ic, cfg.ref_n_r, cfg.ref_dt, cfg.radial_R, {cfg.params.T});
  io::write_radial_grid_csv(snaps.back(), file.string());
  manifest.add("cache/" + file.filename().string(), hash);
  return snaps.back();
}

void run_mode_sipf(const ExperimentConfig& cfg, const fs::path& out, Manifest& manifest) {
  const auto times = effective_snapshot_times(cfg);
  auto snaps = run(cfg.params, cfg.ic, times, cfg.grad_m);
  const double width = cfg.r_max / cfg.bin_count;
  for (const auto& s : snaps) {
    const std::string tag = time_tag(s.time());
    io::write_particles_csv(s.n, s.particles, (out / ("particles_t" + tag + ".csv")).string());
    manifest.add("particles_t" + tag + ".csv");
    io::write_spectral_csv(s.m, (out / ("m_t" + tag + ".csv")).string());
    manifest.add("m_t" + tag + ".csv");
    io::write_spectral_csv(s.f, (out / ("f_t" + tag + ".csv")).string());
    manifest.add("f_t" + tag + ".csv");
    RadialProfile pm = sipf_m_profile(s, cfg);
    io::write_profile_csv(pm, (out / ("profile_m_t" + tag + ".csv")).string());
    manifest.add("profile_m_t" + tag + ".csv");
    RadialProfile pr = bin_particles_radially(s.particles, {0.0, 0.0, 0.0}, width, cfg.r_max);
    pr.time = s.time();
    io::write_profile_csv(pr, (out / ("profile_rho_t" + tag + ".csv")).string());
    manifest.add("profile_rho_t" + tag + ".csv");
  }
}

void run_mode_fdm(const ExperimentConfig& cfg, const fs::path& out, Manifest& manifest) {
  const auto times = effective_snapshot_times(cfg);
  auto snaps = fdm_run(cfg.params, cfg.ic, cfg.fdm_n, times);
  for (const auto& g : snaps) {
    const std::string tag = time_tag(g.time);
    for (const char* field : {"rho", "f", "m"}) {
      const std::string name = std::string("grid_") + field + "_t" + tag + ".bin";
      io::write_grid_binary(g, field, (out / name).string());
      manifest.add(name);
    }
    io::write_grid_slices_csv(g, (out / ("slices_t" + tag + ".csv")).string());
    manifest.add("slices_t" + tag + ".csv");
  }
}

void run_mode_radial(const ExperimentConfig& cfg, const fs::path& out, Manifest& manifest) {
  const auto times = effective_snapshot_times(cfg);
  auto snaps = radial_run(cfg.params, cfg.ic, cfg.radial_n_r, cfg.radial_dt, cfg.radial_R, times);
  for (const auto& g : snaps) {
    const std::string name = "radial_t" + time_tag(g.time) + ".csv";
    io::write_radial_grid_csv(g, (out / name).string());
    manifest.add(name);
  }
}

void run_mode_compare(const ExperimentConfig& cfg, const fs::path& out, Manifest& manifest) {
  RadialGrid ref = get_reference(cfg, manifest);
  RadialProfile ref_profile = profile_from_radial(ref, ref.m);
  ErrorReport report;
  const double nan = std::nan("");
  for (const auto& solver : cfg.solvers) {
    Timer timer;
    RadialProfile prof;
    double control = 0.0;
    if (solver == "sipf") {
      auto snaps = run(cfg.params, cfg.ic, {cfg.params.T}, cfg.grad_m);
      prof = sipf_m_profile(snaps.back(), cfg);
      control = cfg.params.dt;
    } else if (solver == "fdm") {
      auto snaps = fdm_run(cfg.params, cfg.ic, cfg.fdm_n, {cfg.params.T});
      prof = fdm_m_profile(snaps.back(), cfg);
      control = snaps.back().spacing();
    } else if (solver == "radial") {
      auto snaps =
          radial_run(cfg.params, cfg.ic, cfg.radial_n_r, cfg.radial_dt, cfg.radial_R, {cfg.params.T});
      prof = profile_from_radial(snaps.back(), snaps.back().m);
      control = snaps.back().dr();
    } else {
      throw std::invalid_argument("compare: unknown solver '" + solver + "'");
    }
    const double err = relative_l2_error(prof, ref_profile);
    const std::string name = "profile_m_" + solver + ".csv";
    io::write_profile_csv(prof, (out / name).string());
    manifest.add(name);
    report.rows.push_back({solver, control, timer.seconds(), nan, err, nan});
  }
  io::write_error_report_csv(report, (out / "report.csv").string());
  manifest.add("report.csv");
}

void run_mode_sweep(const ExperimentConfig& cfg, const fs::path& out, Manifest& manifest) {
  RadialGrid ref = get_reference(cfg, manifest);
  RadialProfile ref_profile = profile_from_radial(ref, ref.m);
  std::vector<uint64_t> seeds = cfg.sweep_seeds;
  if (seeds.empty()) seeds.push_back(cfg.params.seed);

  ErrorReport report;
  std::ofstream errs_csv(out / "errors.csv");
  errs_csv << "axis,value,seed,error\n";
  std::vector<std::pair<double, double>> points;
  double prev_control = 0.0, prev_err = 0.0, prev_time = 0.0;

  for (std::size_t vi = 0; vi < cfg.sweep_values.size(); ++vi) {
    const double v = cfg.sweep_values[vi];
    double control = v;
    double err_sum = 0.0;
    Timer timer;
    for (uint64_t seed : seeds) {
      SimulationParams p = cfg.params;
      p.seed = seed;
      RadialProfile prof;
      if (cfg.sweep_axis == "dt") {
        p.dt = v;
        auto snaps = run(p, cfg.ic, {p.T}, cfg.grad_m);
        ExperimentConfig c2 = cfg;
        prof = sipf_m_profile(snaps.back(), c2);
      } else if (cfg.sweep_axis == "P") {
        p.P = std::lround(v);
        auto snaps = run(p, cfg.ic, {p.T}, cfg.grad_m);
        prof = sipf_m_profile(snaps.back(), cfg);
      } else if (cfg.sweep_axis == "H") {
        p.H = static_cast<int>(std::lround(v));
        auto snaps = run(p, cfg.ic, {p.T}, cfg.grad_m);
        prof = sipf_m_profile(snaps.back(), cfg);
      } else if (cfg.sweep_axis == "grid") {
        const int n = static_cast<int>(std::lround(v));
        auto snaps = fdm_run(p, cfg.ic, n, {p.T});
        prof = fdm_m_profile(snaps.back(), cfg);
        control = p.L / (n - 1);
      } else {
        throw std::invalid_argument("sweep: axis must be dt|P|H|grid");
      }
      const double e = relative_l2_error(prof, ref_profile);
      err_sum += e;
      errs_csv << cfg.sweep_axis << ',' << io::format_double(v) << ',' << seed << ','
               << io::format_double(e) << '\n';
    }
    const double mean_err = err_sum / static_cast<double>(seeds.size());
    const double elapsed = timer.seconds() / static_cast<double>(seeds.size());
    points.emplace_back(control, mean_err);

    ErrorReport::Row row;
    row.label = cfg.sweep_axis + "=" + time_tag(v);
    row.control = control;
    row.runtime_s = elapsed;
    row.error = mean_err;
    if (vi == 0) {
      row.ratio = row.rate = std::nan("");
    } else {
      row.ratio = runtime_scaling_ratio(prev_time, elapsed, prev_control, control);
      row.rate = convergence_rate(prev_err, mean_err, prev_control, control);
    }
    report.rows.push_back(row);
    prev_control = control;
    prev_err = mean_err;
    prev_time = elapsed;
  }
  io::write_error_report_csv(report, (out / "report.csv").string());
  manifest.add("report.csv");
  manifest.add("errors.csv");

  const FitMode fit_mode = cfg.sweep_axis == "H" ? FitMode::semilog : FitMode::loglog;
  const double slope = fit_loglog_slope(points, fit_mode);
  std::ofstream fit(out / "fit.csv");
  fit << "axis,mode,slope,points\n";
  fit << cfg.sweep_axis << ',' << (fit_mode == FitMode::semilog ? "semilog" : "loglog") << ','
      << io::format_double(slope) << ',' << points.size() << '\n';
  manifest.add("fit.csv");
}

void run_mode_identity(const ExperimentConfig& cfg, const fs::path& out, Manifest& manifest) {
  const auto times = effective_snapshot_times(cfg);
  for (const auto& solver : cfg.solvers) {
    std::vector<double> ts, int_m, int_lnf;
    std::vector<bool> lnf_ok;
    if (solver == "sipf") {
      auto snaps = run(cfg.params, cfg.ic, times, cfg.grad_m);
      for (const auto& s : snaps) {
        ts.push_back(s.time());
        int_m.push_back(integral_m_sipf(s.m));
        try {
          int_lnf.push_back(integral_lnf_sipf(s.f));
          lnf_ok.push_back(true);
        } catch (const std::domain_error&) {
          int_lnf.push_back(std::nan(""));
          lnf_ok.push_back(false);
        }
      }
    } else if (solver == "fdm") {
      auto snaps = fdm_run(cfg.params, cfg.ic, cfg.fdm_n, times);
      for (const auto& g : snaps) {
        ts.push_back(g.time);
        int_m.push_back(integral_m_fdm(g));
        try {
          int_lnf.push_back(integral_lnf_fdm(g));
          lnf_ok.push_back(true);
        } catch (const std::domain_error&) {
          int_lnf.push_back(std::nan(""));
          lnf_ok.push_back(false);
        }
      }
    } else if (solver == "radial") {
      auto snaps = radial_run(cfg.params, cfg.ic, cfg.radial_n_r, cfg.radial_dt, cfg.radial_R, times);
      for (const auto& g : snaps) {
        ts.push_back(g.time);
        int_m.push_back(integral_m_radial(g));
        try {
          int_lnf.push_back(integral_lnf_radial(g));
          lnf_ok.push_back(true);
        } catch (const std::domain_error&) {
          int_lnf.push_back(std::nan(""));
          lnf_ok.push_back(false);
        }
      }
    } else {
      throw std::invalid_argument("identity: unknown solver '" + solver + "'");
    }

    const std::string name = "identity_" + solver + ".csv";
    std::ofstream csv(out / name);
    csv << "t,int_m,int_m_ref,err_m,int_lnf,int_lnf_ref,err_lnf\n";
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const double m_ref = integral_m_reference(ts[i], cfg.params, cfg.ic);
      double lnf_ref = std::nan(""), err_lnf = std::nan("");
      try {
        lnf_ref = integral_lnf_reference(ts[i], cfg.params, cfg.ic);
        if (lnf_ok[i]) err_lnf = error_m(int_lnf[i], lnf_ref);
      } catch (const std::invalid_argument&) {
      }
      csv << io::format_double(ts[i]) << ',' << io::format_double(int_m[i]) << ','
          << io::format_double(m_ref) << ',' << io::format_double(error_m(int_m[i], m_ref)) << ','
          << io::format_double(int_lnf[i]) << ',' << io::format_double(lnf_ref) << ','
          << io::format_double(err_lnf) << '\n';
    }
    manifest.add(name);
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  params.validate();
  ic.validate(params.L);
  if (bin_count < 1) throw std::invalid_argument("config: bins.count must be >= 1");
  if (!(r_max > 0.0)) throw std::invalid_argument("config: bins.r_max must be > 0");
  if (fdm_n < 3) throw std::invalid_argument("config: fdm.n must be >= 3");
  if (radial_n_r < 3 || ref_n_r < 3) throw std::invalid_argument("config: radial n_r must be >= 3");
  if (!(radial_dt > 0.0) || !(ref_dt > 0.0)) throw std::invalid_argument("config: radial dt must be > 0");
  if (mode == Mode::sweep) {
    static const std::set<std::string> axes{"dt", "P", "H", "grid"};
    if (!axes.count(sweep_axis)) throw std::invalid_argument("config: sweep.axis must be dt|P|H|grid");
    if (sweep_values.size() < 2) throw std::invalid_argument("config: sweep needs at least 2 values");
  }
  if (mode == Mode::compare || mode == Mode::identity) {
    if (solvers.empty()) throw std::invalid_argument("config: solvers list must not be empty");
    for (const auto& s : solvers)
      if (s != "sipf" && s != "fdm" && s != "radial")
        throw std::invalid_argument("config: solvers entries must be sipf|fdm|radial");
  }
  for (double t : snapshot_times)
    if (t < 0.0 || t > params.T)
      throw std::invalid_argument("config: snapshot_times must lie in [0, T]");
}

std::string ExperimentConfig::canonical_json() const {
  json j{{"solver", mode_name(mode)},
         {"params", params_json(params)},
         {"ic", ic_json(ic)},
         {"snapshot_times", snapshot_times},
         {"grad_m", grad_m == GradMMode::paper ? "paper" : "spectral"},
         {"bins", {{"count", bin_count}, {"r_max", r_max}}},
         {"fdm", {{"n", fdm_n}}},
         {"radial", {{"n_r", radial_n_r}, {"dt", radial_dt}, {"R", radial_R}}},
         {"reference", {{"n_r", ref_n_r}, {"dt", ref_dt}}},
         {"solvers", solvers},
         {"sweep", {{"axis", sweep_axis}, {"values", sweep_values}, {"seeds", sweep_seeds}}}};
  return j.dump();
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: JSON parse error: ") + e.what());
  }
  ExperimentConfig cfg;
  check_keys(j, "top level",
             {"solver", "params", "ic", "out", "snapshot_times", "grad_m", "threads", "bins", "fdm",
              "radial", "reference", "solvers", "sweep"});
  if (!j.contains("solver")) throw std::invalid_argument("config: missing 'solver'");
  cfg.mode = mode_from_name(j.at("solver").get<std::string>());

  if (j.contains("params")) {
    const json& p = j.at("params");
    check_keys(p, "params",
               {"d_n", "d_m", "gamma", "eta", "alpha", "beta", "epsilon", "L", "dt", "T", "P", "H",
                "seed", "dim"});
    auto get = [&](const char* k, auto& field) {
      if (p.contains(k)) field = p.at(k).get<std::decay_t<decltype(field)>>();
    };
    get("d_n", cfg.params.d_n);
    get("d_m", cfg.params.d_m);
    get("gamma", cfg.params.gamma);
    get("eta", cfg.params.eta);
    get("alpha", cfg.params.alpha);
    get("beta", cfg.params.beta);
    get("epsilon", cfg.params.epsilon);
    get("L", cfg.params.L);
    get("dt", cfg.params.dt);
    get("T", cfg.params.T);
    get("P", cfg.params.P);
    get("H", cfg.params.H);
    get("seed", cfg.params.seed);
    get("dim", cfg.params.dim);
  }
  if (j.contains("ic")) {
    const json& icj = j.at("ic");
    check_keys(icj, "ic", {"blobs", "truncation_radius"});
    if (icj.contains("truncation_radius")) cfg.ic.truncation_radius = icj.at("truncation_radius").get<double>();
    if (icj.contains("blobs")) {
      cfg.ic.blobs.clear();
      for (const auto& bj : icj.at("blobs")) {
        check_keys(bj, "ic.blobs[]", {"center", "weight"});
        InitialCondition::Blob b;
        if (bj.contains("center")) {
          const auto c = bj.at("center").get<std::vector<double>>();
          if (c.size() != 3) throw std::invalid_argument("config: blob center must have 3 components");
          b.center = {c[0], c[1], c[2]};
        }
        if (bj.contains("weight")) b.weight = bj.at("weight").get<double>();
        cfg.ic.blobs.push_back(b);
      }
    }
  }
  if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
  if (j.contains("snapshot_times")) cfg.snapshot_times = j.at("snapshot_times").get<std::vector<double>>();
  if (j.contains("grad_m")) {
    const std::string g = j.at("grad_m").get<std::string>();
    if (g == "paper")
      cfg.grad_m = GradMMode::paper;
    else if (g == "spectral")
      cfg.grad_m = GradMMode::spectral;
    else
      throw std::invalid_argument("config: grad_m must be paper|spectral");
  }
  if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
  if (j.contains("bins")) {
    check_keys(j.at("bins"), "bins", {"count", "r_max"});
    if (j.at("bins").contains("count")) cfg.bin_count = j.at("bins").at("count").get<int>();
    if (j.at("bins").contains("r_max")) cfg.r_max = j.at("bins").at("r_max").get<double>();
  }
  if (j.contains("fdm")) {
    check_keys(j.at("fdm"), "fdm", {"n"});
    if (j.at("fdm").contains("n")) cfg.fdm_n = j.at("fdm").at("n").get<int>();
  }
  if (j.contains("radial")) {
    check_keys(j.at("radial"), "radial", {"n_r", "dt", "R"});
    const json& r = j.at("radial");
    if (r.contains("n_r")) cfg.radial_n_r = r.at("n_r").get<int>();
    if (r.contains("dt")) cfg.radial_dt = r.at("dt").get<double>();
    if (r.contains("R")) cfg.radial_R = r.at("R").get<double>();
  }
  if (j.contains("reference")) {
    check_keys(j.at("reference"), "reference", {"n_r", "dt"});
    const json& r = j.at("reference");
    if (r.contains("n_r")) cfg.ref_n_r = r.at("n_r").get<int>();
    if (r.contains("dt")) cfg.ref_dt = r.at("dt").get<double>();
  }
  if (j.contains("solvers")) cfg.solvers = j.at("solvers").get<std::vector<std::string>>();
  if (j.contains("sweep")) {
    check_keys(j.at("sweep"), "sweep", {"axis", "values", "seeds"});
    const json& s = j.at("sweep");
    if (s.contains("axis")) cfg.sweep_axis = s.at("axis").get<std::string>();
    if (s.contains("values")) cfg.sweep_values = s.at("values").get<std::vector<double>>();
    if (s.contains("seeds")) cfg.sweep_seeds = s.at("seeds").get<std::vector<uint64_t>>();
  }
  cfg.validate();
  return cfg;
}

int run_experiment(const ExperimentConfig& cfg) {
  const fs::path out(cfg.out_dir);
  try {
    cfg.validate();
#ifdef _OPENMP
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
#endif
    fs::create_directories(out);
    Manifest manifest(hex_hash(cfg.canonical_json()));
    switch (cfg.mode) {
      case ExperimentConfig::Mode::sipf: run_mode_sipf(cfg, out, manifest); break;
      case ExperimentConfig::Mode::fdm: run_mode_fdm(cfg, out, manifest); break;
      case ExperimentConfig::Mode::radial: run_mode_radial(cfg, out, manifest); break;
      case ExperimentConfig::Mode::compare: run_mode_compare(cfg, out, manifest); break;
      case ExperimentConfig::Mode::sweep: run_mode_sweep(cfg, out, manifest); break;
      case ExperimentConfig::Mode::identity: run_mode_identity(cfg, out, manifest); break;
    }
    manifest.write(out);
    return 0;
  } catch (const std::exception& e) {
    try {
      fs::create_directories(out);
      std::ofstream err(out / "error.json");
      err << json{{"error", e.what()}}.dump(2) << '\n';
    } catch (...) {
    }
    return 1;
  }
}

}  // namespace sipf
