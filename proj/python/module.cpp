#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sipf/diagnostics.hpp"
#include "sipf/experiment.hpp"
#include "sipf/fdm_solver.hpp"
#include "sipf/init.hpp"
#include "sipf/radial_solver.hpp"
#include "sipf/sipf_solver.hpp"

namespace py = pybind11;
using namespace sipf;

namespace {

py::array_t<double> positions_array(const ParticleEnsemble& ens) {
  py::array_t<double> out({static_cast<py::ssize_t>(ens.count()), static_cast<py::ssize_t>(3)});
  auto r = out.mutable_unchecked<2>();
  for (py::ssize_t p = 0; p < r.shape(0); ++p)
    for (py::ssize_t d = 0; d < 3; ++d) r(p, d) = ens.positions[static_cast<std::size_t>(p)][static_cast<std::size_t>(d)];
  return out;
}

SimulationParams params_from_kwargs(const py::kwargs& kw) {
  SimulationParams p;
  for (auto item : kw) {
    const std::string key = py::cast<std::string>(item.first);
    if (key == "d_n") p.d_n = py::cast<double>(item.second);
    else if (key == "d_m") p.d_m = py::cast<double>(item.second);
    else if (key == "gamma") p.gamma = py::cast<double>(item.second);
    else if (key == "eta") p.eta = py::cast<double>(item.second);
    else if (key == "alpha") p.alpha = py::cast<double>(item.second);
    else if (key == "beta") p.beta = py::cast<double>(item.second);
    else if (key == "epsilon") p.epsilon = py::cast<double>(item.second);
    else if (key == "L") p.L = py::cast<double>(item.second);
    else if (key == "dt") p.dt = py::cast<double>(item.second);
    else if (key == "T") p.T = py::cast<double>(item.second);
    else if (key == "P") p.P = py::cast<long>(item.second);
    else if (key == "H") p.H = py::cast<int>(item.second);
    else if (key == "seed") p.seed = py::cast<uint64_t>(item.second);
    else if (key == "dim") p.dim = py::cast<int>(item.second);
    else throw py::key_error("unknown parameter: " + key);
  }
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Stochastic interacting particle-field solver for the haptotaxis invasion system";

  py::class_<SimulationParams>(m, "SimulationParams")
      .def(py::init([](const py::kwargs& kw) { return params_from_kwargs(kw); }))
      .def_readwrite("d_n", &SimulationParams::d_n)
      .def_readwrite("d_m", &SimulationParams::d_m)
      .def_readwrite("gamma", &SimulationParams::gamma)
      .def_readwrite("eta", &SimulationParams::eta)
      .def_readwrite("alpha", &SimulationParams::alpha)
      .def_readwrite("beta", &SimulationParams::beta)
      .def_readwrite("epsilon", &SimulationParams::epsilon)
      .def_readwrite("L", &SimulationParams::L)
      .def_readwrite("dt", &SimulationParams::dt)
      .def_readwrite("T", &SimulationParams::T)
      .def_readwrite("P", &SimulationParams::P)
      .def_readwrite("H", &SimulationParams::H)
      .def_readwrite("seed", &SimulationParams::seed)
      .def_readwrite("dim", &SimulationParams::dim)
      .def("validate", &SimulationParams::validate);

  py::class_<InitialCondition>(m, "InitialCondition")
      .def(py::init([](std::vector<std::pair<std::array<double, 3>, double>> blobs, double rt) {
             InitialCondition ic;
             ic.blobs.clear();
             for (const auto& [c, w] : blobs) ic.blobs.push_back({Vec3{c[0], c[1], c[2]}, w});
             ic.truncation_radius = rt;
             return ic;
           }),
           py::arg("blobs") = std::vector<std::pair<std::array<double, 3>, double>>{{{0, 0, 0}, 1.0}},
           py::arg("truncation_radius") = 0.1)
      .def_readwrite("truncation_radius", &InitialCondition::truncation_radius);

  py::class_<ParticleEnsemble>(m, "ParticleEnsemble")
      .def_property_readonly("positions", &positions_array)
      .def_readonly("total_mass", &ParticleEnsemble::total_mass)
      .def("__len__", &ParticleEnsemble::count);

  py::class_<SpectralField>(m, "SpectralField")
      .def_property_readonly("modes", &SpectralField::modes)
      .def_property_readonly("box", &SpectralField::box)
      .def("coefficient",
           [](const SpectralField& f, int j, int m, int l) { return f.at(j, m, l); })
      .def("evaluate_at",
           [](const SpectralField& f, double x, double y, double z) { return f.evaluate_at({x, y, z}); })
      .def("gradient_at",
           [](const SpectralField& f, double x, double y, double z) { return f.gradient_at({x, y, z}); })
      .def("hermitian_error", &SpectralField::hermitian_error);

  py::class_<SipfState>(m, "SipfState")
      .def_readonly("n", &SipfState::n)
      .def_readonly("particles", &SipfState::particles)
      .def_readonly("m", &SipfState::m)
      .def_readonly("f", &SipfState::f)
      .def_property_readonly("time", &SipfState::time);

  py::class_<RadialGrid>(m, "RadialGrid")
      .def_readonly("n_r", &RadialGrid::n_r)
      .def_readonly("R", &RadialGrid::R)
      .def_readonly("time", &RadialGrid::time)
      .def_readonly("rho", &RadialGrid::rho)
      .def_readonly("f", &RadialGrid::f)
      .def_readonly("m", &RadialGrid::m);

  py::class_<GridField>(m, "GridField")
      .def_readonly("dim", &GridField::dim)
      .def_readonly("n", &GridField::n)
      .def_readonly("time", &GridField::time)
      .def_readonly("rho", &GridField::rho)
      .def_readonly("f", &GridField::f)
      .def_readonly("m", &GridField::m)
      .def_property_readonly("dx", &GridField::spacing);

  py::class_<RadialProfile>(m, "RadialProfile")
      .def_readonly("edges", &RadialProfile::edges)
      .def_readonly("values", &RadialProfile::values)
      .def_readonly("counts", &RadialProfile::counts)
      .def_readonly("tag", &RadialProfile::tag);

  m.def("compute_total_mass", &compute_total_mass, py::arg("ic"), py::arg("epsilon"));
  m.def("sample_initial_particles", &sample_initial_particles, py::arg("ic"), py::arg("epsilon"),
        py::arg("box"), py::arg("P"), py::arg("seed"));
  m.def(
      "initial_field_coefficients",
      [](const InitialCondition& ic, double eps, int h, double box, const std::string& which) {
        return initial_field_coefficients(ic, eps, h, box,
                                          which == "f0" ? InitialField::f0 : InitialField::m0);
      },
      py::arg("ic"), py::arg("epsilon"), py::arg("H"), py::arg("box"), py::arg("which") = "m0");

  m.def(
      "run_sipf",
      [](const SimulationParams& p, const InitialCondition& ic, std::vector<double> times,
         const std::string& grad_m) {
        return run(p, ic, times, grad_m == "spectral" ? GradMMode::spectral : GradMMode::paper);
      },
      py::arg("params"), py::arg("ic"), py::arg("snapshot_times"), py::arg("grad_m") = "paper",
      py::call_guard<py::gil_scoped_release>());
  m.def(
      "run_fdm",
      [](const SimulationParams& p, const InitialCondition& ic, int n, std::vector<double> times) {
        return fdm_run(p, ic, n, times);
      },
      py::arg("params"), py::arg("ic"), py::arg("n"), py::arg("snapshot_times"),
      py::call_guard<py::gil_scoped_release>());
  m.def(
      "run_radial",
      [](const SimulationParams& p, const InitialCondition& ic, int n_r, double dt, double R,
         std::vector<double> times) { return radial_run(p, ic, n_r, dt, R, times); },
      py::arg("params"), py::arg("ic"), py::arg("n_r") = 301, py::arg("dt") = 1e-3, py::arg("R") = 1.0,
      py::arg("snapshot_times") = std::vector<double>{},
      py::call_guard<py::gil_scoped_release>());

  m.def("bin_particles_radially",
        [](const ParticleEnsemble& e, std::array<double, 3> c, double w, double rmax) {
          return bin_particles_radially(e, Vec3{c[0], c[1], c[2]}, w, rmax);
        });
  m.def("sipf_m_profile", [](const SipfState& s, int bins, double rmax) {
    LatticeField g = inverse_transform_to_lattice(s.m, std::max(64, s.params.H));
    return bin_lattice_radially(g, {0, 0, 0}, rmax / bins, rmax, "sipf");
  });
  m.def("fdm_m_profile", [](const GridField& g, int bins, double rmax) {
    return bin_grid_radially(g, g.m, {0, 0, 0}, rmax / bins, rmax, "fdm");
  });
  m.def("radial_m_profile",
        [](const RadialGrid& g) { return profile_from_radial(g, g.m, "radial"); });
  m.def("relative_l2_error", &relative_l2_error);
  m.def("convergence_rate", &convergence_rate);
  m.def("runtime_scaling_ratio", &runtime_scaling_ratio);
  m.def("integral_m_reference", &integral_m_reference);
  m.def("integral_lnf_reference", &integral_lnf_reference);
  m.def("integral_m_sipf", &integral_m_sipf);
  m.def("integral_m_fdm", &integral_m_fdm);
  m.def("integral_m_radial", &integral_m_radial);
  m.def("integral_lnf_sipf", &integral_lnf_sipf);
  m.def("error_m", &error_m);
  m.def("fit_loglog_slope", [](std::vector<std::pair<double, double>> pts, const std::string& mode) {
    return fit_loglog_slope(pts, mode == "semilog" ? FitMode::semilog : FitMode::loglog);
  });
  m.def("conservation_error", &conservation_error);
  m.def("run_experiment_json", [](const std::string& text) {
    return run_experiment(parse_config(text));
  });
}
