#include "sipf/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sipf::io {

namespace {

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

std::vector<double> grid_array(const GridField& g, const std::string& field) {
  if (field == "rho") return g.rho;
  if (field == "f") return g.f;
  if (field == "m") return g.m;
  throw std::invalid_argument("unknown grid field: " + field);
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_spectral_csv(const SpectralField& f, const std::string& path) {
  auto out = open_out(path);
  out << "j,m,l,re,im\n";
  const int half = f.modes() / 2;
  for (int j = -half; j < half; ++j)
    for (int m = -half; m < half; ++m)
      for (int l = -half; l < half; ++l) {
        const auto c = f.at(j, m, l);
        out << j << ',' << m << ',' << l << ',' << format_double(c.real()) << ','
            << format_double(c.imag()) << '\n';
      }
}

void write_particles_csv(long step, const ParticleEnsemble& ens, const std::string& path) {
  auto out = open_out(path);
  out << "step,p,x,y,z\n";
  for (long p = 0; p < ens.count(); ++p) {
    const auto& x = ens.positions[static_cast<std::size_t>(p)];
    out << step << ',' << p << ',' << format_double(x[0]) << ',' << format_double(x[1]) << ','
        << format_double(x[2]) << '\n';
  }
}

void write_profile_csv(const RadialProfile& p, const std::string& path) {
  auto out = open_out(path);
  out << "# tag=" << p.tag << " time=" << format_double(p.time)
      << " bin_width=" << format_double(p.bin_width()) << '\n';
  out << "r,value,count\n";
  for (int i = 0; i < p.bins(); ++i)
    out << format_double(p.midpoint(i)) << ',' << format_double(p.values[i]) << ',' << p.counts[i]
        << '\n';
}

void write_radial_grid_csv(const RadialGrid& g, const std::string& path) {
  auto out = open_out(path);
  out << "# time=" << format_double(g.time) << " dr=" << format_double(g.dr())
      << " R=" << format_double(g.R) << " n_r=" << g.n_r << '\n';
  out << "r,rho,f,m\n";
  for (int i = 0; i < g.n_r; ++i)
    out << format_double(g.center(i)) << ',' << format_double(g.rho[i]) << ','
        << format_double(g.f[i]) << ',' << format_double(g.m[i]) << '\n';
}

RadialGrid read_radial_grid_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::string header;
  std::getline(in, header);
  RadialGrid g;
  {
    std::istringstream hs(header);
    std::string tok;
    while (hs >> tok) {
      if (tok.rfind("time=", 0) == 0) g.time = std::stod(tok.substr(5));
      if (tok.rfind("R=", 0) == 0) g.R = std::stod(tok.substr(2));
      if (tok.rfind("n_r=", 0) == 0) g.n_r = std::stoi(tok.substr(4));
    }
  }
  if (g.n_r <= 0) throw std::runtime_error("bad radial CSV header: " + path);
  std::string line;
  std::getline(in, line);  // column names
  g.rho.reserve(g.n_r);
  g.f.reserve(g.n_r);
  g.m.reserve(g.n_r);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    double vals[4];
    for (int c = 0; c < 4; ++c) {
      if (!std::getline(ls, cell, ',')) throw std::runtime_error("short row in " + path);
      vals[c] = std::stod(cell);
    }
    g.rho.push_back(vals[1]);
    g.f.push_back(vals[2]);
    g.m.push_back(vals[3]);
  }
  if (static_cast<int>(g.rho.size()) != g.n_r) throw std::runtime_error("row count mismatch in " + path);
  return g;
}

void write_grid_binary(const GridField& g, const std::string& field, const std::string& path) {
  auto out = open_out(path, std::ios::out | std::ios::binary);
  out << g.dim << ' ' << g.n << ' ' << format_double(g.spacing()) << ' ' << format_double(g.time)
      << '\n';
  const std::vector<double> values = grid_array(g, field);
  out.write(reinterpret_cast<const char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(double)));
}

GridField read_grid_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  GridField g;
  double dx = 0.0;
  in >> g.dim >> g.n >> dx >> g.time;
  in.ignore(1);  // newline
  g.box = dx * (g.n - 1);
  g.rho.resize(g.cells());
  in.read(reinterpret_cast<char*>(g.rho.data()),
          static_cast<std::streamsize>(g.rho.size() * sizeof(double)));
  if (!in) throw std::runtime_error("short grid binary: " + path);
  return g;
}

void write_grid_slices_csv(const GridField& g, const std::string& path) {
  auto out = open_out(path);
  out << "axis,coord,rho,f,m\n";
  const int mid = g.n / 2;
  const char* axes = "xyz";
  const int n_axes = g.dim;
  for (int a = 0; a < n_axes; ++a) {
    for (int i = 0; i < g.n; ++i) {
      int ix = mid, iy = mid, iz = g.dim == 3 ? mid : 0;
      if (a == 0) ix = i;
      if (a == 1) iy = i;
      if (a == 2) iz = i;
      const std::size_t idx = (static_cast<std::size_t>(iz) * g.n + iy) * g.n + ix;
      out << axes[a] << ',' << format_double(g.node_coord(i)) << ',' << format_double(g.rho[idx])
          << ',' << format_double(g.f[idx]) << ',' << format_double(g.m[idx]) << '\n';
    }
  }
}

void write_error_report_csv(const ErrorReport& r, const std::string& path) {
  auto out = open_out(path);
  out << "label,control,runtime_s,ratio,rel_l2_error,rate\n";
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const auto& row = r.rows[i];
    out << row.label << ',' << format_double(row.control) << ',' << format_double(row.runtime_s) << ',';
    if (i == 0)
      out << ',';
    else
      out << format_double(row.ratio) << ',';
    out << format_double(row.error) << ',';
    if (i == 0)
      out << '\n';
    else
      out << format_double(row.rate) << '\n';
  }
}

uint64_t fnv1a64(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace sipf::io
