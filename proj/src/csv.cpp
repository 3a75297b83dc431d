#include "fthss/csv.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fthss/config.hpp"

namespace fthss {

void write_timeseries_csv(const std::string& path, const std::vector<double>& t,
                          const std::vector<std::vector<cplx>>& u) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("write_timeseries_csv: cannot open " + path);
  f << "t";
  for (size_t q = 0; q < u.size(); ++q) f << ",re_p" << q << ",im_p" << q;
  f << "\n";
  char buf[64];
  for (size_t i = 0; i < t.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", t[i]);
    f << buf;
    for (size_t q = 0; q < u.size(); ++q) {
      std::snprintf(buf, sizeof buf, ",%.17g", u[q][i].real());
      f << buf;
      std::snprintf(buf, sizeof buf, ",%.17g", u[q][i].imag());
      f << buf;
    }
    f << "\n";
  }
}

TimeSeries read_timeseries_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("read_timeseries_csv: cannot open " + path);
  std::string line;
  if (!std::getline(f, line)) throw std::runtime_error("read_timeseries_csv: empty file");
  size_t npoints = 0;
  for (size_t pos = 0; (pos = line.find(",re_p", pos)) != std::string::npos; ++pos) ++npoints;
  TimeSeries ts;
  ts.u.resize(npoints);
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::getline(ls, cell, ',');
    ts.t.push_back(std::stod(cell));
    for (size_t q = 0; q < npoints; ++q) {
      std::getline(ls, cell, ',');
      const double re = std::stod(cell);
      std::getline(ls, cell, ',');
      ts.u[q].push_back(cplx(re, std::stod(cell)));
    }
  }
  return ts;
}

void write_decay_csv(const std::string& path, const std::vector<double>& t,
                     const std::vector<cplx>& i1, const std::vector<cplx>& i2,
                     const std::vector<double>& eps2) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("write_decay_csv: cannot open " + path);
  f << "t,abs_i1,re_i1,im_i1,re_i2,im_i2,eps2\n";
  char buf[256];
  for (size_t i = 0; i < t.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", t[i],
                  std::abs(i1[i]), i1[i].real(), i1[i].imag(), i2[i].real(), i2[i].imag(),
                  eps2[i]);
    f << buf;
  }
}

void write_snapshot(const std::string& path, int nx, int ny, double x0, double x1, double y0,
                    double y1, double t, const std::vector<cplx>& values,
                    const std::vector<char>& mask) {
  if (values.size() != static_cast<size_t>(nx) * ny || mask.size() != values.size())
    throw std::invalid_argument("write_snapshot: size mismatch");
  std::ofstream f(path);
  if (!f) throw std::runtime_error("write_snapshot: cannot open " + path);
  char buf[128];
  std::snprintf(buf, sizeof buf, "# nx %d ny %d x %.17g %.17g y %.17g %.17g t %.17g\n", nx, ny,
                x0, x1, y0, y1, t);
  f << buf;
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const size_t idx = static_cast<size_t>(iy) * nx + ix;
      if (mask[idx])
        std::snprintf(buf, sizeof buf, "1e300 1e300");
      else
        std::snprintf(buf, sizeof buf, "%.10g %.10g", values[idx].real(), values[idx].imag());
      f << buf << (ix + 1 == nx ? "\n" : " ");
    }
  }
}

void write_manifest(const std::string& path, const SimulationConfig& cfg, double wall_seconds) {
  nlohmann::json j;
  j["config"] = to_config_text(cfg);
  j["config_hash"] = config_hash(cfg);
  j["seed"] = cfg.seed;
  j["wall_seconds"] = wall_seconds;
  j["format_version"] = 1;
  std::ofstream f(path);
  if (!f) throw std::runtime_error("write_manifest: cannot open " + path);
  f << j.dump(2) << "\n";
}

} // namespace fthss
