#pragma once

#include <string>
#include <vector>

#include "fthss/pipeline.hpp"

namespace fthss {

/// columns t, re_p<i>, im_p<i> per observation point; %.17g, byte-stable
void write_timeseries_csv(const std::string& path, const std::vector<double>& t,
                          const std::vector<std::vector<cplx>>& u);

struct TimeSeries {
  std::vector<double> t;
  std::vector<std::vector<cplx>> u;
};
TimeSeries read_timeseries_csv(const std::string& path);

/// (t, |I1|, Re I1, Im I1, Re I2, Im I2, eps2) rows for decay studies
void write_decay_csv(const std::string& path, const std::vector<double>& t,
                     const std::vector<cplx>& i1, const std::vector<cplx>& i2,
                     const std::vector<double>& eps2);

/// grid snapshot: text header (nx, ny, bounds, t), then row-major re im pairs;
/// masked points carry the sentinel value 1e300
void write_snapshot(const std::string& path, int nx, int ny, double x0, double x1, double y0,
                    double y1, double t, const std::vector<cplx>& values,
                    const std::vector<char>& mask);

/// run manifest: config text, hash, seed, wall time, library versions
void write_manifest(const std::string& path, const SimulationConfig& cfg, double wall_seconds);

} // namespace fthss
