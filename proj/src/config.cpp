#include "fthss/config.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace fthss {

namespace {

std::vector<double> parse_numbers(const std::string& v, const std::string& key) {
  std::istringstream is(v);
  std::vector<double> out;
  double x;
  while (is >> x) out.push_back(x);
  if (out.empty()) throw ConfigError("config: key '" + key + "' expects numbers, got '" + v + "'");
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

struct RawConfig {
  std::map<std::string, std::string> kv;
  // incident assembled at the end (band and profile arrive separately)
  void set(const std::string& k, const std::string& v) { kv[k] = v; }
};

const char* kKnownKeys[] = {
    "curve",          "curve.params", "curve_file",  "n",         "incident.profile",
    "incident.direction", "incident.omega0", "incident.sigma2", "incident.chirp_s",
    "incident.chirp_h",   "incident.delay", "band", "frequencies", "depth", "eta",
    "points",         "times",        "tol",         "mode",      "seed",
    "workers",        "sketch_l",     "m_max",       "ie_tol",    "wavespeed",
    "i2",             "near_cutoff"};

bool known_key(const std::string& k) {
  for (const char* s : kKnownKeys)
    if (k == s) return true;
  return false;
}

SimulationConfig build(const RawConfig& raw) {
  SimulationConfig cfg;
  auto get = [&](const std::string& k) -> const std::string* {
    auto it = raw.kv.find(k);
    return it == raw.kv.end() ? nullptr : &it->second;
  };

  if (auto* v = get("curve")) cfg.curve = *v;
  if (auto* v = get("curve.params")) cfg.curve_params = parse_numbers(*v, "curve.params");
  if (auto* v = get("curve_file")) cfg.curve_file = *v;
  if (auto* v = get("n")) cfg.n_boundary = static_cast<int>(parse_numbers(*v, "n")[0]);
  if (auto* v = get("frequencies"))
    cfg.j_frequencies = static_cast<int>(parse_numbers(*v, "frequencies")[0]);
  if (auto* v = get("depth")) cfg.depth_h = parse_numbers(*v, "depth")[0];
  if (auto* v = get("eta")) {
    if (*v == "auto") {
      cfg.eta_auto = true;
    } else {
      cfg.eta_auto = false;
      cfg.eta = parse_numbers(*v, "eta")[0];
    }
  }
  if (auto* v = get("points")) {
    cfg.points.clear();
    std::string body = *v;
    for (auto& ch : body)
      if (ch == ';') ch = '\n';
    std::istringstream is(body);
    std::string line;
    while (std::getline(is, line)) {
      line = trim(line);
      if (line.empty()) continue;
      auto nums = parse_numbers(line, "points");
      if (nums.size() != 2) throw ConfigError("config: each point needs exactly x y");
      cfg.points.push_back({nums[0], nums[1]});
    }
    if (cfg.points.empty()) throw ConfigError("config: 'points' is empty");
  }
  if (auto* v = get("times")) {
    auto nums = parse_numbers(*v, "times");
    if (nums.size() != 3) throw ConfigError("config: 'times' expects begin end count");
    cfg.t_begin = nums[0];
    cfg.t_end = nums[1];
    cfg.nt = static_cast<int>(nums[2]);
  }
  if (auto* v = get("tol")) cfg.tol = parse_numbers(*v, "tol")[0];
  if (auto* v = get("mode")) {
    if (*v == "fth")
      cfg.mode = RunMode::FTH;
    else if (*v == "fth-ss")
      cfg.mode = RunMode::FTHSS;
    else
      throw ConfigError("config: mode must be 'fth' or 'fth-ss', got '" + *v + "'");
  }
  if (auto* v = get("seed")) cfg.seed = static_cast<uint64_t>(parse_numbers(*v, "seed")[0]);
  if (auto* v = get("workers")) cfg.workers = static_cast<int>(parse_numbers(*v, "workers")[0]);
  if (auto* v = get("sketch_l")) cfg.sketch_l = static_cast<int>(parse_numbers(*v, "sketch_l")[0]);
  if (auto* v = get("m_max")) cfg.m_max = static_cast<int>(parse_numbers(*v, "m_max")[0]);
  if (auto* v = get("ie_tol")) cfg.ie_tol = parse_numbers(*v, "ie_tol")[0];
  if (auto* v = get("wavespeed")) cfg.wavespeed = parse_numbers(*v, "wavespeed")[0];
  if (auto* v = get("near_cutoff")) cfg.near_cutoff = parse_numbers(*v, "near_cutoff")[0];
  if (auto* v = get("i2")) {
    if (*v == "auto")
      cfg.i2_quadrature_only = false;
    else if (*v == "quadrature-only")
      cfg.i2_quadrature_only = true;
    else
      throw ConfigError("config: i2 must be 'auto' or 'quadrature-only'");
  }

  // incident field: band is mandatory
  auto* band = get("band");
  if (!band) throw ConfigError("config: missing 'band = W1 W2'");
  auto bw = parse_numbers(*band, "band");
  if (bw.size() != 2 || !(bw[1] > bw[0]))
    throw ConfigError("config: 'band' expects W1 W2 with W1 < W2");

  Vec2 dir{0, 1};
  if (auto* v = get("incident.direction")) {
    auto nums = parse_numbers(*v, "incident.direction");
    if (nums.size() != 2) throw ConfigError("config: incident.direction expects two numbers");
    const double nrm = std::hypot(nums[0], nums[1]);
    if (nrm == 0) throw ConfigError("config: incident.direction must be nonzero");
    dir = {nums[0] / nrm, nums[1] / nrm};
  }
  std::string profile = "gaussian";
  if (auto* v = get("incident.profile")) profile = *v;
  if (profile == "gaussian") {
    double w0 = 0.5 * (bw[0] + bw[1]), s2 = 1.0;
    if (auto* v = get("incident.omega0")) w0 = parse_numbers(*v, "incident.omega0")[0];
    if (auto* v = get("incident.sigma2")) s2 = parse_numbers(*v, "incident.sigma2")[0];
    cfg.incident = make_gaussian_incidence(dir, w0, s2, bw[0], bw[1]);
  } else if (profile == "chirp") {
    double s = 40.0, h = 30.0;
    if (auto* v = get("incident.chirp_s")) s = parse_numbers(*v, "incident.chirp_s")[0];
    if (auto* v = get("incident.chirp_h")) h = parse_numbers(*v, "incident.chirp_h")[0];
    cfg.incident = make_chirp_incidence(dir, s, h, bw[0], bw[1]);
  } else {
    throw ConfigError("config: incident.profile must be 'gaussian' or 'chirp'");
  }
  if (auto* v = get("incident.delay")) {
    cfg.incident.delay = parse_numbers(*v, "incident.delay")[0];
    if (!cfg.incident.gaussian()) cfg.incident.t_inc += cfg.incident.delay;
  }
  return cfg;
}

} // namespace

SimulationConfig parse_config_text(const std::string& text) {
  RawConfig raw;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!known_key(key))
      throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    raw.set(key, value);
  }
  return build(raw);
}

SimulationConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  std::string text = ss.str();
  for (const auto& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos) throw ConfigError("override must be key=value: " + ov);
    text += "\n" + ov.substr(0, eq) + " = " + ov.substr(eq + 1) + "\n";
  }
  return parse_config_text(text);
}

void apply_override(SimulationConfig& cfg, const std::string& key, const std::string& value) {
  std::string text = to_config_text(cfg);
  text += "\n" + key + " = " + value + "\n";
  cfg = parse_config_text(text);
}

std::string to_config_text(const SimulationConfig& cfg) {
  std::ostringstream os;
  os.precision(17);
  os << "curve = " << cfg.curve << "\n";
  if (!cfg.curve_params.empty()) {
    os << "curve.params =";
    for (double v : cfg.curve_params) os << " " << v;
    os << "\n";
  }
  if (!cfg.curve_file.empty()) os << "curve_file = " << cfg.curve_file << "\n";
  os << "n = " << cfg.n_boundary << "\n";
  os << "band = " << cfg.incident.w1 << " " << cfg.incident.w2 << "\n";
  os << "incident.direction = " << cfg.incident.direction.x << " " << cfg.incident.direction.y
     << "\n";
  if (cfg.incident.gaussian()) {
    os << "incident.profile = gaussian\n";
    os << "incident.omega0 = " << cfg.incident.omega0 << "\n";
    os << "incident.sigma2 = " << cfg.incident.sigma2 << "\n";
  } else {
    os << "incident.profile = chirp\n";
    os << "incident.chirp_s = " << cfg.incident.chirp_s << "\n";
    os << "incident.chirp_h = " << cfg.incident.chirp_h << "\n";
  }
  if (cfg.incident.delay != 0.0) os << "incident.delay = " << cfg.incident.delay << "\n";
  os << "frequencies = " << cfg.j_frequencies << "\n";
  os << "depth = " << cfg.depth_h << "\n";
  if (cfg.eta_auto)
    os << "eta = auto\n";
  else
    os << "eta = " << cfg.eta << "\n";
  os << "points = ";
  for (size_t q = 0; q < cfg.points.size(); ++q)
    os << cfg.points[q].x << " " << cfg.points[q].y << (q + 1 < cfg.points.size() ? " ; " : "");
  os << "\n";
  os << "times = " << cfg.t_begin << " " << cfg.t_end << " " << cfg.nt << "\n";
  os << "tol = " << cfg.tol << "\n";
  os << "mode = " << (cfg.mode == RunMode::FTH ? "fth" : "fth-ss") << "\n";
  os << "i2 = " << (cfg.i2_quadrature_only ? "quadrature-only" : "auto") << "\n";
  os << "seed = " << cfg.seed << "\n";
  os << "workers = " << cfg.workers << "\n";
  os << "sketch_l = " << cfg.sketch_l << "\n";
  os << "m_max = " << cfg.m_max << "\n";
  os << "ie_tol = " << cfg.ie_tol << "\n";
  os << "wavespeed = " << cfg.wavespeed << "\n";
  os << "near_cutoff = " << cfg.near_cutoff << "\n";
  return os.str();
}

uint64_t config_hash(const SimulationConfig& cfg) {
  const std::string text = to_config_text(cfg);
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

} // namespace fthss
