#include "sigmadamp/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "sigmadamp/analysis.hpp"
#include "sigmadamp/errors.hpp"
#include "sigmadamp/modulus.hpp"
#include "sigmadamp/norms.hpp"

namespace sigmadamp {

using json = nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& section) {
  if (!j.is_object()) throw ConfigError(section + ": expected an object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw ConfigError(section + ": unknown key '" + key + "'");
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& section) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(section + "." + key + ": " + e.what());
  }
}

template <class T>
void read_optional(const json& j, const char* key, std::optional<T>& out, const std::string& section) {
  if (!j.contains(key) || j.at(key).is_null()) return;
  T v{};
  read(j, key, v, section);
  out = v;
}

template <class T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

Target parse_target(const std::string& s) {
  if (s == "u") return Target::OnU;
  if (s == "u_t") return Target::OnUt;
  throw ConfigError("params.target: expected \"u\" or \"u_t\", got \"" + s + "\"");
}

DataFamily parse_family(const std::string& s) {
  if (s == "zero") return DataFamily::Zero;
  if (s == "gaussian") return DataFamily::Gaussian;
  if (s == "cosine-bump") return DataFamily::CosineBump;
  if (s == "file") return DataFamily::FromFile;
  throw ConfigError("data family: expected zero, gaussian, cosine-bump or file, got \"" + s + "\"");
}

json data_json(const DataDescriptor& d) {
  json j{{"family", to_string(d.family)}};
  if (d.family == DataFamily::Zero) return j;
  if (d.family == DataFamily::FromFile) {
    j["path"] = d.path;
    return j;
  }
  j["amplitude"] = d.amplitude;
  j["width"] = d.width;
  j["center"] = d.center;
  return j;
}

DataDescriptor data_from(const json& j, const std::string& section) {
  reject_unknown(j, {"family", "amplitude", "width", "center", "path"}, section);
  DataDescriptor d;
  std::string family = "zero";
  read(j, "family", family, section);
  d.family = parse_family(family);
  read(j, "amplitude", d.amplitude, section);
  read(j, "width", d.width, section);
  read(j, "path", d.path, section);
  if (j.contains("center")) {
    std::vector<double> c;
    read(j, "center", c, section);
    if (c.size() > 3) throw ConfigError(section + ".center: at most three coordinates");
    d.center = {0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < c.size(); ++i) d.center[i] = c[i];
  }
  return d;
}

void validate_data(const DataDescriptor& d, const std::string& section) {
  if (d.family == DataFamily::FromFile && d.path.empty()) throw ConfigError(section + ".path: required for file data");
  if ((d.family == DataFamily::Gaussian || d.family == DataFamily::CosineBump) && !(d.width > 0.0))
    throw ConfigError(section + ".width: must be positive");
  if (!std::isfinite(d.amplitude)) throw ConfigError(section + ".amplitude: must be finite");
}

template <class F>
void rethrow_as_config(const std::string& section, F&& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    if (std::string(e.what()).rfind(section, 0) == 0) throw;
    throw ConfigError(section + ": " + e.what());
  } catch (const Error& e) {
    throw ConfigError(section + ": " + e.what());
  }
}

}  // namespace

std::string to_string(Target t) { return t == Target::OnU ? "u" : "u_t"; }

std::string to_string(DataFamily f) {
  switch (f) {
    case DataFamily::Zero:
      return "zero";
    case DataFamily::Gaussian:
      return "gaussian";
    case DataFamily::CosineBump:
      return "cosine-bump";
    case DataFamily::FromFile:
      return "file";
  }
  return "zero";
}

Field realize(const DataDescriptor& d, const GridSpec& grid) {
  Field f(grid.size(), 0.0);
  if (d.family == DataFamily::Zero) return f;
  if (d.family == DataFamily::FromFile) return load_field(d.path, grid);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto idx = grid.unflatten(i);
    double r2 = 0.0;
    for (int k = 0; k < grid.n; ++k) {
      const double x = grid.coordinate(idx[k]) - d.center[k];
      r2 += x * x;
    }
    if (d.family == DataFamily::Gaussian) {
      f[i] = d.amplitude * std::exp(-r2 / (d.width * d.width));
    } else {
      const double r = std::sqrt(r2);
      if (r < d.width) {
        const double c = std::cos(M_PI * r / (2.0 * d.width));
        f[i] = d.amplitude * c * c;
      }
    }
  }
  return f;
}

double effective_radius(const Field& f, const GridSpec& grid, double rel) {
  require_shape(f, grid, "effective radius");
  double peak = 0.0;
  for (double v : f) peak = std::max(peak, std::fabs(v));
  if (peak == 0.0) return 0.0;
  double r = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (std::fabs(f[i]) > rel * peak) r = std::max(r, grid.radius(i));
  return r;
}

void RunConfig::validate() const {
  rethrow_as_config("params", [&] { params.validate(); });
  rethrow_as_config("mu", [&] { ModulusSpec::parse(mu); });
  rethrow_as_config("grid", [&] { grid.validate(); });
  rethrow_as_config("solver", [&] { solver.validate(); });
  if (grid.n != params.n)
    throw ConfigError("grid.n: " + std::to_string(grid.n) + " differs from params.n = " + std::to_string(params.n));
  validate_data(u0, "data.u0");
  validate_data(u1, "data.u1");
  if (data_norm && !(*data_norm > 0.0)) throw ConfigError("data.data_norm: must be positive");
  rethrow_as_config("fit.column", [&] { norm_value(NormRow{}, fit.column); });
  if (!(fit.tolerance > 0.0)) throw ConfigError("fit.tolerance: must be positive");
  if (fit.t_min && fit.t_max && !(*fit.t_min < *fit.t_max)) throw ConfigError("fit: t_min must be below t_max");
  for (std::size_t i = 0; i < scan_R.size(); ++i)
    if (!(scan_R[i] > 0.0) || (i > 0 && !(scan_R[i] > scan_R[i - 1])))
      throw ConfigError("scan.R: values must be positive and increasing");
  for (double a : sweep.amplitudes)
    if (!std::isfinite(a)) throw ConfigError("sweep.amplitudes: values must be finite");
}

std::string to_json_text(const RunConfig& c) {
  json j;
  j["params"] = {{"sigma", c.params.sigma}, {"delta", c.params.delta}, {"m", c.params.m},
                 {"n", c.params.n},         {"p", c.params.p},         {"target", to_string(c.params.target)},
                 {"r", c.params.r}};
  j["mu"] = c.mu;
  j["grid"] = {{"n", c.grid.n}, {"N", c.grid.N}, {"L", c.grid.L}};
  j["solver"] = {{"dt", c.solver.dt},
                 {"t_end", c.solver.t_end},
                 {"dealias_fraction", c.solver.dealias_fraction},
                 {"blowup_threshold", c.solver.blowup_threshold},
                 {"snapshot_stride", c.solver.snapshot_stride},
                 {"store_fields", c.solver.store_fields},
                 {"nonlinear", c.solver.nonlinear}};
  j["data"] = {{"u0", data_json(c.u0)}, {"u1", data_json(c.u1)}, {"data_norm", optional_json(c.data_norm)}};
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  j["fit"] = {{"column", c.fit.column},
              {"t_min", optional_json(c.fit.t_min)},
              {"t_max", optional_json(c.fit.t_max)},
              {"tolerance", c.fit.tolerance},
              {"predicted", optional_json(c.fit.predicted)}};
  j["scan"] = {{"R", c.scan_R}};
  j["sweep"] = {{"amplitudes", c.sweep.amplitudes}, {"p", c.sweep.p}, {"delta", c.sweep.delta}};
  return j.dump(2) + "\n";
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(j, {"params", "mu", "grid", "solver", "data", "seed", "output_dir", "fit", "scan", "sweep"}, "config");
  RunConfig c;
  if (j.contains("params")) {
    const json& p = j["params"];
    reject_unknown(p, {"sigma", "delta", "m", "n", "p", "target", "r"}, "params");
    read(p, "sigma", c.params.sigma, "params");
    read(p, "delta", c.params.delta, "params");
    read(p, "m", c.params.m, "params");
    read(p, "n", c.params.n, "params");
    read(p, "p", c.params.p, "params");
    read(p, "r", c.params.r, "params");
    std::string target = "u";
    read(p, "target", target, "params");
    c.params.target = parse_target(target);
    c.grid.n = c.params.n;
  }
  read(j, "mu", c.mu, "config");
  if (j.contains("grid")) {
    const json& g = j["grid"];
    reject_unknown(g, {"n", "N", "L"}, "grid");
    read(g, "n", c.grid.n, "grid");
    read(g, "N", c.grid.N, "grid");
    read(g, "L", c.grid.L, "grid");
  }
  if (j.contains("solver")) {
    const json& s = j["solver"];
    reject_unknown(s, {"dt", "t_end", "dealias_fraction", "blowup_threshold", "snapshot_stride", "store_fields", "nonlinear"},
                   "solver");
    read(s, "dt", c.solver.dt, "solver");
    read(s, "t_end", c.solver.t_end, "solver");
    read(s, "dealias_fraction", c.solver.dealias_fraction, "solver");
    read(s, "blowup_threshold", c.solver.blowup_threshold, "solver");
    read(s, "snapshot_stride", c.solver.snapshot_stride, "solver");
    read(s, "store_fields", c.solver.store_fields, "solver");
    read(s, "nonlinear", c.solver.nonlinear, "solver");
  }
  if (j.contains("data")) {
    const json& d = j["data"];
    reject_unknown(d, {"u0", "u1", "data_norm"}, "data");
    if (d.contains("u0")) c.u0 = data_from(d["u0"], "data.u0");
    if (d.contains("u1")) c.u1 = data_from(d["u1"], "data.u1");
    read_optional(d, "data_norm", c.data_norm, "data");
  }
  read(j, "seed", c.seed, "config");
  read(j, "output_dir", c.output_dir, "config");
  if (j.contains("fit")) {
    const json& f = j["fit"];
    reject_unknown(f, {"column", "t_min", "t_max", "tolerance", "predicted"}, "fit");
    read(f, "column", c.fit.column, "fit");
    read_optional(f, "t_min", c.fit.t_min, "fit");
    read_optional(f, "t_max", c.fit.t_max, "fit");
    read(f, "tolerance", c.fit.tolerance, "fit");
    read_optional(f, "predicted", c.fit.predicted, "fit");
  }
  if (j.contains("scan")) {
    reject_unknown(j["scan"], {"R"}, "scan");
    read(j["scan"], "R", c.scan_R, "scan");
  }
  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    reject_unknown(s, {"amplitudes", "p", "delta"}, "sweep");
    read(s, "amplitudes", c.sweep.amplitudes, "sweep");
    read(s, "p", c.sweep.p, "sweep");
    read(s, "delta", c.sweep.delta, "sweep");
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void save_config(const RunConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write config " + path);
  out << to_json_text(cfg);
  if (!out) throw IoError("failed writing config " + path);
}

std::pair<Field, Field> initial_data(const RunConfig& cfg) {
  Field u0 = realize(cfg.u0, cfg.grid);
  Field u1 = realize(cfg.u1, cfg.grid);
  if (cfg.data_norm) {
    const double current = data_norm(u0, u1, cfg.params.m, cfg.params.r, cfg.grid);
    if (!(current > 0.0)) throw ConfigError("data.data_norm: cannot rescale zero data");
    const double scale = *cfg.data_norm / current;
    for (double& v : u0) v *= scale;
    for (double& v : u1) v *= scale;
  }
  return {std::move(u0), std::move(u1)};
}

}  // namespace sigmadamp
