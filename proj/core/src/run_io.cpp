#include "sigmadamp/run_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sigmadamp/analysis.hpp"
#include "sigmadamp/errors.hpp"
#include "sigmadamp/format.hpp"

namespace sigmadamp {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string snapshot_name(const char* what, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s_%06zu.bin", what, i);
  return buf;
}

}  // namespace

std::string library_version() { return SIGMADAMP_VERSION; }

std::string resolve_output_dir(const std::string& cli_out, const RunConfig& cfg, const std::string& default_name) {
  if (!cli_out.empty()) return cli_out;
  if (!cfg.output_dir.empty()) return cfg.output_dir;
  if (const char* root = std::getenv("SIGMADAMP_OUTPUT_ROOT"); root && *root) return (fs::path(root) / default_name).string();
  return (fs::path("runs") / default_name).string();
}

void write_norms_csv(const std::string& path, const std::vector<NormRow>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  const auto& cols = norm_columns();
  for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << cols[c];
  out << "\n";
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << g17(norm_value(r, cols[c]));
    out << "\n";
  }
  if (!out) throw IoError("failed writing " + path);
}

std::vector<NormRow> read_norms_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::string expected;
  for (const auto& c : norm_columns()) expected += (expected.empty() ? "" : ",") + c;
  if (line != expected) throw DataError(path + ": header must be " + expected);
  std::vector<NormRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::stringstream ss(line);
    std::string cell;
    double v[7];
    int k = 0;
    while (std::getline(ss, cell, ',')) {
      if (k >= 7 || !parse_number(cell, v[k])) throw DataError(path + ":" + std::to_string(lineno) + ": bad value");
      ++k;
    }
    if (k != 7) throw DataError(path + ":" + std::to_string(lineno) + ": expected 7 columns");
    rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6]});
  }
  return rows;
}

double torus_mean(const Field& f, const GridSpec& grid) {
  require_shape(f, grid, "torus mean");
  double s = 0.0;
  for (double v : f) s += v;
  return s / static_cast<double>(f.size());
}

void write_run(const std::string& dir, const RunConfig& cfg, const Trajectory& traj, const Field& u1,
               const std::string& kind) {
  fs::create_directories(dir);
  save_config(cfg, (fs::path(dir) / "config.json").string());
  write_norms_csv((fs::path(dir) / "norms.csv").string(), traj.rows);

  json m;
  m["version"] = library_version();
  m["kind"] = kind;
  m["dt"] = traj.dt;
  m["threshold"] = std::isinf(traj.threshold) ? json("inf") : json(traj.threshold);
  const double mean = torus_mean(u1, cfg.grid);
  m["u1_mean"] = mean;
  m["u1_mean_positive"] = mean > 0.0;
  m["warnings"] = traj.warnings;
  m["rows"] = traj.rows.size();
  if (traj.blowup) {
    m["verdict"] = "blow-up";
    m["blowup"] = {{"time", traj.blowup->time},
                   {"reason", to_string(traj.blowup->reason)},
                   {"amplitude", traj.blowup->amplitude}};
  } else {
    m["verdict"] = "completed";
    m["blowup"] = nullptr;
  }
  m["snapshots"] = traj.snapshots.size();
  {
    std::ofstream out(fs::path(dir) / "manifest.json");
    if (!out) throw IoError("cannot write manifest in " + dir);
    out << m.dump(2) << "\n";
  }

  if (!traj.snapshots.empty()) {
    const fs::path snaps = fs::path(dir) / "snapshots";
    fs::create_directories(snaps);
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
      const auto& s = traj.snapshots[i];
      write_field_binary((snaps / snapshot_name("u", i)).string(), s.u, traj.grid, s.time);
      write_field_binary((snaps / snapshot_name("ut", i)).string(), s.ut, traj.grid, s.time);
    }
  }
}

LoadedRun load_run(const std::string& dir) {
  LoadedRun run;
  run.config = load_config((fs::path(dir) / "config.json").string());
  auto [u0, u1] = initial_data(run.config);
  run.u0 = std::move(u0);
  run.u1 = std::move(u1);
  Trajectory& tr = run.trajectory;
  tr.grid = run.config.grid;
  tr.rows = read_norms_csv((fs::path(dir) / "norms.csv").string());
  for (const auto& r : tr.rows) tr.times.push_back(r.t);

  std::ifstream min(fs::path(dir) / "manifest.json");
  if (min) {
    json m = json::parse(min, nullptr, false);
    if (!m.is_discarded()) {
      if (m.contains("dt")) tr.dt = m["dt"].get<double>();
      if (m.contains("blowup") && m["blowup"].is_object()) {
        BlowupEvent ev;
        ev.time = m["blowup"]["time"].get<double>();
        ev.reason = m["blowup"]["reason"].get<std::string>() == "escape" ? BlowupReason::Escape : BlowupReason::NotFinite;
        ev.amplitude = m["blowup"]["amplitude"].get<double>();
        tr.blowup = ev;
      }
    }
  }

  const fs::path snaps = fs::path(dir) / "snapshots";
  for (std::size_t i = 0;; ++i) {
    const fs::path pu = snaps / snapshot_name("u", i);
    const fs::path pv = snaps / snapshot_name("ut", i);
    if (!fs::exists(pu) || !fs::exists(pv)) break;
    GridSpec g;
    double t = 0.0, t2 = 0.0;
    FieldState s;
    s.u = read_field_binary(pu.string(), g, t);
    if (g != tr.grid) throw ShapeError("snapshot " + pu.string() + " does not match the run grid");
    s.ut = read_field_binary(pv.string(), g, t2);
    s.time = t;
    tr.snapshots.push_back(std::move(s));
  }
  return run;
}

void append_csv_row(const std::string& path, const std::string& header, const std::string& row) {
  const bool fresh = !fs::exists(path) || fs::file_size(path) == 0;
  if (const fs::path parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
  std::ofstream out(path, std::ios::app);
  if (!out) throw IoError("cannot append to " + path);
  if (fresh) out << header << "\n";
  out << row << "\n";
}

}  // namespace sigmadamp
