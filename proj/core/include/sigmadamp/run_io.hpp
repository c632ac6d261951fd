#pragma once

// Run directories: config.json, manifest.json, norms.csv and binary field
// snapshots under snapshots/.

#include <string>
#include <vector>

#include "sigmadamp/config.hpp"
#include "sigmadamp/solver.hpp"

namespace sigmadamp {

std::string library_version();

/// Directory for a run: the explicit --out value if given, else cfg.output_dir,
/// else $SIGMADAMP_OUTPUT_ROOT/<default_name>, else ./runs/<default_name>.
std::string resolve_output_dir(const std::string& cli_out, const RunConfig& cfg, const std::string& default_name);

void write_norms_csv(const std::string& path, const std::vector<NormRow>& rows);
std::vector<NormRow> read_norms_csv(const std::string& path);

/// Mean of f over the torus.
double torus_mean(const Field& f, const GridSpec& grid);

// Writes config.json, norms.csv, manifest.json and (when stored) snapshots.
void write_run(const std::string& dir, const RunConfig& cfg, const Trajectory& traj, const Field& u1,
               const std::string& kind);

struct LoadedRun {
  RunConfig config;
  Trajectory trajectory;
  Field u0, u1;
};

/// Reads back a run directory, including snapshots when present.
LoadedRun load_run(const std::string& dir);

/// Appends one CSV row, writing `header` first when the file is new or empty.
void append_csv_row(const std::string& path, const std::string& header, const std::string& row);

}  // namespace sigmadamp
