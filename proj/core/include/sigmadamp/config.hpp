#pragma once

// Run configuration: equation, modulus, grid, solver settings, initial data
// and per-experiment options, stored as one JSON document per run.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sigmadamp/grid.hpp"
#include "sigmadamp/params.hpp"
#include "sigmadamp/solver.hpp"

namespace sigmadamp {

enum class DataFamily { Zero, Gaussian, CosineBump, FromFile };

// Gaussian:   amplitude * exp(-|x - center|^2 / width^2)
// CosineBump: amplitude * cos^2(pi |x - center| / (2 width)) on |x - center| < width, else 0
struct DataDescriptor {
  DataFamily family = DataFamily::Zero;
  double amplitude = 1.0;
  double width = 1.0;
  std::array<double, 3> center{0.0, 0.0, 0.0};
  std::string path;  // FromFile

  bool operator==(const DataDescriptor&) const = default;
};

Field realize(const DataDescriptor& d, const GridSpec& grid);
/// Largest |x| at which |f| exceeds rel * max |f| (0 for the zero field).
double effective_radius(const Field& f, const GridSpec& grid, double rel = 1e-8);

struct FitSettings {
  std::string column = "L2_u";
  std::optional<double> t_min;  // default 10
  std::optional<double> t_max;  // default min(t_end, wrap time)
  double tolerance = 0.05;
  std::optional<double> predicted;  // default: linear prediction for the column
};

struct SweepSettings {
  std::vector<double> amplitudes;  // scales both data amplitudes
  std::vector<double> p;
  std::vector<double> delta;
};

struct RunConfig {
  EquationParams params;
  std::string mu = "lipschitz";
  GridSpec grid;
  SolverConfig solver;
  DataDescriptor u0;
  DataDescriptor u1;
  /// When set, both data are scaled so that data_norm(u0, u1) equals this value.
  std::optional<double> data_norm;
  std::uint64_t seed = 0;
  std::string output_dir;
  FitSettings fit;
  std::vector<double> scan_R;
  SweepSettings sweep;

  /// Validates every section; throws ConfigError naming the offending field.
  void validate() const;
};

std::string to_json_text(const RunConfig& cfg);
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
void save_config(const RunConfig& cfg, const std::string& path);

std::string to_string(Target t);       // "u" | "u_t"
std::string to_string(DataFamily f);   // "zero" | "gaussian" | "cosine-bump" | "file"

/// (u0, u1) on cfg.grid, rescaled when cfg.data_norm is set.
std::pair<Field, Field> initial_data(const RunConfig& cfg);

}  // namespace sigmadamp
