#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "sigmadamp/errors.hpp"
#include "sigmadamp/format.hpp"
#include "sigmadamp/spectral.hpp"

namespace sigmadamp {

namespace {

constexpr const char* kMagic = "sigmadamp-field 1";

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  return __builtin_bswap64(v);
}

}  // namespace

void write_field_binary(const std::string& path, const Field& f, const GridSpec& grid, double time) {
  require_shape(f, grid, "write_field_binary");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << kMagic << '\n'
      << "n " << grid.n << '\n'
      << "N " << grid.N << '\n'
      << "L " << format_number(grid.L) << '\n'
      << "time " << format_number(time) << '\n'
      << "end\n";
  for (double v : f) {
    std::uint64_t bits = to_little(std::bit_cast<std::uint64_t>(v));
    out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
  }
  if (!out) throw IoError("failed writing " + path);
}

Field read_field_binary(const std::string& path, GridSpec& grid, double& time) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != kMagic) throw IoError(path + ": not a field file");
  bool have_n = false, have_N = false, have_L = false;
  time = 0.0;
  while (std::getline(in, line) && line != "end") {
    std::istringstream ls(line);
    std::string key, value;
    ls >> key >> value;
    double x = 0.0;
    if (!parse_number(value, x)) throw IoError(path + ": bad header line '" + line + "'");
    if (key == "n") grid.n = static_cast<int>(x), have_n = true;
    else if (key == "N") grid.N = static_cast<int>(x), have_N = true;
    else if (key == "L") grid.L = x, have_L = true;
    else if (key == "time") time = x;
  }
  if (line != "end" || !have_n || !have_N || !have_L) throw IoError(path + ": incomplete header");
  grid.validate();
  Field f(grid.size());
  for (double& v : f) {
    std::uint64_t bits = 0;
    if (!in.read(reinterpret_cast<char*>(&bits), sizeof bits)) throw IoError(path + ": truncated data");
    v = std::bit_cast<double>(to_little(bits));
  }
  return f;
}

void write_field_csv(const std::string& path, const Field& f, const GridSpec& grid) {
  if (grid.n != 1) throw ShapeError("CSV field export is only available for n = 1");
  require_shape(f, grid, "write_field_csv");
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "x,value\n";
  for (int i = 0; i < grid.N; ++i) out << format_number(grid.coordinate(i)) << ',' << format_number(f[i]) << '\n';
}

Field load_field(const std::string& path, const GridSpec& grid) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw IoError("cannot open " + path);
  std::string first;
  std::getline(probe, first);
  probe.close();
  if (first == kMagic) {
    GridSpec stored;
    double time = 0.0;
    Field f = read_field_binary(path, stored, time);
    if (stored != grid) throw ShapeError(path + ": stored grid differs from the run grid");
    return f;
  }
  if (grid.n != 1) throw ShapeError(path + ": CSV fields are only accepted for n = 1");
  std::ifstream in(path);
  Field f;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find_last_of(',');
    const std::string cell = comma == std::string::npos ? line : line.substr(comma + 1);
    double v = 0.0;
    if (!parse_number(cell, v)) {
      if (f.empty()) continue;  // header
      throw IoError(path + ": bad value '" + cell + "'");
    }
    f.push_back(v);
  }
  require_shape(f, grid, path.c_str());
  return f;
}

}  // namespace sigmadamp
