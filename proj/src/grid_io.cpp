#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "gapcert/errors.hpp"
#include "gapcert/pde.hpp"

namespace gapcert {

namespace {

template <class T>
void put(std::ofstream& os, T v) {
  static_assert(std::endian::native == std::endian::little, "little-endian host expected");
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::ifstream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw Error(ErrorKind::invalid_input, "truncated grid file");
  return v;
}

}  // namespace

void write_grid_binary(const std::string& path, const GridInfo& grid, const std::vector<double>& values) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::config_error, "cannot write " + path);
  put<std::int32_t>(os, grid.dim);
  for (int i = 0; i < grid.dim; ++i) put<std::int64_t>(os, grid.nodes[i]);
  put<double>(os, grid.h);
  for (int i = 0; i < grid.dim; ++i) put<double>(os, grid.origin[i]);
  for (double v : values) put<double>(os, v);
}

std::vector<double> read_grid_binary(const std::string& path, GridInfo& grid) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorKind::config_error, "cannot read " + path);
  grid = GridInfo{};
  grid.dim = get<std::int32_t>(is);
  if (grid.dim < 1 || grid.dim > 3) throw Error(ErrorKind::invalid_input, "bad grid dimension in " + path);
  for (int i = 0; i < grid.dim; ++i) grid.nodes[i] = get<std::int64_t>(is);
  grid.h = get<double>(is);
  for (int i = 0; i < grid.dim; ++i) grid.origin[i] = get<double>(is);
  std::vector<double> values(grid.total());
  for (double& v : values) v = get<double>(is);
  return values;
}

void write_grid_csv(const std::string& path, const GridInfo& grid, const std::vector<double>& values) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw Error(ErrorKind::config_error, "cannot write " + path);
  static const char* names[3] = {"x", "y", "z"};
  for (int i = 0; i < grid.dim; ++i) std::fprintf(f, "%s,", names[i]);
  std::fprintf(f, "value\n");
  for (long node = 0; node < grid.total(); ++node) {
    const Point x = grid.position(node);
    for (int i = 0; i < grid.dim; ++i) std::fprintf(f, "%.17g,", x[i]);
    std::fprintf(f, "%.17g\n", values[node]);
  }
  std::fclose(f);
}

}  // namespace gapcert
