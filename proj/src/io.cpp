#include "blowup/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace blowup::io {

namespace {

template <class T>
void put_le(std::ofstream& os, T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
  os.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get_le(std::ifstream& is) {
  unsigned char b[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(b), sizeof(T))) throw std::runtime_error("truncated field file");
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, mode | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

}  // namespace

void write_field_bin(const std::filesystem::path& path, const Field& f) {
  std::ofstream os = open_out(path, std::ios::out | std::ios::binary);
  os.write(field_magic, sizeof(field_magic));
  put_le(os, static_cast<std::uint32_t>(f.nr()));
  put_le(os, static_cast<std::uint32_t>(f.nt()));
  for (double x : f.v) put_le(os, x);
}

RawField read_field_bin(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  char magic[8];
  if (!is.read(magic, 8) || std::memcmp(magic, field_magic, 8) != 0)
    throw std::runtime_error("bad field file magic in " + path.string());
  RawField r;
  r.nr = get_le<std::uint32_t>(is);
  r.nt = get_le<std::uint32_t>(is);
  r.values.resize(static_cast<std::size_t>(r.nr) * r.nt);
  for (double& x : r.values) x = get_le<double>(is);
  return r;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size()) throw std::invalid_argument("csv header/column count mismatch");
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns)
    if (c.size() != rows) throw std::invalid_argument("csv columns differ in length");
  std::ofstream os = open_out(path);
  for (std::size_t k = 0; k < header.size(); ++k) os << (k ? "," : "") << header[k];
  os << '\n';
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t k = 0; k < columns.size(); ++k) os << (k ? "," : "") << format_double(columns[k][r]);
    os << '\n';
  }
}

void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream os = open_out(path);
  os << j.dump(2) << '\n';
}

void write_grid(const std::filesystem::path& dir, const Grid2D& g) {
  write_csv(dir / "grid_radial.csv", {"xi", "z"}, {g.xi, g.z});
  write_csv(dir / "grid_theta.csv", {"theta"}, {g.theta});
}

}  // namespace blowup::io
