#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "blowup/grid.hpp"

namespace blowup::io {

using Json = nlohmann::ordered_json;

// field.bin layout: 8-byte magic, uint32 nr, uint32 nt (little-endian), then
// nr * nt little-endian float64 values, radial-major.
inline constexpr char field_magic[8] = {'B', 'L', 'W', 'F', 'L', 'D', '0', '1'};

void write_field_bin(const std::filesystem::path& path, const Field& f);

struct RawField {
  std::uint32_t nr = 0;
  std::uint32_t nt = 0;
  std::vector<double> values;
};
RawField read_field_bin(const std::filesystem::path& path);

// Columns of equal length; numbers printed with 17 significant digits so the
// output is a pure function of the values.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

void write_json(const std::filesystem::path& path, const Json& j);

// Grid nodes as two CSV files: xi,z and theta.
void write_grid(const std::filesystem::path& dir, const Grid2D& g);

std::string format_double(double x);

}  // namespace blowup::io
