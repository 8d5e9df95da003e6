#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace vitalchirp::io {

struct Column {
  std::string name;
  std::vector<double> values;
};

// Shortest round-trip decimal form of v.
std::string format_number(double v);

// Writes a header line and one row per index; all columns must be the same length.
void write_csv(const std::filesystem::path& path, const std::vector<Column>& columns);

// Numeric CSV with a header line. Errors name the file and line.
std::vector<Column> read_csv(const std::filesystem::path& path);

// Text table: header plus rows of already-formatted cells.
void write_table(const std::filesystem::path& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows);
std::string format_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows);

}  // namespace vitalchirp::io
