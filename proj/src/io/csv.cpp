#include "vitalchirp/io/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "vitalchirp/error.hpp"

namespace vitalchirp::io {
namespace {

void write_all(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream s(line);
  while (std::getline(s, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

std::string format_number(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void write_csv(const std::filesystem::path& path, const std::vector<Column>& columns) {
  std::string text;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) text += ',';
    text += columns[c].name;
  }
  text += '\n';
  const std::size_t rows = columns.empty() ? 0 : columns.front().values.size();
  for (const auto& col : columns) {
    if (col.values.size() != rows) {
      throw ValidationError("csv: column '" + col.name + "' length differs from the first column");
    }
  }
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) text += ',';
      text += format_number(columns[c].values[r]);
    }
    text += '\n';
  }
  write_all(path, text);
}

std::vector<Column> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw IoError(path.string() + ": empty file, missing header");
  std::vector<Column> cols;
  for (auto& name : split(line)) cols.push_back({name, {}});

  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != cols.size()) {
      throw IoError(path.string() + ": line " + std::to_string(lineno) + " has " +
                    std::to_string(cells.size()) + " fields, expected " +
                    std::to_string(cols.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      double v = 0.0;
      const auto& s = cells[c];
      const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
      if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
        throw IoError(path.string() + ": line " + std::to_string(lineno) + " field '" +
                      cols[c].name + "' is not a number");
      }
      cols[c].values.push_back(v);
    }
  }
  return cols;
}

std::string format_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows) {
  std::string text;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c) text += ',';
      text += cells[c];
    }
    text += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return text;
}

void write_table(const std::filesystem::path& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
  write_all(path, format_table(header, rows));
}

}  // namespace vitalchirp::io
