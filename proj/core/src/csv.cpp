#include "fluxqpt/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fluxqpt/error.hpp"

namespace fluxqpt {

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw Error(ErrorCategory::io, "CSV has no column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCategory::io, "cannot open " + path.string() + " for writing");
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    out << (c ? "," : "") << table.header[c];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) {
      throw Error(ErrorCategory::io, "CSV row width does not match header in " + path.string());
    }
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_double(row[c]);
    out << '\n';
  }
  if (!out) throw Error(ErrorCategory::io, "write failed for " + path.string());
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::io, "cannot open " + path.string());
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCategory::io, path.string() + " is empty");
  {
    std::stringstream header(line);
    std::string cell;
    while (std::getline(header, cell, ',')) table.header.push_back(cell);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) {
        throw Error(ErrorCategory::io, "non-numeric CSV cell '" + cell + "' in " + path.string());
      }
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace fluxqpt
