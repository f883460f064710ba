#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace fluxqpt {

/// Headered numeric table. Values are written with 17 significant digits so a
/// read-back reproduces every double exactly.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const;
};

void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

std::string format_double(double value);

}  // namespace fluxqpt
