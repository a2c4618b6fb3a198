#pragma once

#include <string>
#include <vector>

namespace jmgt {

/// Decimal float with 17 significant digits.
std::string format_real(double value);

/// In-memory CSV table; cells are already formatted.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  void add_row(const std::vector<double>& row);
  std::string to_string() const;
};

/// Writes the table with LF line endings; throws Error on I/O failure.
void write_csv(const std::string& path, const CsvTable& table);

}  // namespace jmgt
