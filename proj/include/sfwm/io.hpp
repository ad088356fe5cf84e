#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace sfwm::io {

/// Writes through a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

/// Rounds to the nine significant digits used for every emitted number.
double round9(double value);

/// Comma-separated table with a header row; numbers via format_number.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(const std::vector<double>& values);
  void add_row(std::vector<std::string> cells);

  std::size_t rows() const noexcept { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct CsvRow {
  std::size_t line = 0;
  std::vector<std::string> cells;
};

/// Splits a simple CSV (no quoting); skips blank and '#' lines.
std::vector<CsvRow> read_csv(const std::filesystem::path& path);

}  // namespace sfwm::io
