#pragma once

/**
 * @file report.hpp
 * @brief Tabular reports with a fixed column order, rendered as CSV or as a
 * JSON array of flat objects. Floating values use 12 significant digits in
 * both renderings.
 */

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace fermatq {

using Cell = std::variant<std::monostate, std::int64_t, std::uint64_t, double, std::string>;

enum class OutputFormat { kCsv, kJson };

class Report {
 public:
  explicit Report(std::vector<std::string> columns);

  /// Throws ArgumentError when the row width differs from the column count.
  void add_row(std::vector<Cell> row);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }

  std::string to_csv() const;
  std::string to_json() const;
  std::string render(OutputFormat format) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

/// printf "%.12g"; non-finite values render as "nan", "inf", "-inf".
std::string format_double(double v);
std::string format_cell(const Cell& cell);

/// Header plus string rows, as read back from CSV.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Minimal reader for the CSV this module writes (no quoting needed).
CsvTable parse_csv(std::string_view text);

/// Writes to a sibling temporary file and renames it into place, so the
/// target either keeps its old content or receives all of `content`.
void write_file_atomically(const std::filesystem::path& path, std::string_view content);

}  // namespace fermatq
