#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace deblog {

/// Fixed 17-significant-digit rendering; byte-identical across runs.
std::string format_real(double v);

/// Minimal CSV writer: header row, then rows of preformatted cells.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> cells);
  std::size_t rows() const { return rows_.size(); }
  void write(std::ostream& out) const;
  void write_file(const std::string& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace deblog
