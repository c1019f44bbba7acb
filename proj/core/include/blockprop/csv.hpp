#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace blockprop::csv {

/// A header-indexed CSV table. Fields are comma separated and unquoted;
/// surrounding whitespace is trimmed, blank lines and `#` comments skipped.
class Table {
 public:
  static Table read(const std::filesystem::path& path);
  static Table parse(std::string_view text, std::string source = "<memory>");

  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return rows_.size(); }
  bool has_column(std::string_view name) const;

  /// Cell by row and column name; throws DataError when the column is absent.
  const std::string& at(std::size_t row, std::string_view column) const;
  double number(std::size_t row, std::string_view column) const;
  /// 1-based line number of the row in the source, for error messages.
  std::size_t line_of(std::size_t row) const { return lines_[row]; }
  const std::string& source() const { return source_; }

 private:
  std::size_t column(std::string_view name) const;

  std::string source_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::size_t> lines_;
};

}  // namespace blockprop::csv
