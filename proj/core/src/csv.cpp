#include "blockprop/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <boost/algorithm/string/split.hpp>
#include <boost/algorithm/string/trim.hpp>

#include "blockprop/error.hpp"

namespace blockprop::csv {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  boost::algorithm::split(fields, line, [](char c) { return c == ','; });
  for (auto& f : fields) boost::algorithm::trim(f);
  return fields;
}

}  // namespace

Table Table::read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.string());
}

Table Table::parse(std::string_view text, std::string source) {
  Table table;
  table.source_ = std::move(source);
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string trimmed = boost::algorithm::trim_copy(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    auto fields = split_fields(trimmed);
    if (table.header_.empty()) {
      table.header_ = std::move(fields);
      continue;
    }
    if (fields.size() != table.header_.size()) {
      throw DataError(table.source_ + ":" + std::to_string(line_no) +
                      ": expected " + std::to_string(table.header_.size()) +
                      " fields, got " + std::to_string(fields.size()));
    }
    table.rows_.push_back(std::move(fields));
    table.lines_.push_back(line_no);
  }
  if (table.header_.empty()) throw DataError(table.source_ + ": empty CSV");
  return table;
}

bool Table::has_column(std::string_view name) const {
  for (const auto& h : header_) {
    if (h == name) return true;
  }
  return false;
}

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (header_[i] == name) return i;
  }
  throw DataError(source_ + ": missing column '" + std::string(name) + "'");
}

const std::string& Table::at(std::size_t row, std::string_view name) const {
  return rows_.at(row)[column(name)];
}

double Table::number(std::size_t row, std::string_view name) const {
  const std::string& cell = at(row, name);
  double value = 0.0;
  const auto* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw DataError(source_ + ":" + std::to_string(lines_[row]) + ": '" +
                    std::string(name) + "' is not a number: '" + cell + "'");
  }
  return value;
}

}  // namespace blockprop::csv
