#include "covdlm/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string_view>

#include "covdlm/errors.hpp"
#include "covdlm/report.hpp"

namespace covdlm {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::optional<double> parse_number(std::string_view cell) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty() ||
      !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

}  // namespace

Panel read_panel(std::istream& in) {
  Panel panel;
  std::string line;
  std::size_t line_no = 0;
  bool first_row = true;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (first_row) {
      first_row = false;
      width = cells.size();
      bool any_number = false;
      for (auto c : cells) any_number = any_number || parse_number(c).has_value();
      if (!any_number) {
        for (auto c : cells) panel.header.emplace_back(c);
        continue;
      }
    }
    if (cells.size() != width) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": expected " +
                                             std::to_string(width) + " columns, got " +
                                             std::to_string(cells.size()));
    }
    Vector row(static_cast<Index>(width));
    for (std::size_t j = 0; j < cells.size(); ++j) {
      const auto value = parse_number(cells[j]);
      if (!value) {
        throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ", column " +
                                               std::to_string(j + 1) + ": '" +
                                               std::string(cells[j]) + "' is not a number");
      }
      row(static_cast<Index>(j)) = *value;
    }
    panel.rows.push_back(std::move(row));
  }
  if (panel.rows.empty()) {
    throw Error(ErrorKind::InsufficientData, "the panel has no data rows");
  }
  return panel;
}

Panel read_panel_file(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  return read_panel(file);
}

void write_panel(std::ostream& out, const Panel& panel) {
  for (std::size_t j = 0; j < panel.header.size(); ++j) {
    out << (j ? "," : "") << panel.header[j];
  }
  if (!panel.header.empty()) out << '\n';
  for (const auto& row : panel.rows) {
    for (Index j = 0; j < row.size(); ++j) out << (j ? "," : "") << format_number(row(j));
    out << '\n';
  }
}

}  // namespace covdlm
