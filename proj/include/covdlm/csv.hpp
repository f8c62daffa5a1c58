#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "covdlm/matops.hpp"

namespace covdlm {

/// N x p numeric panel, one observation vector per row in time order.
struct Panel {
  std::vector<std::string> header;  // empty when the file has none
  std::vector<Vector> rows;

  int columns() const noexcept {
    return rows.empty() ? static_cast<int>(header.size()) : static_cast<int>(rows.front().size());
  }
};

/// Comma-delimited, decimal point. The first row is a header when none of
/// its cells parse as numbers. Blank lines are skipped. Throws ParseError
/// with the 1-based line and column of the offending cell, and
/// InsufficientData when no data rows remain.
Panel read_panel(std::istream& in);
Panel read_panel_file(const std::filesystem::path& path);

void write_panel(std::ostream& out, const Panel& panel);

}  // namespace covdlm
