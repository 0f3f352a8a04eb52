#pragma once

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <string>
#include <string_view>
#include <vector>

#include "tnn/error.hpp"

namespace tnn::detail {

// Plain comma-separated rows: no quoting, blank lines skipped, CR stripped,
// cells trimmed of surrounding spaces.
inline std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) {
      std::vector<std::string> cells;
      std::size_t start = 0;
      while (true) {
        const std::size_t comma = line.find(',', start);
        std::string_view cell = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        while (!cell.empty() && cell.front() == ' ') cell.remove_prefix(1);
        while (!cell.empty() && cell.back() == ' ') cell.remove_suffix(1);
        cells.emplace_back(cell);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
      rows.push_back(std::move(cells));
    }
    pos = eol + 1;
  }
  return rows;
}

inline double parse_double(const std::string& cell, const std::string& where) {
  if (cell.empty()) throw Error(ErrorCode::kParseError, where + ": empty number");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(cell.c_str(), &end);
  if (end != cell.c_str() + cell.size() || errno == ERANGE || !std::isfinite(v)) {
    throw Error(ErrorCode::kParseError, where + ": '" + cell + "' is not a finite number");
  }
  return v;
}

}  // namespace tnn::detail
