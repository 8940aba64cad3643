#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace stein {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by name; throws ParseError when absent.
  std::size_t column(std::string_view name) const;
};

/// Header row plus records; double-quoted fields may contain commas,
/// doubled quotes and newlines. Accepts '\n' and "\r\n" line endings.
CsvTable parse_csv(std::string_view text);

/// '\n' line endings; fields quoted only when needed.
std::string write_csv(const CsvTable& table);

/// Shortest decimal that round-trips; "inf", "-inf" and "nan" otherwise.
std::string format_number(double value);

/// Strict numeric parse of a whole field; throws ParseError.
double parse_number(std::string_view field);

}  // namespace stein
