#pragma once

// Small text helpers shared by the store files, rule files and the CLI.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dwb::text {

using CsvRow = std::vector<std::string>;

/// RFC 4180 style parsing: quoted fields may contain commas, quotes ("")
/// and newlines. A trailing newline does not produce an empty row.
std::vector<CsvRow> parse_csv(std::string_view content);

/// Quotes a field only when it needs it.
std::string csv_field(std::string_view field);
std::string csv_line(const CsvRow& row);

std::string trim(std::string_view s);

/// Whole-string numeric parse; surrounding blanks allowed, anything else is
/// a failure.
std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

/// Shortest decimal text that parses back to the same double.
std::string format_shortest(double value);

/// printf("%.*g") equivalent, used for the 15-significant-digit reports.
std::string format_significant(double value, int digits);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace dwb::text
