#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace esrinet::csv {

/// A parsed CSV file: header plus data rows. `line` holds the 1-based line
/// number of each row in the source file, for error messages.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line;
};

/// Parses comma-separated text. Double-quoted fields may contain commas and
/// doubled quotes. Blank lines are skipped; a UTF-8 BOM is ignored.
Table parse(std::string_view text);

/// Reads and parses a file. Throws Error{kMissingFile} when it does not exist.
Table read_file(const std::filesystem::path& path);

/// Throws Error{kSchemaError} unless the header matches `expected` exactly.
void require_header(const Table& table, const std::vector<std::string>& expected,
                    const std::filesystem::path& source);

std::string escape(std::string_view field);

/// Shortest decimal text that parses back to the identical double.
std::string format_double(double value);

std::optional<double> parse_double(std::string_view text);

/// Writes `content` to `path` via a temporary file and rename, so readers never
/// observe a partially written file.
void write_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace esrinet::csv
