#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace aeropipe {

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temp file then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Splits one CSV record. Double-quoted fields may contain commas and `""`.
std::vector<std::string> split_csv_line(std::string_view line);

/// Quotes a field only when it needs it.
std::string csv_escape(std::string_view field);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// Fixed-point with `digits` decimals, for human-facing tables.
std::string format_fixed(double v, int digits);

/// Full-string parse; returns false on any trailing garbage.
bool parse_double(std::string_view text, double& out);

}  // namespace aeropipe
