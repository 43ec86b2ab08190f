#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace cmkt::io {

// Shortest round-trip decimal formatting via std::to_chars.  Locale
// independent, '.' decimal separator, byte-stable across runs.
std::string format_double(double x);
std::string format_int(std::int64_t v);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

// Minimal CSV support for the numeric tables this project exchanges:
// comma separated, no quoting, optional header row (detected as any
// non-numeric field in the first row).
struct CsvTable {
  std::vector<std::string> header;  // empty when the file has no header
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::filesystem::path& path);

// Parses a floating-point field; `context` names the field in errors.
double parse_field(const std::string& field, const std::string& context);

}  // namespace cmkt::io
