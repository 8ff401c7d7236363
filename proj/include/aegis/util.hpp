#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace aegis::util {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b);
bool icontains(std::string_view haystack, std::string_view needle);
bool starts_with(std::string_view s, std::string_view prefix);

// Collapses runs of whitespace (incl. newlines) to single spaces and trims.
std::string collapse_ws(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);

std::string replace_all(std::string_view s, std::string_view from, std::string_view to);

std::string sha256_hex(std::string_view data);

// RFC 3339 UTC timestamp, second resolution.
std::string rfc3339_now();

std::string read_file(const std::filesystem::path& path);
std::optional<std::string> read_file_if_exists(const std::filesystem::path& path);

// Write-temp-then-rename so readers never observe a partial file.
void atomic_write_file(const std::filesystem::path& path, std::string_view data);

// Appends one line and flushes before returning.
void append_line(const std::filesystem::path& path, std::string_view line);

}  // namespace aegis::util
