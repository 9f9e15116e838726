#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace kgeval::io {

/// Reads a whole file; gzip input is detected by its magic bytes and inflated.
std::string read_text(const std::filesystem::path& path);

/// Same, or an empty string when the file does not exist.
std::string read_text_if_exists(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, std::string_view text);

/// Splits on '\n', dropping a trailing '\r' from each line.
std::vector<std::string_view> split_lines(std::string_view text);

std::vector<std::string_view> split(std::string_view line, char delimiter);

}  // namespace kgeval::io
