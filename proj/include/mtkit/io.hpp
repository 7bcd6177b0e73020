#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace mtkit::io {

/// Whole file as bytes. Throws IoError.
std::string read_file(const std::filesystem::path& path);

/// Lines without their terminator; a trailing "\r" is removed.
std::vector<std::string> read_lines(const std::filesystem::path& path);

/// Writes through a temporary sibling and renames it into place, so readers never
/// observe a half-written file. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace mtkit::io
