#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace body {

// Whole-file read; throws body::Error when the file cannot be opened.
std::string read_file(const std::filesystem::path& path);

// Writes `content` only when the file is missing or differs. Returns the
// number of bytes written (0 when the file was already up to date).
std::size_t write_if_changed(const std::filesystem::path& path, std::string_view content);

// Canonical JSON text: keys sorted, two-space indent, trailing newline.
std::string canonical_json(const nlohmann::json& j);

// Trims ASCII whitespace at both ends.
std::string_view trim(std::string_view s);

}  // namespace body
