#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

namespace coupevo {

std::string read_file(const std::filesystem::path& path);

/// Writes `content` to a sibling temporary file and renames it over `path`,
/// so readers never observe a partially written file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Canonical on-disk JSON rendering: two-space indent, lexicographic keys,
/// trailing newline.
std::string dump_canonical(const nlohmann::json& doc);

nlohmann::json parse_json_file(const std::filesystem::path& path);

}  // namespace coupevo
