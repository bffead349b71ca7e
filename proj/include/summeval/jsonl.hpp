#pragma once

#include <filesystem>
#include <functional>
#include <string>

#include "json.hpp"

namespace summeval {

// Streams a JSONL file line by line. Blank lines are skipped. A malformed
// line raises DataError naming the 1-based line number and processing stops.
void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(std::size_t line_number, const nlohmann::json&)>& fn);

// One compact JSON object per line.
std::string to_jsonl_line(const nlohmann::json& value);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace summeval
