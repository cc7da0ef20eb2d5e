#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace reidbench {

// Whole-file helpers; `what` names the payload in error messages
// (e.g. "manifest", "embedding file"). Throw DataError on I/O failure.
std::string read_file(const std::filesystem::path& path, const char* what);

// Creates missing parent directories before writing.
void write_file(const std::filesystem::path& path, std::string_view bytes, const char* what);

}  // namespace reidbench
