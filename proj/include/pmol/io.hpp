#pragma once
// Small output helpers shared by the library and the CLI.

#include <string>

namespace pmol {

// Write to a sibling temporary then rename over the target.
void atomic_write(const std::string& path, const std::string& contents);

// FNV-1a 64-bit, hex encoded.
std::string content_hash(const std::string& data);

}  // namespace pmol
