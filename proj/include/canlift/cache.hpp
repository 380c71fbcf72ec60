#pragma once

#include <optional>
#include <string>

namespace canlift {

// Memo directory from CANLIFT_CACHE; disk caching is disabled when unset.
std::optional<std::string> cache_dir();

// Atomic text write: temp file in the same directory, then rename.
// Concurrent writers race benignly (identical deterministic content).
void write_cache_file(const std::string& path, const std::string& content);

}
