#include "canlift/cache.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "canlift/errors.hpp"

namespace canlift {

std::optional<std::string> cache_dir() {
    const char* env = std::getenv("CANLIFT_CACHE");
    if (!env || !*env) return std::nullopt;
    std::error_code ec;
    std::filesystem::create_directories(env, ec);
    if (ec) return std::nullopt;
    return std::string(env);
}

void write_cache_file(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += "." + std::to_string(::getpid()) + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("write_cache_file: cannot open " + tmp.string());
        out << content;
        if (!out.flush()) throw Error("write_cache_file: short write");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error("write_cache_file: rename failed for " + path);
    }
}

}
