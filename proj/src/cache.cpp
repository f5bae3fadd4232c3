#include "selmer/cache.hpp"

#include "selmer/report.hpp"

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

namespace selmer {

namespace fs = std::filesystem;

namespace {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

LocalDataCache::LocalDataCache(fs::path directory) : directory_(std::move(directory)) {
    std::error_code ec;
    fs::create_directories(directory_, ec);
}

std::optional<fs::path> LocalDataCache::default_directory() {
    if (const char* dir = std::getenv(kCacheDirEnv); dir && *dir) return fs::path(dir);
    if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return fs::path(xdg) / "selmer-euler";
    if (const char* home = std::getenv("HOME"); home && *home) return fs::path(home) / ".cache" / "selmer-euler";
    return std::nullopt;
}

std::string LocalDataCache::key(const WeierstrassCurve& minimal, const Integer& q) {
    return "v" + std::to_string(kCacheSchemaVersion) + "|" + format_curve(minimal) + "|" + q.get_str();
}

fs::path LocalDataCache::entry_path(const std::string& key) const {
    std::ostringstream name;
    name << std::hex << fnv1a(key) << ".json";
    return directory_ / name.str();
}

std::optional<LocalData> LocalDataCache::load(const std::string& key) const {
    std::ifstream in(entry_path(key));
    if (!in) return std::nullopt;
    try {
        const auto j = nlohmann::json::parse(in);
        if (j.at("schema").get<int>() != kCacheSchemaVersion || j.at("key").get<std::string>() != key)
            return std::nullopt;
        return local_data_from_json(j.at("value"));
    } catch (const std::exception&) {
        return std::nullopt;  // unreadable entries are recomputed and overwritten
    }
}

void LocalDataCache::store(const std::string& key, const LocalData& value) {
    const nlohmann::json j{{"schema", kCacheSchemaVersion}, {"key", key}, {"value", to_json(value)}};
    const fs::path target = entry_path(key);
    std::ostringstream tmp_name;
    tmp_name << target.filename().string() << ".tmp." << std::this_thread::get_id();
    const fs::path tmp = directory_ / tmp_name.str();
    std::lock_guard lock(write_mutex_);
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) return;
        out << j.dump(2) << '\n';
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) fs::remove(tmp, ec);
}

LocalData LocalDataCache::get_or_compute(const WeierstrassCurve& minimal, const Integer& q) {
    const std::string k = key(minimal, q);
    if (auto cached = load(k)) {
        ++hits_;
        return *cached;
    }
    ++misses_;
    LocalData value = compute_local_data(minimal, q);
    store(k, value);
    return value;
}

}  // namespace selmer
