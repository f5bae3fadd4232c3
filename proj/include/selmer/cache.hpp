#pragma once

#include "selmer/curve_model.hpp"
#include "selmer/local_analysis.hpp"

#include <atomic>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>

namespace selmer {

inline constexpr int kCacheSchemaVersion = 1;
inline constexpr const char* kCacheDirEnv = "SELMER_EULER_CACHE_DIR";

// On-disk store of p-independent LocalData, one JSON file per
// (minimal model, q), named by a stable hash of the key.
class LocalDataCache {
public:
    explicit LocalDataCache(std::filesystem::path directory);

    // $SELMER_EULER_CACHE_DIR, else $XDG_CACHE_HOME/selmer-euler, else
    // $HOME/.cache/selmer-euler.
    static std::optional<std::filesystem::path> default_directory();

    LocalData get_or_compute(const WeierstrassCurve& minimal, const Integer& q);

    const std::filesystem::path& directory() const { return directory_; }
    std::size_t hits() const { return hits_; }
    std::size_t misses() const { return misses_; }

    static std::string key(const WeierstrassCurve& minimal, const Integer& q);

private:
    std::filesystem::path entry_path(const std::string& key) const;
    std::optional<LocalData> load(const std::string& key) const;
    void store(const std::string& key, const LocalData& value);

    std::filesystem::path directory_;
    std::mutex write_mutex_;
    std::atomic<std::size_t> hits_{0}, misses_{0};
};

}  // namespace selmer
