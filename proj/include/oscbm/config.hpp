#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace oscbm::config {

// Flat key-value configuration in a TOML subset: `key = value` lines,
// optional [section] headers (flattened to section.key), # comments,
// quoted strings, ints, floats, booleans.
class Config {
  public:
    static Config parse(const std::string& text);
    static Config parse_file(const std::string& path);

    bool has(const std::string& key) const { return kv_.count(key) != 0; }
    std::string get_string(const std::string& key, const std::string& def) const;
    long long get_int(const std::string& key, long long def) const;
    double get_double(const std::string& key, double def) const;
    bool get_bool(const std::string& key, bool def) const;

    void set(const std::string& key, const std::string& value) { kv_[key] = value; }

    // Sorted "key = value" lines; stable input for hashing and manifests.
    std::string canonical() const;
    const std::map<std::string, std::string>& items() const { return kv_; }

  private:
    std::map<std::string, std::string> kv_;
};

uint64_t fnv1a(const std::string& s);

}  // namespace oscbm::config
