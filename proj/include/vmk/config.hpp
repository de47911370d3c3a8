#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace vmk {

// Flat `key = value` configuration. Every knob has a registered default;
// unknown keys are rejected. echo() serializes the fully-resolved state, so
// replaying an echo file reproduces the run.
struct Config {
    Config();

    void set(std::string_view key, std::string_view value);  // throws ConfigError on unknown key
    void load_file(const std::filesystem::path& path);
    void apply_override(std::string_view kv);  // "key=value"

    bool has(std::string_view key) const;
    const std::string& get(std::string_view key) const;
    long long get_int(std::string_view key) const;
    double get_real(std::string_view key) const;

    std::string echo() const;

  private:
    struct Item {
        std::string key;
        std::string value;
    };
    std::vector<Item> items_;
    Item* find(std::string_view key);
    const Item* find(std::string_view key) const;
};

}  // namespace vmk
