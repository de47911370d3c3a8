#include "vmk/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "vmk/errors.hpp"

namespace vmk {

namespace {

constexpr std::pair<const char*, const char*> kDefaults[] = {
    // global
    {"seed", "0"},
    {"threads", "0"},
    // vocab
    {"text_size", "256"},
    {"lfq_bits", "10"},
    // tokenizer
    {"patch_size", "4"},
    {"tok_hidden", "96"},
    {"tok_steps", "3000"},
    {"tok_batch", "256"},
    {"tok_lr", "2e-3"},
    {"tok_entropy_weight", "0.1"},
    // model
    {"d_model", "128"},
    {"n_layers", "4"},
    {"n_heads", "4"},
    {"ffn_mult", "4"},
    {"max_seq_len", "512"},
    // trainer
    {"stage", "2"},
    {"batch_size", "4"},
    {"steps", "100"},
    {"base_lr", "3e-4"},
    {"min_lr", "0"},
    {"warmup_steps", "10"},
    {"beta1", "0.9"},
    {"beta2", "0.95"},
    {"adam_eps", "1e-8"},
    {"weight_decay", "0.01"},
    {"grad_clip", "1.0"},
    {"checkpoint_every", "0"},
    {"loss_weighting", "mean"},
    // sampler
    {"sample_steps", "20"},
    {"schedule", "cosine"},
    {"tau0", "0"},
    {"answer_len", "16"},
    {"prompt_i2mv", "make three views"},
    {"prompt_t2mv", "make four views"},
    {"prompt_mmu", "describe the object"},
    // datagen
    {"n_objects", "8"},
    {"n_views", "8"},
    {"elevation_deg", "30"},
    {"resolution", "32"},
    // I/O wiring (so that echo files replay byte-for-byte)
    {"data_dir", ""},
    {"ckpt_in", ""},
    {"ckpt", ""},
    {"ref_image", ""},
    {"caption", ""},
    {"desc", ""},
    {"prompt", ""},
    {"region", ""},
    {"split", "train"},
    {"eval_seeds", "1"},
    {"object_id", "0"},
    {"dump_sequence", "0"},
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace

Config::Config() {
    items_.reserve(std::size(kDefaults));
    for (const auto& [k, v] : kDefaults) items_.push_back({k, v});
}

Config::Item* Config::find(std::string_view key) {
    for (auto& it : items_)
        if (it.key == key) return &it;
    return nullptr;
}

const Config::Item* Config::find(std::string_view key) const {
    for (const auto& it : items_)
        if (it.key == key) return &it;
    return nullptr;
}

void Config::set(std::string_view key, std::string_view value) {
    Item* it = find(key);
    if (!it) throw ConfigError("unknown config key: " + std::string(key));
    it->value = std::string(value);
}

void Config::load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path.string());
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv = trim(line);
        if (sv.empty() || sv.front() == '#') continue;
        auto eq = sv.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
        set(trim(sv.substr(0, eq)), trim(sv.substr(eq + 1)));
    }
}

void Config::apply_override(std::string_view kv) {
    auto eq = kv.find('=');
    if (eq == std::string_view::npos) throw ConfigError("override must be key=value: " + std::string(kv));
    set(trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
}

bool Config::has(std::string_view key) const { return find(key) != nullptr; }

const std::string& Config::get(std::string_view key) const {
    const Item* it = find(key);
    if (!it) throw ConfigError("unknown config key: " + std::string(key));
    return it->value;
}

long long Config::get_int(std::string_view key) const {
    const std::string& v = get(key);
    char* end = nullptr;
    long long r = std::strtoll(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("config key " + std::string(key) + " is not an integer: " + v);
    return r;
}

double Config::get_real(std::string_view key) const {
    const std::string& v = get(key);
    char* end = nullptr;
    double r = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("config key " + std::string(key) + " is not a number: " + v);
    return r;
}

std::string Config::echo() const {
    std::ostringstream out;
    for (const auto& it : items_) out << it.key << " = " << it.value << "\n";
    return out.str();
}

}  // namespace vmk
