#include "vmk/vocab.hpp"

#include "vmk/errors.hpp"

namespace vmk {

const std::array<const char*, Vocab::SPECIAL_COUNT>& Vocab::special_names() {
    static const std::array<const char*, SPECIAL_COUNT> names = {
        "MASK", "PAD", "T2I", "I2MV", "T2MV", "MMU", "SOT", "EOT", "SOI", "EOI"};
    return names;
}

int Vocab::special_by_name(std::string_view name) {
    const auto& names = special_names();
    for (int i = 0; i < SPECIAL_COUNT; ++i)
        if (name == names[i]) return i;
    throw ConfigError("unknown special token: " + std::string(name));
}

Vocab Vocab::build(int text_size, int lfq_bits) {
    if (text_size < 2) throw ConfigError("text_size must be >= 2");
    if (lfq_bits < 4 || lfq_bits > 16) throw ConfigError("lfq_bits must be in [4,16]");
    Vocab v;
    v.text_size = text_size;
    v.lfq_bits = lfq_bits;
    v.visual_size = 1 << lfq_bits;
    v.total_size = SPECIAL_COUNT + text_size + v.visual_size;
    return v;
}

Vocab::Kind Vocab::kind(int id) const {
    if (id < 0 || id >= total_size)
        throw ConfigError("token id out of vocab: " + std::to_string(id));
    if (id < SPECIAL_COUNT) return Kind::special;
    if (id < visual_begin()) return Kind::text;
    return Kind::visual;
}

int Vocab::text_id(uint8_t byte) const {
    if (static_cast<int>(byte) >= text_size)
        throw ConfigError("byte outside text vocab: " + std::to_string(int(byte)));
    return text_begin() + byte;
}

int Vocab::visual_id(int code) const {
    if (code < 0 || code >= visual_size)
        throw ConfigError("visual code out of range: " + std::to_string(code));
    return visual_begin() + code;
}

uint8_t Vocab::text_byte(int id) const {
    if (kind(id) != Kind::text) throw ConfigError("id is not a text token");
    return static_cast<uint8_t>(id - text_begin());
}

int Vocab::visual_code(int id) const {
    if (kind(id) != Kind::visual) throw ConfigError("id is not a visual token");
    return id - visual_begin();
}

std::vector<int> Vocab::encode_text(std::string_view s) const {
    std::vector<int> out;
    out.reserve(s.size());
    for (char c : s) out.push_back(text_id(static_cast<uint8_t>(c)));
    return out;
}

std::string Vocab::decode_text(const std::vector<int>& ids) const {
    std::string out;
    for (int id : ids)
        if (id >= 0 && id < total_size && kind(id) == Kind::text)
            out.push_back(static_cast<char>(text_byte(id)));
    return out;
}

}  // namespace vmk
