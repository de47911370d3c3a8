#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace vmk {

// One flat id space: specials in [0,S), text in [S, S+text_size), visual in
// [S+text_size, total). The layout is positional, so ids are stable across
// runs for a given (text_size, lfq_bits).
struct Vocab {
    enum Special : int {
        MASK = 0,
        PAD,
        T2I,
        I2MV,
        T2MV,
        MMU,
        SOT,
        EOT,
        SOI,
        EOI,
        SPECIAL_COUNT
    };

    enum class Kind { special, text, visual };

    int text_size = 0;
    int lfq_bits = 0;
    int visual_size = 0;
    int total_size = 0;

    static constexpr int special_count() { return SPECIAL_COUNT; }
    static const std::array<const char*, SPECIAL_COUNT>& special_names();
    static int special_by_name(std::string_view name);  // throws ConfigError

    // text_size >= 2, 4 <= lfq_bits <= 16
    static Vocab build(int text_size, int lfq_bits);

    Kind kind(int id) const;  // throws ConfigError when id outside [0,total)

    int text_begin() const { return SPECIAL_COUNT; }
    int visual_begin() const { return SPECIAL_COUNT + text_size; }

    int text_id(uint8_t byte) const;
    int visual_id(int code) const;
    uint8_t text_byte(int id) const;
    int visual_code(int id) const;

    // byte-level text codec (ASCII captions)
    std::vector<int> encode_text(std::string_view s) const;
    std::string decode_text(const std::vector<int>& ids) const;  // skips non-text ids
};

}  // namespace vmk
