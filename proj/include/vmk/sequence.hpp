#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vmk/vocab.hpp"

namespace vmk {

enum class Role : uint8_t {
    special,
    prompt_text,
    desc_text,
    ref_image,
    gen_image,
    answer_text,
};

// One flat multi-modal token sequence plus per-position metadata. target[i]
// marks positions eligible for masking and loss.
struct TokenSequence {
    std::vector<int> ids;
    std::vector<Role> roles;
    std::vector<int16_t> view;    // view index at gen_image positions, -1 elsewhere
    std::vector<uint8_t> target;  // 0/1
    int n_views = 0;
    int tokens_per_view = 0;  // L

    std::size_t size() const { return ids.size(); }
    std::vector<std::size_t> target_positions() const;
    std::vector<std::size_t> view_positions(int v) const;

    void push(int id, Role role, bool is_target, int view_idx = -1);
};

// [T2I][SOT] caption [EOT][SOI] image [EOI]; caption and image are both targets
TokenSequence build_t2i(const Vocab& vocab, const std::vector<int>& caption_ids,
                        const std::vector<int>& image_codes);

// [I2MV][SOT] prompt [EOT][SOI] ref [EOI] ([SOI] Gv [EOI]) x3; targets are the G blocks
TokenSequence build_i2mv(const Vocab& vocab, const std::vector<int>& prompt_ids,
                         const std::vector<int>& ref_codes,
                         const std::vector<std::vector<int>>& target_codes);

// [T2MV][SOT] prompt desc [EOT] ([SOI] Gv [EOI]) x4
TokenSequence build_t2mv(const Vocab& vocab, const std::vector<int>& prompt_ids,
                         const std::vector<int>& desc_ids,
                         const std::vector<std::vector<int>>& target_codes);

// [MMU][SOT] prompt [EOT][SOI] image [EOI][SOT] answer(PAD-padded) [EOT]
TokenSequence build_mmu(const Vocab& vocab, const std::vector<int>& prompt_ids,
                        const std::vector<int>& image_codes, const std::vector<int>& answer_ids,
                        int answer_len);

struct MaskSpec {
    double ratio = 0.0;  // in [0,1]
    uint64_t rng_seed = 0;
};

struct MaskResult {
    TokenSequence seq;                 // ids at masked positions replaced by MASK
    std::vector<std::size_t> masked;   // ascending
    std::vector<int> original;         // original ids at masked positions
};

// |masked| = round(ratio * #targets), forced to >= 1 while ratio > 0; drawn
// uniformly without replacement from the target positions
MaskResult apply_random_mask(const TokenSequence& seq, const MaskSpec& spec);

// text rendering for golden tests: specials by name, other ids as decimals
std::string render_sequence(const Vocab& vocab, const TokenSequence& seq);

// bracket-level parse used by round-trip checks: returns the token runs
// between SOT/EOT and SOI/EOI pairs, in order
struct ParsedSegments {
    std::vector<std::vector<int>> text_blocks;
    std::vector<std::vector<int>> image_blocks;
};
ParsedSegments parse_by_brackets(const Vocab& vocab, const TokenSequence& seq);

}  // namespace vmk
