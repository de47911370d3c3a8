#include "vmk/sequence.hpp"

#include <algorithm>
#include <cmath>

#include "vmk/errors.hpp"
#include "vmk/rng.hpp"

namespace vmk {

void TokenSequence::push(int id, Role role, bool is_target, int view_idx) {
    ids.push_back(id);
    roles.push_back(role);
    view.push_back(static_cast<int16_t>(view_idx));
    target.push_back(is_target ? 1 : 0);
}

std::vector<std::size_t> TokenSequence::target_positions() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < target.size(); ++i)
        if (target[i]) out.push_back(i);
    return out;
}

std::vector<std::size_t> TokenSequence::view_positions(int v) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < view.size(); ++i)
        if (view[i] == v) out.push_back(i);
    return out;
}

namespace {

void push_text(TokenSequence& seq, const Vocab& vocab, const std::vector<int>& ids, Role role,
               bool is_target) {
    for (int id : ids) {
        if (vocab.kind(id) != Vocab::Kind::text) throw TemplateError("expected text token ids");
        seq.push(id, role, is_target);
    }
}

void push_image_block(TokenSequence& seq, const Vocab& vocab, const std::vector<int>& codes,
                      Role role, bool is_target, int view_idx) {
    seq.push(Vocab::SOI, Role::special, false);
    for (int code : codes) seq.push(vocab.visual_id(code), role, is_target, view_idx);
    seq.push(Vocab::EOI, Role::special, false);
}

void check_grid(const TokenSequence& seq, const std::vector<int>& codes) {
    if (seq.tokens_per_view != 0 && static_cast<int>(codes.size()) != seq.tokens_per_view)
        throw TemplateError("all image blocks must have equal length");
}

}  // namespace

TokenSequence build_t2i(const Vocab& vocab, const std::vector<int>& caption_ids,
                        const std::vector<int>& image_codes) {
    if (caption_ids.empty()) throw TemplateError("t2i caption must be nonempty");
    if (image_codes.empty()) throw TemplateError("t2i image block must be nonempty");
    TokenSequence seq;
    seq.n_views = 1;
    seq.tokens_per_view = static_cast<int>(image_codes.size());
    seq.push(Vocab::T2I, Role::special, false);
    seq.push(Vocab::SOT, Role::special, false);
    push_text(seq, vocab, caption_ids, Role::prompt_text, true);  // caption is maskable in stage 1
    seq.push(Vocab::EOT, Role::special, false);
    push_image_block(seq, vocab, image_codes, Role::gen_image, true, 0);
    return seq;
}

TokenSequence build_i2mv(const Vocab& vocab, const std::vector<int>& prompt_ids,
                         const std::vector<int>& ref_codes,
                         const std::vector<std::vector<int>>& target_codes) {
    if (target_codes.size() != 3) throw TemplateError("i2mv requires exactly 3 target views");
    if (ref_codes.empty()) throw TemplateError("i2mv reference block must be nonempty");
    TokenSequence seq;
    seq.n_views = 3;
    seq.tokens_per_view = static_cast<int>(ref_codes.size());
    seq.push(Vocab::I2MV, Role::special, false);
    seq.push(Vocab::SOT, Role::special, false);
    push_text(seq, vocab, prompt_ids, Role::prompt_text, false);
    seq.push(Vocab::EOT, Role::special, false);
    push_image_block(seq, vocab, ref_codes, Role::ref_image, false, -1);
    for (int v = 0; v < 3; ++v) {
        check_grid(seq, target_codes[static_cast<std::size_t>(v)]);
        push_image_block(seq, vocab, target_codes[static_cast<std::size_t>(v)], Role::gen_image,
                         true, v);
    }
    return seq;
}

TokenSequence build_t2mv(const Vocab& vocab, const std::vector<int>& prompt_ids,
                         const std::vector<int>& desc_ids,
                         const std::vector<std::vector<int>>& target_codes) {
    if (target_codes.size() != 4) throw TemplateError("t2mv requires exactly 4 target views");
    TokenSequence seq;
    seq.n_views = 4;
    seq.tokens_per_view = static_cast<int>(target_codes.front().size());
    if (seq.tokens_per_view == 0) throw TemplateError("t2mv view blocks must be nonempty");
    seq.push(Vocab::T2MV, Role::special, false);
    seq.push(Vocab::SOT, Role::special, false);
    push_text(seq, vocab, prompt_ids, Role::prompt_text, false);
    push_text(seq, vocab, desc_ids, Role::desc_text, false);  // empty desc is allowed
    seq.push(Vocab::EOT, Role::special, false);
    for (int v = 0; v < 4; ++v) {
        check_grid(seq, target_codes[static_cast<std::size_t>(v)]);
        push_image_block(seq, vocab, target_codes[static_cast<std::size_t>(v)], Role::gen_image,
                         true, v);
    }
    return seq;
}

TokenSequence build_mmu(const Vocab& vocab, const std::vector<int>& prompt_ids,
                        const std::vector<int>& image_codes, const std::vector<int>& answer_ids,
                        int answer_len) {
    if (answer_len < 1) throw TemplateError("mmu answer length must be >= 1");
    if (static_cast<int>(answer_ids.size()) > answer_len)
        throw TemplateError("mmu answer longer than the configured answer length");
    TokenSequence seq;
    seq.n_views = 0;
    seq.tokens_per_view = static_cast<int>(image_codes.size());
    seq.push(Vocab::MMU, Role::special, false);
    seq.push(Vocab::SOT, Role::special, false);
    push_text(seq, vocab, prompt_ids, Role::prompt_text, false);
    seq.push(Vocab::EOT, Role::special, false);
    push_image_block(seq, vocab, image_codes, Role::ref_image, false, -1);
    seq.push(Vocab::SOT, Role::special, false);
    for (int id : answer_ids) {
        if (vocab.kind(id) != Vocab::Kind::text) throw TemplateError("expected text token ids");
        seq.push(id, Role::answer_text, true);
    }
    for (int i = static_cast<int>(answer_ids.size()); i < answer_len; ++i)
        seq.push(Vocab::PAD, Role::answer_text, true);
    seq.push(Vocab::EOT, Role::special, false);
    return seq;
}

MaskResult apply_random_mask(const TokenSequence& seq, const MaskSpec& spec) {
    if (spec.ratio < 0.0 || spec.ratio > 1.0) throw ConfigError("mask ratio must be in [0,1]");
    auto targets = seq.target_positions();
    if (targets.empty()) throw TemplateError("sequence has no target positions");

    std::size_t count =
        static_cast<std::size_t>(std::llround(spec.ratio * static_cast<double>(targets.size())));
    if (spec.ratio > 0.0 && count == 0) count = 1;  // avoid zero-loss samples
    if (count > targets.size()) count = targets.size();

    // partial Fisher-Yates over the target positions
    Rng rng(spec.rng_seed);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + rng.uniform_below(targets.size() - i);
        std::swap(targets[i], targets[j]);
    }
    targets.resize(count);
    std::sort(targets.begin(), targets.end());

    MaskResult out;
    out.seq = seq;
    out.masked = std::move(targets);
    out.original.reserve(out.masked.size());
    for (std::size_t pos : out.masked) {
        out.original.push_back(out.seq.ids[pos]);
        out.seq.ids[pos] = Vocab::MASK;
    }
    return out;
}

std::string render_sequence(const Vocab& vocab, const TokenSequence& seq) {
    std::string out;
    for (std::size_t i = 0; i < seq.ids.size(); ++i) {
        const int id = seq.ids[i];
        if (vocab.kind(id) == Vocab::Kind::special) {
            out += '[';
            out += Vocab::special_names()[static_cast<std::size_t>(id)];
            out += ']';
        } else {
            out += ' ';
            out += std::to_string(id);
            // numbers followed by a special get the trailing separator
            if (i + 1 < seq.ids.size() && vocab.kind(seq.ids[i + 1]) == Vocab::Kind::special)
                out += ' ';
        }
    }
    return out;
}

ParsedSegments parse_by_brackets(const Vocab& vocab, const TokenSequence& seq) {
    ParsedSegments out;
    std::vector<int>* open = nullptr;
    for (int id : seq.ids) {
        if (id == Vocab::SOT) {
            if (open) throw TemplateError("nested bracket");
            out.text_blocks.emplace_back();
            open = &out.text_blocks.back();
        } else if (id == Vocab::SOI) {
            if (open) throw TemplateError("nested bracket");
            out.image_blocks.emplace_back();
            open = &out.image_blocks.back();
        } else if (id == Vocab::EOT || id == Vocab::EOI) {
            if (!open) throw TemplateError("unmatched closing bracket");
            open = nullptr;
        } else if (open) {
            open->push_back(id);
        }
        (void)vocab;
    }
    if (open) throw TemplateError("unclosed bracket");
    return out;
}

}  // namespace vmk
