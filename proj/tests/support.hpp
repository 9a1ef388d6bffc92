#pragma once

// Shared generators for randomized tests. Everything is seeded through
// SplitMix64, so failures reproduce exactly.

#include <string>
#include <vector>

#include "gtm/gtm.hpp"

namespace gtm::testsupport {

inline Rational random_rational(SplitMix64& rng) {
    long long num = static_cast<long long>(rng.below(2001)) - 1000;
    long long den = static_cast<long long>(rng.below(999)) + 1;
    return Rational(Integer(num), Integer(den));
}

inline Word random_binary_word(SplitMix64& rng, std::size_t max_len) {
    std::size_t len = rng.below(max_len + 1);
    std::string s;
    for (std::size_t i = 0; i < len; ++i) s += rng.below(2) ? '1' : '0';
    return Word::binary(s);
}

inline Stream random_periodic_stream(SplitMix64& rng, std::size_t max_head = 4,
                                     std::size_t max_cycle = 5) {
    Word head = random_binary_word(rng, max_head);
    std::size_t cycle_len = rng.below(max_cycle) + 1;
    std::string cycle;
    for (std::size_t i = 0; i < cycle_len; ++i) cycle += rng.below(2) ? '1' : '0';
    return Stream::periodic(head, Word::binary(cycle));
}

// Random well-formed machine over word carriers, drawing subroutines from the
// built-in word-level table. Suitable for format round-trips and for graph
// algorithms (the statement semantics are irrelevant there).
inline Machine random_machine(SplitMix64& rng) {
    static const std::vector<std::string> unary = {"w_id",  "w_droplast", "w_half",
                                                   "w_tail", "w_dup",     "w_not"};
    static const std::vector<std::string> binary = {"w_zip", "w_ivadd"};

    int tapes = static_cast<int>(rng.below(4)) + 1;
    std::size_t label_count = rng.below(7) + 2;

    MachineBuilder b("rnd" + std::to_string(rng.below(10000)));
    for (int t = 0; t < tapes; ++t) b.tape("word");

    // Occasionally a non-contiguous input list to cover the explicit syntax.
    if (tapes > 2 && rng.below(5) == 0) {
        b.input_tape_list({1, tapes - 1});
    } else {
        int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(tapes)));
        b.inputs(k);
    }
    b.work(rng.below(2) ? "_#" : "_#@", '_');

    std::vector<std::string> labels;
    for (std::size_t i = 0; i + 1 < label_count; ++i) {
        labels.push_back("l" + std::to_string(i));
        b.label(labels.back());
    }
    b.final_label("lf");
    std::vector<std::string> all = labels;
    all.push_back("lf");

    auto any_label = [&] { return all[rng.below(all.size())]; };
    auto any_tape = [&] { return static_cast<int>(rng.below(static_cast<std::uint64_t>(tapes))); };
    auto gamma_sym = [&] { return rng.below(2) ? '#' : '_'; };

    for (const std::string& l : labels) {
        switch (rng.below(6)) {
            case 0: b.move_right(l, any_tape(), any_label()); break;
            case 1: b.move_left(l, any_tape(), any_label()); break;
            case 2: b.write(l, any_tape(), gamma_sym(), any_label()); break;
            case 3: b.branch_sym(l, any_tape(), gamma_sym(), any_label(), any_label()); break;
            case 4: {
                if (tapes >= 2 && rng.below(2)) {
                    const std::string& fn = binary[rng.below(binary.size())];
                    b.assign(l, any_tape(), fn, {any_tape(), any_tape()}, any_label());
                } else {
                    const std::string& fn = unary[rng.below(unary.size())];
                    b.assign(l, any_tape(), fn, {any_tape()}, any_label());
                }
                break;
            }
            default: b.branch_fn(l, "w_first_is0", {any_tape()}, any_label(), any_label()); break;
        }
    }
    return b.build(builtin_subroutines());
}

} // namespace gtm::testsupport
