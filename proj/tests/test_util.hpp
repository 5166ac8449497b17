#pragma once

#include "splitidx/dictionary.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace splitidx::testing {

inline std::string random_string(std::mt19937_64& rng, std::size_t min_len, std::size_t max_len,
                                 std::string_view alphabet) {
    std::uniform_int_distribution<std::size_t> len_dist(min_len, max_len);
    std::uniform_int_distribution<std::size_t> sym(0, alphabet.size() - 1);
    std::string s(len_dist(rng), '\0');
    for (auto& c : s) {
        c = alphabet[sym(rng)];
    }
    return s;
}

inline dictionary random_dictionary(std::mt19937_64& rng, std::size_t words, std::size_t min_len,
                                    std::size_t max_len, std::string_view alphabet) {
    std::vector<std::string> out;
    out.reserve(words);
    for (std::size_t i = 0; i < words; ++i) {
        out.push_back(random_string(rng, min_len, max_len, alphabet));
    }
    return dictionary(std::move(out));
}

// Mixture of exact words, lightly mutated words and unrelated strings.
inline std::vector<std::string> random_patterns(std::mt19937_64& rng, const dictionary& dict, std::size_t count,
                                                std::size_t max_len, std::string_view alphabet) {
    std::vector<std::string> out;
    std::uniform_int_distribution<int> kind(0, 3);
    std::uniform_int_distribution<std::size_t> sym(0, alphabet.size() - 1);
    for (std::size_t i = 0; i < count; ++i) {
        const int pick = dict.empty() ? 3 : kind(rng);
        if (pick == 3) {
            out.push_back(random_string(rng, 1, max_len, alphabet));
            continue;
        }
        std::uniform_int_distribution<std::size_t> w(0, dict.word_count() - 1);
        std::string p = dict.words()[w(rng)];
        std::uniform_int_distribution<std::size_t> pos(0, p.size() - 1);
        for (int e = 0; e < pick * 2; ++e) {
            p[pos(rng)] = alphabet[sym(rng)];
        }
        out.push_back(std::move(p));
    }
    return out;
}

inline constexpr std::string_view dna4 = "ACGT";
inline constexpr std::string_view latin26 = "abcdefghijklmnopqrstuvwxyz";

} // namespace splitidx::testing
