#include "splitidx/split.hpp"

#include "splitidx/error.hpp"

#include <stdexcept>

namespace splitidx {

std::optional<piece_vector> split_word(std::string_view word, unsigned k) {
    if (k == 0 || word.size() < std::size_t{k} + 1) {
        return std::nullopt;
    }
    piece_vector out;
    out.pieces.reserve(k + 1);
    for (std::size_t i = 0; i <= k; ++i) {
        const auto b = piece_at(word.size(), k, i);
        out.pieces.push_back(word.substr(b.offset, b.length));
    }
    return out;
}

bool hamming_at_most(std::string_view a, std::string_view b, std::size_t limit) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("hamming_at_most: operands differ in length");
    }
    return detail::mismatches_bounded(a.data(), b.data(), a.size(), limit) <= limit;
}

std::string reconstruct(std::string_view key, std::string_view missing, std::size_t key_position,
                        unsigned k, std::size_t total_length) {
    auto corrupt = [](const char* what) {
        return format_error(format_error::kind::corrupt, std::string("corrupt list entry: ") + what);
    };
    if (k == 0 || key_position < 1 || key_position > std::size_t{k} + 1) {
        throw corrupt("key position out of range");
    }
    if (key.size() + missing.size() != total_length || total_length < std::size_t{k} + 1) {
        throw corrupt("lengths inconsistent with word length");
    }
    const auto b = piece_at(total_length, k, key_position - 1);
    if (b.length != key.size()) {
        throw corrupt("key length does not match its piece");
    }
    std::string word;
    word.reserve(total_length);
    word.append(missing.substr(0, b.offset));
    word.append(key);
    word.append(missing.substr(b.offset));
    return word;
}

} // namespace splitidx
