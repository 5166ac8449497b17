#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace splitidx {

// Length shared by pieces 1..k of a word of `length` bytes split into k + 1
// pieces: |d|/(k+1) rounded half up, reduced to (|d|-1)/k when the rounded
// value would leave the last piece empty. Requires length >= k + 1.
[[nodiscard]] constexpr std::size_t common_piece_length(std::size_t length, unsigned k) noexcept {
    const std::size_t parts = std::size_t{k} + 1;
    std::size_t common = (2 * length + parts) / (2 * parts);
    if (k * common >= length) {
        common = (length - 1) / k;
    }
    return common;
}

struct piece_bounds {
    std::size_t offset;
    std::size_t length;
};

// Bounds of piece `index` (0-based) for a word of `length` bytes.
[[nodiscard]] constexpr piece_bounds piece_at(std::size_t length, unsigned k,
                                              std::size_t index) noexcept {
    const std::size_t common = common_piece_length(length, k);
    const std::size_t offset = index * common;
    return {offset, index < k ? common : length - offset};
}

// The k + 1 pieces of `word`, as views into it. The pieces are non-empty and
// concatenate back to `word`.
struct piece_vector {
    std::vector<std::string_view> pieces;
};

// std::nullopt when the word is too short (|word| <= k) to yield k + 1
// non-empty pieces.
[[nodiscard]] std::optional<piece_vector> split_word(std::string_view word, unsigned k);

// Number of mismatching positions between equal-length a and b is at most
// `limit`. Stops at the (limit + 1)-th mismatch. Throws std::invalid_argument
// on unequal lengths.
[[nodiscard]] bool hamming_at_most(std::string_view a, std::string_view b, std::size_t limit);

// Rebuilds a word from one list entry: `key` is piece `key_position` (1-based)
// and `missing` the remaining pieces concatenated in order. Throws
// format_error(corrupt) if the lengths do not fit the split of
// |key| + |missing| bytes.
[[nodiscard]] std::string reconstruct(std::string_view key, std::string_view missing,
                                      std::size_t key_position, unsigned k,
                                      std::size_t total_length);

namespace detail {

// Mismatches between a and b (same length), counting at most limit + 1.
inline std::size_t mismatches_bounded(const char* a, const char* b, std::size_t n,
                                      std::size_t limit) noexcept {
    std::size_t diff = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] != b[i] && ++diff > limit) {
            break;
        }
    }
    return diff;
}

} // namespace detail

} // namespace splitidx
