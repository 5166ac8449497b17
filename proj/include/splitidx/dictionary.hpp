#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace splitidx {

struct dictionary_stats {
    std::size_t total_bytes = 0;   // sum of word lengths
    std::size_t word_count = 0;
    std::size_t alphabet_size = 0; // distinct byte values across all words

    friend bool operator==(const dictionary_stats&, const dictionary_stats&) = default;
};

// A deduplicated, lexicographically ordered set of non-empty byte strings.
// Empty strings are dropped on construction.
class dictionary {
public:
    dictionary() = default;
    explicit dictionary(std::vector<std::string> words);

    [[nodiscard]] const std::vector<std::string>& words() const noexcept { return words_; }
    [[nodiscard]] bool empty() const noexcept { return words_.empty(); }
    [[nodiscard]] std::size_t word_count() const noexcept { return words_.size(); }
    [[nodiscard]] std::size_t total_bytes() const noexcept { return total_bytes_; }
    [[nodiscard]] std::size_t alphabet_size() const noexcept { return alphabet_.size(); }

    // Distinct bytes occurring in the dictionary, ascending.
    [[nodiscard]] const std::string& alphabet() const noexcept { return alphabet_; }

    // True when every byte is below 128 (required by the q-gram codec).
    [[nodiscard]] bool is_ascii() const noexcept;

    [[nodiscard]] dictionary_stats stats() const noexcept {
        return {total_bytes_, words_.size(), alphabet_.size()};
    }

private:
    std::vector<std::string> words_;
    std::size_t total_bytes_ = 0;
    std::string alphabet_;
};

} // namespace splitidx
