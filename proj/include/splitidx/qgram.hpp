#pragma once

#include "splitidx/dictionary.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace splitidx {

enum class qgram_policy { q2, q3, q4, mixed };

// "2gram", "3gram", "4gram", "mixed".
[[nodiscard]] qgram_policy parse_qgram_policy(std::string_view name);
[[nodiscard]] std::string_view qgram_policy_name(qgram_policy policy) noexcept;

struct substitution {
    std::string qgram;     // 2..4 bytes, all < 128
    std::uint8_t code = 0; // 128..255
    std::size_t savings = 0;

    friend bool operator==(const substitution& a, const substitution& b) {
        return a.qgram == b.qgram && a.code == b.code;
    }
};

// Ordered q-gram -> code-byte mapping. Entries are kept longest q-gram first
// (stable within equal lengths), which is the order the encoder tries them in
// at every position.
class substitution_list {
public:
    static constexpr std::size_t max_entries = 128;
    static constexpr std::size_t min_q = 2;
    static constexpr std::size_t max_q = 4;

    substitution_list() = default;

    // Throws codec_error on invalid entries: bad code range, duplicate code or
    // q-gram, q-gram length outside 2..4, or non-ASCII q-gram bytes.
    explicit substitution_list(std::vector<substitution> entries);

    [[nodiscard]] const std::vector<substitution>& entries() const noexcept { return entries_; }
    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
    [[nodiscard]] bool empty() const noexcept { return entries_.empty(); }

    // Greedy left-to-right replacement, longest q-gram first at each position.
    // Throws codec_error on input bytes >= 128.
    [[nodiscard]] std::string encode(std::string_view plain) const;
    void encode_append(std::string_view plain, std::string& out) const;

    // Throws codec_error on a code byte that has no entry.
    [[nodiscard]] std::string decode(std::string_view encoded) const;
    void decode_into(std::string_view encoded, std::string& out) const;

    // Bytes needed to store the list: one code byte, one length byte and the
    // q-gram per entry.
    [[nodiscard]] std::size_t byte_size() const noexcept;

    friend bool operator==(const substitution_list& a, const substitution_list& b) {
        return a.entries_ == b.entries_;
    }

private:
    // Open-addressed map from a packed q-gram to its code; 0 means absent.
    struct code_map {
        static constexpr std::size_t slots = 512;
        static constexpr std::uint32_t empty_key = 0xFFFFFFFFu;
        std::array<std::uint32_t, slots> keys;
        std::array<std::uint8_t, slots> codes{};

        code_map() { keys.fill(empty_key); }
        void insert(std::uint32_t key, std::uint8_t code) noexcept;
        [[nodiscard]] std::uint8_t find(std::uint32_t key) const noexcept;
    };

    std::vector<substitution> entries_;
    std::array<code_map, max_q + 1> by_length_{};
    std::array<bool, max_q + 1> has_length_{};
    std::array<std::array<char, max_q>, 128> expansion_{};
    std::array<std::uint8_t, 128> expansion_length_{};
};

// Greedy miner: repeatedly picks the candidate q-gram with the largest
// estimated savings count * (q - 1), where count is the number of
// non-overlapping occurrences left unencoded by the entries picked so far.
// Stops after `limit` picks (capped at 128) or when nothing saves a byte.
// Throws codec_error if the dictionary contains bytes >= 128.
[[nodiscard]] substitution_list mine_substitutions(const dictionary& dict, qgram_policy policy,
                                                   std::size_t limit = 100);

// Sum of plain word lengths over sum of encoded lengths; 1.0 for an empty
// dictionary.
[[nodiscard]] double compression_ratio(const dictionary& dict, const substitution_list& subs);

// Text form: one "<code as decimal>\t<q-gram>" line per entry, in list order.
[[nodiscard]] std::string format_substitutions(const substitution_list& subs);
[[nodiscard]] substitution_list parse_substitutions(std::string_view text);

void save_substitutions(const substitution_list& subs, const std::filesystem::path& path);
[[nodiscard]] substitution_list load_substitutions(const std::filesystem::path& path);

} // namespace splitidx
