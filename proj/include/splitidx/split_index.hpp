#pragma once

#include "splitidx/dictionary.hpp"
#include "splitidx/piece_table.hpp"
#include "splitidx/qgram.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace splitidx {

enum class compression_policy { none, q2, q3, q4, mixed };

// "none", "2gram", "3gram", "4gram", "mixed".
[[nodiscard]] compression_policy parse_compression_policy(std::string_view name);
[[nodiscard]] std::string_view compression_policy_name(compression_policy policy) noexcept;

struct build_config {
    hash_config hash;
    compression_policy compression = compression_policy::none;
    std::size_t qgram_limit = 100;
    // Used instead of mining when set and compression != none.
    std::optional<substitution_list> substitutions;
};

struct memory_breakdown {
    std::size_t table_bytes = 0;        // bucket directory + bucket arena
    std::size_t list_bytes = 0;         // all list blobs
    std::size_t side_table_bytes = 0;   // one length byte + payload per short word
    std::size_t substitution_bytes = 0; // see substitution_list::byte_size
    [[nodiscard]] std::size_t total() const noexcept {
        return table_bytes + list_bytes + side_table_bytes + substitution_bytes;
    }
};

struct list_stats {
    std::size_t list_count = 0;
    std::size_t entry_count = 0;
    std::size_t payload_bytes = 0; // stored (possibly encoded) missing-piece bytes
    std::size_t max_entries = 0;
    double mean_entries = 0.0;     // average list length
};

// One decoded list entry. `key_position` is the 1-based piece index the list
// key occupies in the word: for k = 1, 1 means the key is the prefix (entry is
// a missing suffix) and 2 means it is the suffix (entry is a missing prefix).
struct list_entry {
    std::string missing;
    std::size_t key_position = 0;

    friend bool operator==(const list_entry&, const list_entry&) = default;
};

struct list_contents {
    std::uint16_t marker = 0; // k = 1 only: 1-based start of the missing-prefix region
    std::vector<list_entry> entries;
};

// Everything a split_index is made of, in its stored form. Used to move an
// index to and from its serialized representation.
struct index_parts {
    unsigned k = 1;
    piece_table table;
    std::vector<std::uint8_t> lists;
    std::vector<std::vector<std::string>> side_table; // side_table[len], len in 1..k
    std::optional<substitution_list> substitutions;
    dictionary_stats source_stats;
};

// Index for dictionary matching with at most k mismatches.
//
// Every word of length > k is cut into k + 1 pieces; each piece is a key in a
// chained hash table whose value is a list of the word's remaining pieces.
// Lists live in one byte arena:
//
//   k = 1:  [u16 marker][u8 len][bytes] ... [0]
//           missing suffixes first, then missing prefixes from entry `marker`
//           (1-based) on; marker 0 means there are no missing prefixes.
//   k > 1:  [u8 key position][u8 len][bytes] ... [0]
//           the bytes are the k non-key pieces concatenated in word order.
//
// Payloads are q-gram encoded when the index carries a substitution list. A
// built index is immutable and safe to query from several threads at once.
class split_index {
public:
    explicit split_index(index_parts parts);

    // Dictionary words of the same length as `pattern` within Hamming
    // distance k, sorted and deduplicated. Throws std::invalid_argument on an
    // empty pattern.
    [[nodiscard]] std::vector<std::string> query(std::string_view pattern) const;
    void query_into(std::string_view pattern, std::vector<std::string>& out) const;

    // Same contract as query(), but every entry of every probed list is rebuilt
    // into a full word and verified, ignoring regions, key positions and the
    // length filter. Slow; exists to cross-check the layout.
    [[nodiscard]] std::vector<std::string> query_full_scan(std::string_view pattern) const;

    [[nodiscard]] unsigned k() const noexcept { return k_; }
    [[nodiscard]] const piece_table& table() const noexcept { return table_; }
    [[nodiscard]] std::span<const std::uint8_t> list_bytes() const noexcept { return lists_; }
    [[nodiscard]] const std::vector<std::vector<std::string>>& side_table() const noexcept { return side_table_; }
    [[nodiscard]] const substitution_list* substitutions() const noexcept {
        return subs_ ? &*subs_ : nullptr;
    }
    [[nodiscard]] const dictionary_stats& source_stats() const noexcept { return source_stats_; }

    [[nodiscard]] memory_breakdown memory() const noexcept;
    [[nodiscard]] list_stats lists() const;

    // Decoded contents of the list stored under `key`, if any.
    [[nodiscard]] std::optional<list_contents> list_for(std::string_view key) const;

private:
    template <typename F>
    void visit_list(std::size_t offset, F&& visit) const;

    void query_short(std::size_t length, std::vector<std::string>& out) const;
    void query_one_mismatch(std::string_view pattern, std::vector<std::string>& out) const;
    void query_many_mismatches(std::string_view pattern, std::vector<std::string>& out) const;

    unsigned k_;
    piece_table table_;
    std::vector<std::uint8_t> lists_;
    std::vector<std::vector<std::string>> side_table_;
    std::optional<substitution_list> subs_;
    dictionary_stats source_stats_;
};

// Throws config_error for k == 0 and build_error for words that do not fit the
// layout (a piece or missing-pieces blob over 255 bytes, or a k = 1 list with
// more than 65,535 entries). With compression enabled, throws codec_error if
// the dictionary is not ASCII.
[[nodiscard]] split_index build_index(const dictionary& dict, unsigned k, const build_config& config = {});

} // namespace splitidx
