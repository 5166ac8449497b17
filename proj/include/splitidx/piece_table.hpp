#pragma once

#include "splitidx/hash.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace splitidx {

struct hash_config {
    hash_function function = hash_function::xxhash;
    double max_load_factor = 2.0;
    std::size_t initial_bucket_count = 16; // rounded up to a power of two
};

// Opaque reference stored next to each key. During the build phase it is the
// creation ordinal of the key (0, 1, 2, ...); the owner may remap it once after
// freezing, e.g. to a byte offset into its own storage.
using list_ref = std::uint32_t;

struct bucket_stats {
    std::size_t bucket_count = 0;
    std::size_t key_count = 0;
    std::size_t occupied_buckets = 0;
    std::size_t max_chain = 0;
    double load_factor = 0.0;         // key_count / bucket_count
    double mean_chain = 0.0;          // same as load_factor, over all buckets
    double mean_occupied_chain = 0.0; // key_count / occupied_buckets
};

// Separate-chaining hash table mapping byte-string keys to list references.
//
// Every bucket is a contiguous byte region holding entries of the form
//
//     [u8 key length][key bytes][u32 list_ref, little-endian]
//
// so the reference always sits right next to its key. While building, each
// bucket is its own growable region and the whole table is rehashed when the
// load factor would exceed the configured maximum. freeze() packs all buckets
// into a single arena addressed by a (bucket_count + 1)-entry offset directory;
// lookups are valid in both phases, insertions only before freezing.
class piece_table {
public:
    static constexpr std::size_t max_key_length = 255;

    explicit piece_table(hash_config config = {});

    // Returns the reference stored for `key`, installing a fresh one if the key
    // is new. `second` is true when the key was created by this call.
    std::pair<list_ref, bool> find_or_create(std::string_view key);

    [[nodiscard]] std::optional<list_ref> lookup(std::string_view key) const;

    void freeze();
    [[nodiscard]] bool frozen() const noexcept { return frozen_; }

    // Frozen only: replaces every stored reference r with new_refs[r].
    void remap(std::span<const list_ref> new_refs);

    // Visits (key, ref) in bucket order.
    template <typename F>
    void for_each(F&& visit) const;

    [[nodiscard]] bucket_stats stats() const;
    [[nodiscard]] std::size_t key_count() const noexcept { return key_count_; }
    [[nodiscard]] std::size_t bucket_count() const noexcept;
    [[nodiscard]] const hash_config& config() const noexcept { return config_; }

    // Frozen footprint: offset directory plus bucket arena.
    [[nodiscard]] std::size_t byte_size() const noexcept;

    [[nodiscard]] std::span<const std::uint32_t> bucket_offsets() const noexcept { return offsets_; }
    [[nodiscard]] std::span<const std::uint8_t> bucket_bytes() const noexcept { return arena_; }

    // Rebuilds a frozen table from its serialized parts, validating structure.
    // Throws format_error(corrupt) on any inconsistency.
    static piece_table from_frozen(hash_config config, std::size_t key_count,
                                   std::vector<std::uint32_t> offsets,
                                   std::vector<std::uint8_t> arena);

private:
    static constexpr std::size_t entry_overhead = 1 + sizeof(list_ref);

    [[nodiscard]] std::size_t bucket_of(std::string_view key) const;
    void grow_to(std::size_t new_bucket_count);

    static std::optional<list_ref> scan(const std::uint8_t* p, const std::uint8_t* end,
                                        std::string_view key) noexcept;

    template <typename F>
    static void visit_region(const std::uint8_t* p, const std::uint8_t* end, F& visit);

    hash_config config_;
    std::size_t key_count_ = 0;
    std::size_t mask_ = 0;
    bool frozen_ = false;

    std::vector<std::vector<std::uint8_t>> build_buckets_;

    std::vector<std::uint32_t> offsets_;
    std::vector<std::uint8_t> arena_;
};

template <typename F>
void piece_table::visit_region(const std::uint8_t* p, const std::uint8_t* end, F& visit) {
    while (p < end) {
        const std::size_t len = *p;
        std::string_view key(reinterpret_cast<const char*>(p + 1), len);
        const std::uint8_t* r = p + 1 + len;
        const list_ref ref = static_cast<list_ref>(r[0]) | (static_cast<list_ref>(r[1]) << 8) |
                             (static_cast<list_ref>(r[2]) << 16) |
                             (static_cast<list_ref>(r[3]) << 24);
        visit(key, ref);
        p = r + sizeof(list_ref);
    }
}

template <typename F>
void piece_table::for_each(F&& visit) const {
    if (frozen_) {
        for (std::size_t b = 0; b + 1 < offsets_.size(); ++b) {
            visit_region(arena_.data() + offsets_[b], arena_.data() + offsets_[b + 1], visit);
        }
    } else {
        for (const auto& bucket : build_buckets_) {
            visit_region(bucket.data(), bucket.data() + bucket.size(), visit);
        }
    }
}

} // namespace splitidx
