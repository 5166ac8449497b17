#include "splitidx/piece_table.hpp"

#include "splitidx/detail/bytes.hpp"
#include "splitidx/error.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <limits>
#include <string>

namespace splitidx {

namespace {

std::size_t round_up_pow2(std::size_t n) {
    return std::bit_ceil(std::max<std::size_t>(n, 1));
}

void append_entry(std::vector<std::uint8_t>& bucket, std::string_view key, list_ref ref) {
    bucket.push_back(static_cast<std::uint8_t>(key.size()));
    bucket.insert(bucket.end(), key.begin(), key.end());
    detail::put_u32(bucket, ref);
}

} // namespace

piece_table::piece_table(hash_config config) : config_(config) {
    if (!(config_.max_load_factor > 0.0)) {
        throw config_error("max load factor must be positive");
    }
    (void)hash_function_from_id(static_cast<std::uint8_t>(config_.function));

    const std::size_t buckets = round_up_pow2(config_.initial_bucket_count);
    config_.initial_bucket_count = buckets;
    build_buckets_.resize(buckets);
    mask_ = buckets - 1;
}

std::size_t piece_table::bucket_count() const noexcept {
    return frozen_ ? offsets_.size() - 1 : build_buckets_.size();
}

std::size_t piece_table::bucket_of(std::string_view key) const {
    return static_cast<std::size_t>(hash_bytes(key, config_.function)) & mask_;
}

std::optional<list_ref> piece_table::scan(const std::uint8_t* p, const std::uint8_t* end,
                                          std::string_view key) noexcept {
    while (p < end) {
        const std::size_t len = *p;
        if (len == key.size() && std::memcmp(p + 1, key.data(), len) == 0) {
            return detail::load_u32(p + 1 + len);
        }
        p += entry_overhead + len;
    }
    return std::nullopt;
}

std::pair<list_ref, bool> piece_table::find_or_create(std::string_view key) {
    if (frozen_) {
        throw build_error("piece table is frozen; no further insertions");
    }
    if (key.size() > max_key_length) {
        throw build_error("key of " + std::to_string(key.size()) + " bytes exceeds " +
                          std::to_string(max_key_length));
    }
    {
        const auto& bucket = build_buckets_[bucket_of(key)];
        if (auto found = scan(bucket.data(), bucket.data() + bucket.size(), key)) {
            return {*found, false};
        }
    }
    if (key_count_ >= std::numeric_limits<list_ref>::max()) {
        throw build_error("piece table holds the maximum number of keys");
    }

    // Grow before completing the insertion so the load factor never exceeds the
    // maximum, even transiently.
    std::size_t buckets = build_buckets_.size();
    while (static_cast<double>(key_count_ + 1) > config_.max_load_factor * static_cast<double>(buckets)) {
        buckets *= 2;
    }
    if (buckets != build_buckets_.size()) {
        grow_to(buckets);
    }

    const auto ref = static_cast<list_ref>(key_count_);
    append_entry(build_buckets_[bucket_of(key)], key, ref);
    ++key_count_;
    return {ref, true};
}

void piece_table::grow_to(std::size_t new_bucket_count) {
    std::vector<std::vector<std::uint8_t>> old = std::move(build_buckets_);
    build_buckets_.assign(new_bucket_count, {});
    mask_ = new_bucket_count - 1;
    auto reinsert = [this](std::string_view key, list_ref ref) {
        append_entry(build_buckets_[bucket_of(key)], key, ref);
    };
    for (const auto& bucket : old) {
        visit_region(bucket.data(), bucket.data() + bucket.size(), reinsert);
    }
}

std::optional<list_ref> piece_table::lookup(std::string_view key) const {
    const std::size_t b = bucket_of(key);
    if (frozen_) {
        const std::uint8_t* base = arena_.data();
        return scan(base + offsets_[b], base + offsets_[b + 1], key);
    }
    const auto& bucket = build_buckets_[b];
    return scan(bucket.data(), bucket.data() + bucket.size(), key);
}

void piece_table::freeze() {
    if (frozen_) {
        return;
    }
    std::size_t total = 0;
    for (const auto& bucket : build_buckets_) {
        total += bucket.size();
    }
    if (total > std::numeric_limits<std::uint32_t>::max()) {
        throw build_error("bucket arena exceeds 4 GiB");
    }
    offsets_.clear();
    offsets_.reserve(build_buckets_.size() + 1);
    arena_.clear();
    arena_.reserve(total);
    for (const auto& bucket : build_buckets_) {
        offsets_.push_back(static_cast<std::uint32_t>(arena_.size()));
        arena_.insert(arena_.end(), bucket.begin(), bucket.end());
    }
    offsets_.push_back(static_cast<std::uint32_t>(arena_.size()));
    build_buckets_.clear();
    build_buckets_.shrink_to_fit();
    frozen_ = true;
}

void piece_table::remap(std::span<const list_ref> new_refs) {
    if (!frozen_) {
        throw build_error("remap requires a frozen piece table");
    }
    if (new_refs.size() != key_count_) {
        throw build_error("remap table size does not match key count");
    }
    std::uint8_t* p = arena_.data();
    std::uint8_t* end = p + arena_.size();
    while (p < end) {
        const std::size_t len = *p;
        std::uint8_t* r = p + 1 + len;
        detail::store_u32(r, new_refs[detail::load_u32(r)]);
        p = r + sizeof(list_ref);
    }
}

bucket_stats piece_table::stats() const {
    bucket_stats s;
    s.bucket_count = bucket_count();
    s.key_count = key_count_;
    for (std::size_t b = 0; b < s.bucket_count; ++b) {
        std::size_t chain = 0;
        auto count = [&chain](std::string_view, list_ref) { ++chain; };
        if (frozen_) {
            visit_region(arena_.data() + offsets_[b], arena_.data() + offsets_[b + 1], count);
        } else {
            const auto& bucket = build_buckets_[b];
            visit_region(bucket.data(), bucket.data() + bucket.size(), count);
        }
        if (chain > 0) {
            ++s.occupied_buckets;
        }
        s.max_chain = std::max(s.max_chain, chain);
    }
    if (s.bucket_count > 0) {
        s.load_factor = static_cast<double>(s.key_count) / static_cast<double>(s.bucket_count);
        s.mean_chain = s.load_factor;
    }
    if (s.occupied_buckets > 0) {
        s.mean_occupied_chain =
            static_cast<double>(s.key_count) / static_cast<double>(s.occupied_buckets);
    }
    return s;
}

std::size_t piece_table::byte_size() const noexcept {
    if (frozen_) {
        return offsets_.size() * sizeof(std::uint32_t) + arena_.size();
    }
    std::size_t total = (build_buckets_.size() + 1) * sizeof(std::uint32_t);
    for (const auto& bucket : build_buckets_) {
        total += bucket.size();
    }
    return total;
}

piece_table piece_table::from_frozen(hash_config config, std::size_t key_count,
                                     std::vector<std::uint32_t> offsets,
                                     std::vector<std::uint8_t> arena) {
    auto corrupt = [](const std::string& what) {
        return format_error(format_error::kind::corrupt, "corrupt piece table: " + what);
    };
    if (offsets.size() < 2 || !std::has_single_bit(offsets.size() - 1)) {
        throw corrupt("bucket count is not a power of two");
    }
    if (offsets.front() != 0 || offsets.back() != arena.size()) {
        throw corrupt("bucket directory does not span the arena");
    }

    config.initial_bucket_count = offsets.size() - 1;
    piece_table table(config);
    table.build_buckets_.clear();
    table.mask_ = offsets.size() - 2;

    std::size_t seen = 0;
    for (std::size_t b = 0; b + 1 < offsets.size(); ++b) {
        if (offsets[b] > offsets[b + 1]) {
            throw corrupt("bucket offsets are not monotone");
        }
        std::size_t pos = offsets[b];
        const std::size_t end = offsets[b + 1];
        while (pos < end) {
            const std::size_t len = arena[pos];
            if (pos + entry_overhead + len > end) {
                throw corrupt("entry overruns its bucket");
            }
            std::string_view key(reinterpret_cast<const char*>(arena.data() + pos + 1), len);
            if (table.bucket_of(key) != b) {
                throw corrupt("key stored in the wrong bucket");
            }
            pos += entry_overhead + len;
            ++seen;
        }
    }
    if (seen != key_count) {
        throw corrupt("key count mismatch");
    }
    table.key_count_ = key_count;
    table.offsets_ = std::move(offsets);
    table.arena_ = std::move(arena);
    table.frozen_ = true;
    return table;
}

} // namespace splitidx
