#include "splitidx/serialize.hpp"

#include "splitidx/detail/bytes.hpp"
#include "splitidx/error.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <string>
#include <string_view>

namespace splitidx {

namespace {

constexpr std::string_view magic = "SPLITIDX";

class reader {
public:
    explicit reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::span<const std::uint8_t> take(std::size_t n) {
        if (n > bytes_.size() - pos_) {
            throw format_error(format_error::kind::truncated,
                               "index file truncated at byte " + std::to_string(bytes_.size()));
        }
        auto out = bytes_.subspan(pos_, n);
        pos_ += n;
        return out;
    }

    std::uint8_t u8() { return take(1)[0]; }
    std::uint32_t u32() { return detail::load_u32(take(4).data()); }
    std::uint64_t u64() { return detail::load_u64(take(8).data()); }

    // Sizes read from the file must be plausible before anything is allocated.
    std::size_t count(std::size_t element_size) {
        const std::uint64_t n = u64();
        if (element_size != 0 && n > (bytes_.size() - pos_) / element_size) {
            throw format_error(format_error::kind::truncated, "index file truncated: section needs " +
                                                                  std::to_string(n) + " elements");
        }
        return static_cast<std::size_t>(n);
    }

    [[nodiscard]] bool done() const noexcept { return pos_ == bytes_.size(); }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

} // namespace

std::vector<std::uint8_t> serialize_index(const split_index& index) {
    using detail::put_u32;
    using detail::put_u64;
    std::vector<std::uint8_t> out;
    const auto& table = index.table();
    const auto offsets = table.bucket_offsets();
    const auto arena = table.bucket_bytes();
    const auto lists = index.list_bytes();
    out.reserve(128 + offsets.size() * 4 + arena.size() + lists.size());

    out.insert(out.end(), magic.begin(), magic.end());
    put_u32(out, index_format_version);
    put_u32(out, index.k());
    out.push_back(static_cast<std::uint8_t>(table.config().function));
    put_u64(out, std::bit_cast<std::uint64_t>(table.config().max_load_factor));
    put_u64(out, table.bucket_count());
    put_u64(out, table.key_count());

    const auto& stats = index.source_stats();
    put_u64(out, stats.total_bytes);
    put_u64(out, stats.word_count);
    put_u64(out, stats.alphabet_size);

    std::size_t side_words = 0;
    for (const auto& bucket : index.side_table()) {
        side_words += bucket.size();
    }
    put_u64(out, side_words);
    for (const auto& bucket : index.side_table()) {
        for (const auto& w : bucket) {
            out.push_back(static_cast<std::uint8_t>(w.size()));
            out.insert(out.end(), w.begin(), w.end());
        }
    }

    const auto* subs = index.substitutions();
    out.push_back(subs ? 1 : 0);
    put_u32(out, subs ? static_cast<std::uint32_t>(subs->size()) : 0);
    if (subs) {
        for (const auto& e : subs->entries()) {
            out.push_back(e.code);
            out.push_back(static_cast<std::uint8_t>(e.qgram.size()));
            out.insert(out.end(), e.qgram.begin(), e.qgram.end());
        }
    }

    for (std::uint32_t off : offsets) {
        put_u32(out, off);
    }
    put_u64(out, arena.size());
    out.insert(out.end(), arena.begin(), arena.end());
    put_u64(out, lists.size());
    out.insert(out.end(), lists.begin(), lists.end());
    return out;
}

split_index deserialize_index(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < magic.size()) {
        throw format_error(format_error::kind::truncated, "index file shorter than its magic");
    }
    if (std::memcmp(bytes.data(), magic.data(), magic.size()) != 0) {
        throw format_error(format_error::kind::bad_magic, "not a split index file (bad magic)");
    }
    reader in(bytes.subspan(magic.size()));
    const std::uint32_t version = in.u32();
    if (version != index_format_version) {
        throw format_error(format_error::kind::version_mismatch,
                           "index format version " + std::to_string(version) +
                               " is not supported (expected version " +
                               std::to_string(index_format_version) + ")");
    }
    const std::uint32_t k = in.u32();
    if (k == 0 || k > 255) {
        throw format_error(format_error::kind::corrupt, "error budget " + std::to_string(k) + " out of range");
    }

    hash_config hash;
    try {
        hash.function = hash_function_from_id(in.u8());
    } catch (const config_error& e) {
        throw format_error(format_error::kind::corrupt, e.what());
    }
    hash.max_load_factor = std::bit_cast<double>(in.u64());
    if (!(hash.max_load_factor > 0.0)) {
        throw format_error(format_error::kind::corrupt, "max load factor must be positive");
    }
    const std::uint64_t bucket_count = in.u64();
    const std::uint64_t key_count = in.u64();

    dictionary_stats stats;
    stats.total_bytes = in.u64();
    stats.word_count = in.u64();
    stats.alphabet_size = in.u64();

    std::vector<std::vector<std::string>> side(std::size_t{k} + 1);
    const std::size_t side_words = in.count(1);
    for (std::size_t i = 0; i < side_words; ++i) {
        const std::size_t len = in.u8();
        if (len == 0 || len > k) {
            throw format_error(format_error::kind::corrupt, "side-table word length out of range");
        }
        const auto w = in.take(len);
        side[len].emplace_back(reinterpret_cast<const char*>(w.data()), len);
    }

    std::optional<substitution_list> subs;
    const std::uint8_t has_subs = in.u8();
    const std::uint32_t sub_count = in.u32();
    if (has_subs > 1 || (has_subs == 0 && sub_count != 0)) {
        throw format_error(format_error::kind::corrupt, "inconsistent substitution list header");
    }
    if (has_subs) {
        std::vector<substitution> entries;
        for (std::uint32_t i = 0; i < sub_count; ++i) {
            substitution e;
            e.code = in.u8();
            const std::size_t q = in.u8();
            const auto g = in.take(q);
            e.qgram.assign(reinterpret_cast<const char*>(g.data()), q);
            entries.push_back(std::move(e));
        }
        try {
            subs.emplace(std::move(entries));
        } catch (const codec_error& e) {
            throw format_error(format_error::kind::corrupt, std::string("bad substitution list: ") + e.what());
        }
    }

    if (bucket_count == 0 || bucket_count > (bytes.size() / 4)) {
        throw format_error(bucket_count == 0 ? format_error::kind::corrupt : format_error::kind::truncated,
                           "bucket count " + std::to_string(bucket_count) + " is implausible");
    }
    std::vector<std::uint32_t> offsets(static_cast<std::size_t>(bucket_count) + 1);
    for (auto& off : offsets) {
        off = in.u32();
    }
    const std::size_t arena_size = in.count(1);
    const auto arena_bytes = in.take(arena_size);
    std::vector<std::uint8_t> arena(arena_bytes.begin(), arena_bytes.end());
    const std::size_t list_size = in.count(1);
    const auto list_bytes = in.take(list_size);
    std::vector<std::uint8_t> lists(list_bytes.begin(), list_bytes.end());
    if (!in.done()) {
        throw format_error(format_error::kind::corrupt, "trailing bytes after index data");
    }

    index_parts parts{k,
                      piece_table::from_frozen(hash, static_cast<std::size_t>(key_count), std::move(offsets),
                                               std::move(arena)),
                      std::move(lists),
                      std::move(side),
                      std::move(subs),
                      stats};
    return split_index(std::move(parts));
}

void save_index(const split_index& index, const std::filesystem::path& path) {
    const auto bytes = serialize_index(index);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw io_error("cannot open " + path.string() + " for writing");
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw io_error("failed writing " + path.string());
    }
}

split_index load_index(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw io_error("cannot open " + path.string());
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deserialize_index(bytes);
}

} // namespace splitidx
