#include "splitidx/split_index.hpp"

#include "splitidx/detail/bytes.hpp"
#include "splitidx/error.hpp"
#include "splitidx/split.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace splitidx {

namespace {

constexpr std::size_t max_blob = 255;
constexpr std::size_t max_k1_entries = std::numeric_limits<std::uint16_t>::max();

std::string describe(std::string_view word) {
    constexpr std::size_t shown = 40;
    if (word.size() <= shown) {
        return "'" + std::string(word) + "'";
    }
    return "'" + std::string(word.substr(0, shown)) + "...' (" + std::to_string(word.size()) + " bytes)";
}

qgram_policy to_qgram_policy(compression_policy policy) {
    switch (policy) {
    case compression_policy::q2: return qgram_policy::q2;
    case compression_policy::q3: return qgram_policy::q3;
    case compression_policy::q4: return qgram_policy::q4;
    case compression_policy::mixed: return qgram_policy::mixed;
    case compression_policy::none: break;
    }
    throw config_error("compression policy 'none' has no q-gram policy");
}

// Suffix/prefix regions (k = 1) or the single entry region (k > 1) of one list
// while the index is being built.
struct pending_list {
    std::vector<std::uint8_t> head;
    std::vector<std::uint8_t> tail;
    std::size_t head_count = 0;
    std::size_t tail_count = 0;
};

void sort_unique(std::vector<std::string>& out) {
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
}

} // namespace

compression_policy parse_compression_policy(std::string_view name) {
    if (name == "none") {
        return compression_policy::none;
    }
    switch (parse_qgram_policy(name)) {
    case qgram_policy::q2: return compression_policy::q2;
    case qgram_policy::q3: return compression_policy::q3;
    case qgram_policy::q4: return compression_policy::q4;
    case qgram_policy::mixed: return compression_policy::mixed;
    }
    return compression_policy::none;
}

std::string_view compression_policy_name(compression_policy policy) noexcept {
    if (policy == compression_policy::none) {
        return "none";
    }
    return qgram_policy_name(to_qgram_policy(policy));
}

split_index build_index(const dictionary& dict, unsigned k, const build_config& config) {
    if (k == 0) {
        throw config_error("error budget k must be at least 1");
    }

    std::optional<substitution_list> subs;
    if (config.compression != compression_policy::none) {
        if (!dict.is_ascii()) {
            throw codec_error("compression unavailable: dictionary contains bytes >= 128");
        }
        subs = config.substitutions ? *config.substitutions
                                    : mine_substitutions(dict, to_qgram_policy(config.compression),
                                                         config.qgram_limit);
    }

    index_parts parts{k, piece_table(config.hash), {}, {}, subs, dict.stats()};
    parts.side_table.resize(std::size_t{k} + 1);
    std::vector<pending_list> pending;

    std::string missing;
    std::string encoded;
    for (const auto& word : dict.words()) {
        if (word.size() <= k) {
            parts.side_table[word.size()].push_back(word);
            continue;
        }
        for (std::size_t i = 0; i <= k; ++i) {
            const auto b = piece_at(word.size(), k, i);
            const std::string_view key = std::string_view(word).substr(b.offset, b.length);
            if (key.size() > piece_table::max_key_length) {
                throw build_error("word " + describe(word) + " has a piece longer than 255 bytes");
            }
            missing.assign(word, 0, b.offset);
            missing.append(word, b.offset + b.length);
            if (missing.size() > max_blob) {
                throw build_error("word " + describe(word) + " leaves more than 255 missing bytes");
            }
            const std::string* payload = &missing;
            if (subs) {
                encoded.clear();
                subs->encode_append(missing, encoded);
                payload = &encoded;
            }

            const auto [ref, created] = parts.table.find_or_create(key);
            if (created) {
                pending.emplace_back();
            }
            auto& list = pending[ref];
            auto& region = (k == 1 && i == 1) ? list.tail : list.head;
            if (k == 1) {
                (i == 0 ? list.head_count : list.tail_count) += 1;
                if (list.head_count + list.tail_count > max_k1_entries) {
                    throw build_error("list for key '" + std::string(key) +
                                      "' exceeds 65535 entries (16-bit region marker)");
                }
            } else {
                region.push_back(static_cast<std::uint8_t>(i + 1));
            }
            region.push_back(static_cast<std::uint8_t>(payload->size()));
            region.insert(region.end(), payload->begin(), payload->end());
        }
    }

    parts.table.freeze();

    std::size_t total = 0;
    for (const auto& list : pending) {
        total += (k == 1 ? 2 : 0) + list.head.size() + list.tail.size() + 1;
    }
    if (total > std::numeric_limits<std::uint32_t>::max()) {
        throw build_error("list arena exceeds 4 GiB");
    }
    std::vector<list_ref> offsets;
    offsets.reserve(pending.size());
    parts.lists.reserve(total);
    for (auto& list : pending) {
        offsets.push_back(static_cast<list_ref>(parts.lists.size()));
        if (k == 1) {
            const std::size_t marker = list.tail_count > 0 ? list.head_count + 1 : 0;
            detail::put_u16(parts.lists, static_cast<std::uint16_t>(marker));
        }
        parts.lists.insert(parts.lists.end(), list.head.begin(), list.head.end());
        parts.lists.insert(parts.lists.end(), list.tail.begin(), list.tail.end());
        parts.lists.push_back(0);
        list = {};
    }
    parts.table.remap(offsets);

    return split_index(std::move(parts));
}

split_index::split_index(index_parts parts)
    : k_(parts.k),
      table_(std::move(parts.table)),
      lists_(std::move(parts.lists)),
      side_table_(std::move(parts.side_table)),
      subs_(std::move(parts.substitutions)),
      source_stats_(parts.source_stats) {
    auto corrupt = [](const std::string& what) {
        return format_error(format_error::kind::corrupt, "corrupt index: " + what);
    };
    if (k_ == 0 || k_ > 255) {
        throw corrupt("error budget out of range");
    }
    if (!table_.frozen()) {
        throw corrupt("piece table is not frozen");
    }
    if (side_table_.size() != std::size_t{k_} + 1 || !side_table_[0].empty()) {
        throw corrupt("side table shape does not match k");
    }
    for (std::size_t len = 1; len < side_table_.size(); ++len) {
        sort_unique(side_table_[len]);
        for (const auto& w : side_table_[len]) {
            if (w.size() != len) {
                throw corrupt("side table word filed under the wrong length");
            }
        }
    }

    // Walk every list once so queries can trust the layout.
    std::string scratch;
    table_.for_each([&](std::string_view key, list_ref ref) {
        const std::size_t header = k_ == 1 ? 2 : 0;
        std::size_t pos = ref;
        if (pos + header >= lists_.size()) {
            throw corrupt("list reference out of range");
        }
        const std::size_t marker = k_ == 1 ? detail::load_u16(lists_.data() + pos) : 0;
        pos += header;
        std::size_t entries = 0;
        while (true) {
            if (pos >= lists_.size()) {
                throw corrupt("unterminated list");
            }
            std::size_t key_position = 0;
            if (k_ > 1) {
                key_position = lists_[pos];
                if (key_position == 0) {
                    break;
                }
                if (key_position > std::size_t{k_} + 1) {
                    throw corrupt("key position out of range");
                }
                ++pos;
                if (pos >= lists_.size()) {
                    throw corrupt("unterminated list");
                }
            }
            const std::size_t len = lists_[pos];
            if (k_ == 1 && len == 0) {
                break;
            }
            if (len == 0 || pos + 1 + len > lists_.size()) {
                throw corrupt("list entry overruns the arena");
            }
            std::string_view payload(reinterpret_cast<const char*>(lists_.data() + pos + 1), len);
            if (subs_) {
                try {
                    subs_->decode_into(payload, scratch);
                } catch (const codec_error& e) {
                    throw corrupt(e.what());
                }
                payload = scratch;
            }
            if (k_ == 1) {
                key_position = (marker != 0 && entries + 1 >= marker) ? 2 : 1;
            }
            (void)reconstruct(key, payload, key_position, k_, key.size() + payload.size());
            pos += 1 + len;
            ++entries;
        }
        if (k_ == 1 && marker > entries) {
            throw corrupt("region marker beyond the end of its list");
        }
    });
}

template <typename F>
void split_index::visit_list(std::size_t offset, F&& visit) const {
    const std::uint8_t* p = lists_.data() + offset;
    if (k_ == 1) {
        const std::size_t marker = detail::load_u16(p);
        p += 2;
        for (std::size_t idx = 1; *p != 0; ++idx) {
            const std::size_t len = *p;
            visit((marker != 0 && idx >= marker) ? std::size_t{2} : std::size_t{1},
                  std::string_view(reinterpret_cast<const char*>(p + 1), len));
            p += 1 + len;
        }
        return;
    }
    while (*p != 0) {
        const std::size_t pos = p[0];
        const std::size_t len = p[1];
        visit(pos, std::string_view(reinterpret_cast<const char*>(p + 2), len));
        p += 2 + len;
    }
}

std::vector<std::string> split_index::query(std::string_view pattern) const {
    std::vector<std::string> out;
    query_into(pattern, out);
    return out;
}

void split_index::query_into(std::string_view pattern, std::vector<std::string>& out) const {
    out.clear();
    if (pattern.empty()) {
        throw std::invalid_argument("query pattern must not be empty");
    }
    if (pattern.size() <= k_) {
        query_short(pattern.size(), out);
        return;
    }
    if (k_ == 1) {
        query_one_mismatch(pattern, out);
    } else {
        query_many_mismatches(pattern, out);
    }
    sort_unique(out);
}

void split_index::query_short(std::size_t length, std::vector<std::string>& out) const {
    // Every stored word of this length is within distance length <= k.
    out = side_table_[length];
}

void split_index::query_one_mismatch(std::string_view pattern, std::vector<std::string>& out) const {
    const std::size_t cut = common_piece_length(pattern.size(), 1);
    const std::string_view prefix = pattern.substr(0, cut);
    const std::string_view suffix = pattern.substr(cut);
    std::string scratch;

    // Returns true if the stored entry equals `target` in length and differs
    // in at most one position.
    auto verify = [&](const std::uint8_t* entry, std::size_t len, std::string_view target,
                      std::string_view& plain) {
        const char* bytes = reinterpret_cast<const char*>(entry);
        if (subs_) {
            if (len > target.size()) {
                return false;
            }
            subs_->decode_into(std::string_view(bytes, len), scratch);
            plain = scratch;
        } else {
            if (len != target.size()) {
                return false;
            }
            plain = std::string_view(bytes, len);
        }
        return plain.size() == target.size() &&
               detail::mismatches_bounded(plain.data(), target.data(), target.size(), 1) <= 1;
    };

    // Prefix key: only the missing-suffix region can hold aligned words.
    if (const auto ref = table_.lookup(prefix)) {
        const std::uint8_t* p = lists_.data() + *ref;
        const std::size_t marker = detail::load_u16(p);
        p += 2;
        const std::size_t scan = marker == 0 ? std::numeric_limits<std::size_t>::max() : marker - 1;
        std::string_view plain;
        for (std::size_t idx = 0; idx < scan && *p != 0; ++idx) {
            const std::size_t len = *p;
            if (verify(p + 1, len, suffix, plain)) {
                std::string word;
                word.reserve(pattern.size());
                word.append(prefix).append(plain);
                out.push_back(std::move(word));
            }
            p += 1 + len;
        }
    }

    // Suffix key: skip to the missing-prefix region.
    if (const auto ref = table_.lookup(suffix)) {
        const std::uint8_t* p = lists_.data() + *ref;
        const std::size_t marker = detail::load_u16(p);
        p += 2;
        if (marker == 0) {
            return;
        }
        for (std::size_t idx = 1; idx < marker; ++idx) {
            p += 1 + *p;
        }
        std::string_view plain;
        while (*p != 0) {
            const std::size_t len = *p;
            if (verify(p + 1, len, prefix, plain)) {
                std::string word;
                word.reserve(pattern.size());
                word.append(plain).append(suffix);
                out.push_back(std::move(word));
            }
            p += 1 + len;
        }
    }
}

void split_index::query_many_mismatches(std::string_view pattern, std::vector<std::string>& out) const {
    const std::size_t length = pattern.size();
    std::string scratch;
    for (std::size_t i = 0; i <= k_; ++i) {
        const auto b = piece_at(length, k_, i);
        const std::string_view key = pattern.substr(b.offset, b.length);
        const auto ref = table_.lookup(key);
        if (!ref) {
            continue;
        }
        const std::size_t target = length - b.length;
        const auto position = static_cast<std::uint8_t>(i + 1);
        const char* before = pattern.data();
        const char* after = pattern.data() + b.offset + b.length;

        const std::uint8_t* p = lists_.data() + *ref;
        while (p[0] != 0) {
            const std::uint8_t entry_position = p[0];
            const std::size_t len = p[1];
            const auto* bytes = reinterpret_cast<const char*>(p + 2);
            p += 2 + len;
            if (entry_position != position) {
                continue;
            }
            std::string_view plain;
            if (subs_) {
                if (len > target) {
                    continue;
                }
                subs_->decode_into(std::string_view(bytes, len), scratch);
                plain = scratch;
            } else {
                plain = std::string_view(bytes, len);
            }
            if (plain.size() != target) {
                continue;
            }
            std::size_t diff = detail::mismatches_bounded(plain.data(), before, b.offset, k_);
            if (diff > k_) {
                continue;
            }
            diff += detail::mismatches_bounded(plain.data() + b.offset, after, target - b.offset, k_ - diff);
            if (diff > k_) {
                continue;
            }
            std::string word;
            word.reserve(length);
            word.append(plain.substr(0, b.offset)).append(key).append(plain.substr(b.offset));
            out.push_back(std::move(word));
        }
    }
}

std::vector<std::string> split_index::query_full_scan(std::string_view pattern) const {
    if (pattern.empty()) {
        throw std::invalid_argument("query pattern must not be empty");
    }
    std::vector<std::string> out;
    if (pattern.size() <= k_) {
        query_short(pattern.size(), out);
        return out;
    }
    std::string plain;
    for (std::size_t i = 0; i <= k_; ++i) {
        const auto b = piece_at(pattern.size(), k_, i);
        const std::string_view key = pattern.substr(b.offset, b.length);
        const auto ref = table_.lookup(key);
        if (!ref) {
            continue;
        }
        visit_list(*ref, [&](std::size_t key_position, std::string_view payload) {
            plain = subs_ ? subs_->decode(payload) : std::string(payload);
            std::string word = reconstruct(key, plain, key_position, k_, key.size() + plain.size());
            if (word.size() == pattern.size() && hamming_at_most(word, pattern, k_)) {
                out.push_back(std::move(word));
            }
        });
    }
    sort_unique(out);
    return out;
}

memory_breakdown split_index::memory() const noexcept {
    memory_breakdown m;
    m.table_bytes = table_.byte_size();
    m.list_bytes = lists_.size();
    for (const auto& bucket : side_table_) {
        for (const auto& w : bucket) {
            m.side_table_bytes += 1 + w.size();
        }
    }
    m.substitution_bytes = subs_ ? subs_->byte_size() : 0;
    return m;
}

list_stats split_index::lists() const {
    list_stats s;
    table_.for_each([&](std::string_view, list_ref ref) {
        std::size_t entries = 0;
        visit_list(ref, [&](std::size_t, std::string_view payload) {
            ++entries;
            s.payload_bytes += payload.size();
        });
        ++s.list_count;
        s.entry_count += entries;
        s.max_entries = std::max(s.max_entries, entries);
    });
    if (s.list_count > 0) {
        s.mean_entries = static_cast<double>(s.entry_count) / static_cast<double>(s.list_count);
    }
    return s;
}

std::optional<list_contents> split_index::list_for(std::string_view key) const {
    const auto ref = table_.lookup(key);
    if (!ref) {
        return std::nullopt;
    }
    list_contents contents;
    if (k_ == 1) {
        contents.marker = detail::load_u16(lists_.data() + *ref);
    }
    visit_list(*ref, [&](std::size_t key_position, std::string_view payload) {
        contents.entries.push_back({subs_ ? subs_->decode(payload) : std::string(payload), key_position});
    });
    return contents;
}

} // namespace splitidx
