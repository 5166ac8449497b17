#include "splitidx/qgram.hpp"

#include "splitidx/error.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace splitidx {

namespace {

std::uint32_t pack(const char* p, std::size_t q) noexcept {
    std::uint32_t key = 0;
    for (std::size_t j = 0; j < q; ++j) {
        key |= static_cast<std::uint32_t>(static_cast<unsigned char>(p[j])) << (8 * j);
    }
    return key;
}

std::size_t slot_of(std::uint32_t key, std::size_t slots) noexcept {
    return (key * 0x9E3779B1u) & (slots - 1);
}

codec_error non_ascii(unsigned char c) {
    return codec_error("byte " + std::to_string(c) + " >= 128 cannot be q-gram encoded");
}

} // namespace

qgram_policy parse_qgram_policy(std::string_view name) {
    if (name == "2gram") return qgram_policy::q2;
    if (name == "3gram") return qgram_policy::q3;
    if (name == "4gram") return qgram_policy::q4;
    if (name == "mixed") return qgram_policy::mixed;
    throw config_error("unknown q-gram policy '" + std::string(name) +
                       "' (expected 2gram, 3gram, 4gram or mixed)");
}

std::string_view qgram_policy_name(qgram_policy policy) noexcept {
    switch (policy) {
    case qgram_policy::q2: return "2gram";
    case qgram_policy::q3: return "3gram";
    case qgram_policy::q4: return "4gram";
    case qgram_policy::mixed: return "mixed";
    }
    return "unknown";
}

void substitution_list::code_map::insert(std::uint32_t key, std::uint8_t code) noexcept {
    std::size_t s = slot_of(key, slots);
    while (keys[s] != empty_key) {
        s = (s + 1) & (slots - 1);
    }
    keys[s] = key;
    codes[s] = code;
}

std::uint8_t substitution_list::code_map::find(std::uint32_t key) const noexcept {
    std::size_t s = slot_of(key, slots);
    while (keys[s] != empty_key) {
        if (keys[s] == key) {
            return codes[s];
        }
        s = (s + 1) & (slots - 1);
    }
    return 0;
}

substitution_list::substitution_list(std::vector<substitution> entries) : entries_(std::move(entries)) {
    if (entries_.size() > max_entries) {
        throw codec_error("substitution list holds more than 128 entries");
    }
    std::stable_sort(entries_.begin(), entries_.end(), [](const substitution& a, const substitution& b) {
        return a.qgram.size() > b.qgram.size();
    });

    std::array<bool, 128> code_used{};
    for (const auto& e : entries_) {
        if (e.qgram.size() < min_q || e.qgram.size() > max_q) {
            throw codec_error("q-gram '" + e.qgram + "' must be 2 to 4 bytes long");
        }
        for (unsigned char c : e.qgram) {
            if (c >= 128) {
                throw non_ascii(c);
            }
        }
        if (e.code < 128) {
            throw codec_error("code " + std::to_string(e.code) + " is outside 128..255");
        }
        const std::size_t slot = e.code - 128u;
        if (code_used[slot]) {
            throw codec_error("code " + std::to_string(e.code) + " assigned twice");
        }
        code_used[slot] = true;

        const std::size_t q = e.qgram.size();
        const std::uint32_t key = pack(e.qgram.data(), q);
        if (by_length_[q].find(key) != 0) {
            throw codec_error("q-gram '" + e.qgram + "' listed twice");
        }
        by_length_[q].insert(key, e.code);
        has_length_[q] = true;
        std::copy(e.qgram.begin(), e.qgram.end(), expansion_[slot].begin());
        expansion_length_[slot] = static_cast<std::uint8_t>(q);
    }
}

void substitution_list::encode_append(std::string_view plain, std::string& out) const {
    const char* p = plain.data();
    const std::size_t n = plain.size();
    std::size_t i = 0;
    while (i < n) {
        const auto c = static_cast<unsigned char>(p[i]);
        if (c >= 128) {
            throw non_ascii(c);
        }
        std::size_t consumed = 1;
        char emit = p[i];
        for (std::size_t q = max_q; q >= min_q; --q) {
            if (!has_length_[q] || i + q > n) {
                continue;
            }
            if (const std::uint8_t code = by_length_[q].find(pack(p + i, q)); code != 0) {
                emit = static_cast<char>(code);
                consumed = q;
                break;
            }
        }
        out.push_back(emit);
        i += consumed;
    }
}

std::string substitution_list::encode(std::string_view plain) const {
    std::string out;
    out.reserve(plain.size());
    encode_append(plain, out);
    return out;
}

void substitution_list::decode_into(std::string_view encoded, std::string& out) const {
    out.clear();
    for (char ch : encoded) {
        const auto c = static_cast<unsigned char>(ch);
        if (c < 128) {
            out.push_back(ch);
            continue;
        }
        const std::size_t len = expansion_length_[c - 128u];
        if (len == 0) {
            throw codec_error("code byte " + std::to_string(c) + " has no substitution entry");
        }
        out.append(expansion_[c - 128u].data(), len);
    }
}

std::string substitution_list::decode(std::string_view encoded) const {
    std::string out;
    decode_into(encoded, out);
    return out;
}

std::size_t substitution_list::byte_size() const noexcept {
    std::size_t total = 0;
    for (const auto& e : entries_) {
        total += 2 + e.qgram.size();
    }
    return total;
}

namespace {

// Occurrence counter for one q. Dense over the dictionary alphabet when small
// enough, hashed otherwise. Counts only non-overlapping occurrences of each
// q-gram (greedy, left to right).
class gram_counter {
public:
    gram_counter(std::size_t q, const std::array<int, 256>& rank, std::size_t sigma)
        : q_(q), rank_(rank) {
        std::size_t space = 1;
        for (std::size_t j = 0; j < q; ++j) {
            space *= std::max<std::size_t>(sigma, 1);
        }
        sigma_ = std::max<std::size_t>(sigma, 1);
        dense_ = space <= (std::size_t{1} << 22);
        if (dense_) {
            counts_.assign(space, 0);
            next_free_.assign(space, 0);
        }
    }

    [[nodiscard]] std::size_t q() const noexcept { return q_; }

    // `pos` is a global position, `p` points at q plain bytes.
    void observe(const char* p, std::uint64_t pos) {
        if (dense_) {
            std::size_t idx = 0;
            for (std::size_t j = q_; j-- > 0;) {
                idx = idx * sigma_ + static_cast<std::size_t>(rank_[static_cast<unsigned char>(p[j])]);
            }
            if (pos >= next_free_[idx]) {
                ++counts_[idx];
                next_free_[idx] = pos + q_;
            }
        } else {
            auto& slot = sparse_[pack(p, q_)];
            if (pos >= slot.next_free) {
                ++slot.count;
                slot.next_free = pos + q_;
            }
        }
    }

    template <typename F>
    void for_each(F&& visit, const std::string& alphabet) const {
        std::string gram(q_, '\0');
        if (dense_) {
            for (std::size_t idx = 0; idx < counts_.size(); ++idx) {
                if (counts_[idx] == 0) {
                    continue;
                }
                std::size_t rest = idx;
                for (std::size_t j = 0; j < q_; ++j) {
                    gram[j] = alphabet[rest % sigma_];
                    rest /= sigma_;
                }
                visit(std::string_view(gram), counts_[idx]);
            }
        } else {
            for (const auto& [key, slot] : sparse_) {
                for (std::size_t j = 0; j < q_; ++j) {
                    gram[j] = static_cast<char>((key >> (8 * j)) & 0xFF);
                }
                visit(std::string_view(gram), slot.count);
            }
        }
    }

private:
    struct sparse_slot {
        std::uint64_t count = 0;
        std::uint64_t next_free = 0;
    };

    std::size_t q_;
    const std::array<int, 256>& rank_;
    std::size_t sigma_ = 1;
    bool dense_ = true;
    std::vector<std::uint64_t> counts_;
    std::vector<std::uint64_t> next_free_;
    std::unordered_map<std::uint32_t, sparse_slot> sparse_;
};

std::vector<std::size_t> policy_lengths(qgram_policy policy) {
    switch (policy) {
    case qgram_policy::q2: return {2};
    case qgram_policy::q3: return {3};
    case qgram_policy::q4: return {4};
    case qgram_policy::mixed: return {2, 3, 4};
    }
    return {};
}

} // namespace

substitution_list mine_substitutions(const dictionary& dict, qgram_policy policy, std::size_t limit) {
    if (!dict.is_ascii()) {
        throw codec_error("compression unavailable: dictionary contains bytes >= 128");
    }
    limit = std::min(limit, substitution_list::max_entries);
    const std::string& alphabet = dict.alphabet();
    std::array<int, 256> rank{};
    for (std::size_t i = 0; i < alphabet.size(); ++i) {
        rank[static_cast<unsigned char>(alphabet[i])] = static_cast<int>(i);
    }
    const auto lengths = policy_lengths(policy);

    std::vector<substitution> picked;
    std::string residual;
    while (picked.size() < limit) {
        std::vector<substitution> trial = picked;
        for (std::size_t i = 0; i < trial.size(); ++i) {
            trial[i].code = static_cast<std::uint8_t>(128 + i);
        }
        const substitution_list current(std::move(trial));

        std::vector<gram_counter> counters;
        counters.reserve(lengths.size());
        for (std::size_t q : lengths) {
            counters.emplace_back(q, rank, alphabet.size());
        }

        std::uint64_t base = 0;
        for (const auto& word : dict.words()) {
            residual.clear();
            current.encode_append(word, residual);
            // Scan each maximal run of plain bytes.
            std::size_t i = 0;
            while (i < residual.size()) {
                if (static_cast<unsigned char>(residual[i]) >= 128) {
                    ++i;
                    continue;
                }
                std::size_t run_end = i;
                while (run_end < residual.size() && static_cast<unsigned char>(residual[run_end]) < 128) {
                    ++run_end;
                }
                for (auto& counter : counters) {
                    const std::size_t q = counter.q();
                    for (std::size_t s = i; s + q <= run_end; ++s) {
                        counter.observe(residual.data() + s, base + s);
                    }
                }
                i = run_end;
            }
            base += residual.size() + substitution_list::max_q;
        }

        substitution best;
        for (const auto& counter : counters) {
            counter.for_each(
                [&](std::string_view gram, std::uint64_t count) {
                    const std::size_t savings = static_cast<std::size_t>(count) * (gram.size() - 1);
                    const bool better =
                        savings > best.savings ||
                        (savings == best.savings && savings > 0 &&
                         (gram.size() > best.qgram.size() ||
                          (gram.size() == best.qgram.size() && gram < best.qgram)));
                    if (better) {
                        best.qgram.assign(gram);
                        best.savings = savings;
                    }
                },
                alphabet);
        }
        if (best.savings == 0) {
            break;
        }
        picked.push_back(std::move(best));
    }

    std::stable_sort(picked.begin(), picked.end(), [](const substitution& a, const substitution& b) {
        if (a.qgram.size() != b.qgram.size()) {
            return a.qgram.size() > b.qgram.size();
        }
        if (a.savings != b.savings) {
            return a.savings > b.savings;
        }
        return a.qgram < b.qgram;
    });
    for (std::size_t i = 0; i < picked.size(); ++i) {
        picked[i].code = static_cast<std::uint8_t>(128 + i);
    }
    return substitution_list(std::move(picked));
}

double compression_ratio(const dictionary& dict, const substitution_list& subs) {
    std::size_t plain = 0;
    std::size_t encoded = 0;
    std::string scratch;
    for (const auto& word : dict.words()) {
        plain += word.size();
        scratch.clear();
        subs.encode_append(word, scratch);
        encoded += scratch.size();
    }
    if (encoded == 0) {
        return 1.0;
    }
    return static_cast<double>(plain) / static_cast<double>(encoded);
}

std::string format_substitutions(const substitution_list& subs) {
    std::string out;
    for (const auto& e : subs.entries()) {
        if (e.qgram.find_first_of("\n\r") != std::string::npos) {
            throw codec_error("q-gram containing a line break cannot be written as text");
        }
        out += std::to_string(e.code);
        out += '\t';
        out += e.qgram;
        out += '\n';
    }
    return out;
}

substitution_list parse_substitutions(std::string_view text) {
    std::vector<substitution> entries;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.empty()) {
            continue;
        }
        const auto tab = line.find('\t');
        if (tab == std::string_view::npos || tab == 0) {
            throw codec_error("substitution line " + std::to_string(line_no) + ": expected <code>\\t<q-gram>");
        }
        unsigned code = 0;
        for (char c : line.substr(0, tab)) {
            if (c < '0' || c > '9' || code > 255) {
                throw codec_error("substitution line " + std::to_string(line_no) + ": bad code");
            }
            code = code * 10 + static_cast<unsigned>(c - '0');
        }
        if (code > 255) {
            throw codec_error("substitution line " + std::to_string(line_no) + ": bad code");
        }
        substitution e;
        e.code = static_cast<std::uint8_t>(code);
        e.qgram.assign(line.substr(tab + 1));
        entries.push_back(std::move(e));
    }
    return substitution_list(std::move(entries));
}

void save_substitutions(const substitution_list& subs, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw io_error("cannot open " + path.string() + " for writing");
    }
    out << format_substitutions(subs);
    if (!out) {
        throw io_error("failed writing " + path.string());
    }
}

substitution_list load_substitutions(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw io_error("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_substitutions(buf.str());
}

} // namespace splitidx
