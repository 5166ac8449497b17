#include "splitidx/datasets.hpp"

#include "splitidx/error.hpp"

#include <array>
#include <cctype>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_set>

namespace splitidx {

namespace {

// Calls visit(line) for every line with the trailing CR removed.
template <typename F>
void for_each_line(std::string_view text, F&& visit) {
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        visit(line);
    }
}

// Unbiased integer in [0, bound) by rejection.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t threshold = (std::uint64_t{0} - bound) % bound;
    while (true) {
        const std::uint64_t r = rng();
        if (r >= threshold) {
            return r % bound;
        }
    }
}

// Uniform double in [0, 1) from the top 53 bits.
double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

bool is_nucleotide(char c) {
    return c == 'A' || c == 'C' || c == 'G' || c == 'T' || c == 'N';
}

} // namespace

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw io_error("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
        throw io_error("failed reading " + path.string());
    }
    return buf.str();
}

dictionary parse_wordlist(std::string_view text) {
    std::vector<std::string> words;
    for_each_line(text, [&](std::string_view line) {
        if (!line.empty()) {
            words.emplace_back(line);
        }
    });
    return dictionary(std::move(words));
}

dictionary load_wordlist(const std::filesystem::path& path) {
    return parse_wordlist(read_file(path));
}

query_set parse_misspellings(std::string_view text) {
    query_set qs;
    qs.provenance = misspellings_source{};
    for_each_line(text, [&](std::string_view line) {
        if (line.empty()) {
            return;
        }
        const auto arrow = line.find("->");
        if (arrow == std::string_view::npos || arrow == 0) {
            ++qs.skipped_lines;
            return;
        }
        qs.patterns.emplace_back(line.substr(0, arrow));
    });
    return qs;
}

query_set load_misspellings(const std::filesystem::path& path) {
    auto qs = parse_misspellings(read_file(path));
    qs.provenance = misspellings_source{path.string()};
    return qs;
}

query_set load_query_lines(const std::filesystem::path& path) {
    query_set qs;
    qs.provenance = lines_source{path.string()};
    for_each_line(read_file(path), [&](std::string_view line) {
        if (!line.empty()) {
            qs.patterns.emplace_back(line);
        }
    });
    return qs;
}

kmer_extraction parse_fasta_kmers(std::string_view fasta, std::size_t length) {
    if (length == 0) {
        throw config_error("k-mer length must be positive");
    }
    kmer_extraction result;
    std::unordered_set<std::string> distinct;
    std::string sequence;

    auto flush = [&] {
        result.bases += sequence.size();
        for (std::size_t i = 0; i + length <= sequence.size(); ++i) {
            const std::string_view window = std::string_view(sequence).substr(i, length);
            bool valid = true;
            for (char c : window) {
                if (!is_nucleotide(c)) {
                    valid = false;
                    break;
                }
            }
            if (valid) {
                distinct.emplace(window);
            } else {
                ++result.skipped_windows;
            }
        }
        sequence.clear();
    };

    bool in_record = false;
    for_each_line(fasta, [&](std::string_view line) {
        if (!line.empty() && line.front() == '>') {
            if (in_record) {
                flush();
            }
            in_record = true;
            ++result.records;
            return;
        }
        if (!in_record && !line.empty()) {
            // Sequence before any header: treat as an unnamed record.
            in_record = true;
            ++result.records;
        }
        for (char c : line) {
            if (!std::isspace(static_cast<unsigned char>(c))) {
                sequence.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
            }
        }
    });
    if (in_record) {
        flush();
    }
    result.kmers = dictionary(std::vector<std::string>(distinct.begin(), distinct.end()));
    return result;
}

kmer_extraction extract_kmers(const std::filesystem::path& path, std::size_t length) {
    return parse_fasta_kmers(read_file(path), length);
}

query_set gen_noisy_queries(const dictionary& dict, std::size_t count, std::uint64_t seed,
                            std::size_t max_errors, double per_error_probability, std::string_view alphabet) {
    if (dict.empty()) {
        throw config_error("cannot generate queries from an empty dictionary");
    }
    if (!(per_error_probability >= 0.0 && per_error_probability <= 1.0)) {
        throw config_error("per-error probability must lie in [0, 1]");
    }
    const std::string_view symbols = alphabet.empty() ? std::string_view(dict.alphabet()) : alphabet;

    query_set qs;
    qs.provenance = generated_source{seed, max_errors, per_error_probability};
    qs.patterns.reserve(count);
    std::mt19937_64 rng(seed);
    const auto& words = dict.words();
    for (std::size_t n = 0; n < count; ++n) {
        std::string pattern = words[uniform_below(rng, words.size())];
        for (std::size_t e = 0; e < max_errors; ++e) {
            if (uniform_unit(rng) < per_error_probability) {
                const auto pos = uniform_below(rng, pattern.size());
                pattern[pos] = symbols[uniform_below(rng, symbols.size())];
            }
        }
        qs.patterns.push_back(std::move(pattern));
    }
    return qs;
}

} // namespace splitidx
