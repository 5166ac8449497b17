#pragma once

#include "splitidx/dictionary.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace splitidx {

struct misspellings_source {
    std::string path;
};

struct generated_source {
    std::uint64_t seed = 0;
    std::size_t max_errors = 3;
    double per_error_probability = 0.5;
};

struct lines_source {
    std::string path;
};

struct query_set {
    std::vector<std::string> patterns; // all non-empty
    std::variant<misspellings_source, generated_source, lines_source> provenance;
    std::size_t skipped_lines = 0; // malformed input lines that were ignored
};

// Newline-separated words; LF and CRLF accepted, empty lines skipped.
[[nodiscard]] dictionary parse_wordlist(std::string_view text);
[[nodiscard]] dictionary load_wordlist(const std::filesystem::path& path);

// Lines of the form "wrong->right[, right2 ...]"; patterns are the left-hand
// sides in file order. Lines without "->" or with an empty left-hand side are
// counted in skipped_lines.
[[nodiscard]] query_set parse_misspellings(std::string_view text);
[[nodiscard]] query_set load_misspellings(const std::filesystem::path& path);

// One pattern per non-empty line.
[[nodiscard]] query_set load_query_lines(const std::filesystem::path& path);

struct kmer_extraction {
    dictionary kmers;
    std::size_t records = 0;
    std::size_t bases = 0;           // sequence bytes read, all records
    std::size_t skipped_windows = 0; // windows containing a byte outside ACGTN
};

// Distinct length-`length` windows (step 1) of every FASTA record, uppercased.
// Windows never span records. An input without sequence data yields an empty
// dictionary with records == 0 or bases == 0.
[[nodiscard]] kmer_extraction parse_fasta_kmers(std::string_view fasta, std::size_t length = 20);
[[nodiscard]] kmer_extraction extract_kmers(const std::filesystem::path& path, std::size_t length = 20);

// Noisy copies of uniformly sampled dictionary words. Each of up to
// `max_errors` substitutions happens with probability `per_error_probability`
// at a uniform position with a uniform symbol from `alphabet` (the
// dictionary's own alphabet when empty); the symbol may equal the original.
// Uses std::mt19937_64 with hand-written bounded sampling, so a seed yields the
// same queries on every platform. Throws config_error for an empty dictionary.
[[nodiscard]] query_set gen_noisy_queries(const dictionary& dict, std::size_t count, std::uint64_t seed,
                                          std::size_t max_errors = 3, double per_error_probability = 0.5,
                                          std::string_view alphabet = {});

[[nodiscard]] std::string read_file(const std::filesystem::path& path);

} // namespace splitidx
