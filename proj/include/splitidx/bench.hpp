#pragma once

#include "splitidx/datasets.hpp"
#include "splitidx/dictionary.hpp"
#include "splitidx/split_index.hpp"

#include "json.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace splitidx {

struct bench_report {
    // configuration echo
    unsigned k = 1;
    std::string hash;
    double max_load_factor = 0.0;
    std::string compression;

    std::size_t repetitions = 0;
    std::size_t queries_run = 0;   // queries per repetition times repetitions
    std::size_t matches_found = 0; // summed result sizes over one repetition
    double total_seconds = 0.0;
    double mean_query_seconds = 0.0;

    std::size_t index_bytes = 0; // memory.total()
    std::size_t raw_dictionary_bytes = 0;
    memory_breakdown memory;
    bucket_stats buckets;
    list_stats lists;
};

// Times `repetitions` passes over all queries with a monotonic clock around the
// whole loop. `compression` is echoed into the report; when empty it becomes
// "none" or "encoded" depending on the index. Throws config_error on an empty
// query set or zero repetitions.
[[nodiscard]] bench_report run_bench(const split_index& index, const query_set& queries,
                                     std::size_t repetitions, std::string_view compression = {});

struct oracle_report {
    std::size_t repetitions = 0;
    std::size_t queries_run = 0;
    std::size_t matches_found = 0;
    double total_seconds = 0.0;
    double mean_query_seconds = 0.0;
};

// Same protocol, answering every query with the brute-force scan.
[[nodiscard]] oracle_report run_oracle_bench(const dictionary& dict, const query_set& queries, unsigned k,
                                             std::size_t repetitions);

enum class sweep_dimension { hash, load_factor, k, compression };

// "hash", "load_factor" (also "lf"), "k", "compression".
[[nodiscard]] sweep_dimension parse_sweep_dimension(std::string_view name);

// Fixed parameters of a sweep; the swept dimension overrides one of them.
struct sweep_base {
    unsigned k = 1;
    build_config build;
    std::size_t repetitions = 1;
};

// One report per grid value, all against the same query set. Every grid value
// is validated before the first build; an invalid one throws config_error.
[[nodiscard]] std::vector<bench_report> sweep(const dictionary& dict, const query_set& queries,
                                              sweep_dimension dimension, const std::vector<std::string>& grid,
                                              const sweep_base& base);

[[nodiscard]] nlohmann::json to_json(const bench_report& report);
[[nodiscard]] nlohmann::json to_json(const oracle_report& report);
[[nodiscard]] nlohmann::json to_json(const std::vector<bench_report>& reports);

// Tab-separated, one header line plus one line per report.
[[nodiscard]] std::string to_tsv(const std::vector<bench_report>& reports);

} // namespace splitidx
