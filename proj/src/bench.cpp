#include "splitidx/bench.hpp"

#include "splitidx/error.hpp"
#include "splitidx/oracle.hpp"

#include <charconv>
#include <chrono>
#include <sstream>

namespace splitidx {

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point start) {
    return std::chrono::duration<double>(clock_type::now() - start).count();
}

void check_workload(const query_set& queries, std::size_t repetitions) {
    if (queries.patterns.empty()) {
        throw config_error("benchmark needs at least one query");
    }
    if (repetitions == 0) {
        throw config_error("benchmark needs at least one repetition");
    }
}

unsigned parse_k(const std::string& text) {
    unsigned value = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size() || value == 0 || value > 255) {
        throw config_error("invalid k grid value '" + text + "' (expected an integer in 1..255)");
    }
    return value;
}

double parse_load_factor(const std::string& text) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || !(value > 0.0)) {
        throw config_error("invalid load factor grid value '" + text + "' (expected a positive number)");
    }
    return value;
}

} // namespace

bench_report run_bench(const split_index& index, const query_set& queries, std::size_t repetitions,
                       std::string_view compression) {
    check_workload(queries, repetitions);
    bench_report r;
    r.k = index.k();
    r.hash = std::string(hash_function_name(index.table().config().function));
    r.max_load_factor = index.table().config().max_load_factor;
    r.compression = !compression.empty() ? std::string(compression)
                                         : (index.substitutions() ? "encoded" : "none");
    r.repetitions = repetitions;

    std::vector<std::string> results;
    std::size_t total_matches = 0;
    const auto start = clock_type::now();
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
        for (const auto& pattern : queries.patterns) {
            index.query_into(pattern, results);
            total_matches += results.size();
        }
    }
    r.total_seconds = seconds_since(start);
    r.queries_run = queries.patterns.size() * repetitions;
    r.matches_found = total_matches / repetitions;
    r.mean_query_seconds = r.total_seconds / static_cast<double>(r.queries_run);

    r.memory = index.memory();
    r.index_bytes = r.memory.total();
    r.raw_dictionary_bytes = index.source_stats().total_bytes;
    r.buckets = index.table().stats();
    r.lists = index.lists();
    return r;
}

oracle_report run_oracle_bench(const dictionary& dict, const query_set& queries, unsigned k,
                               std::size_t repetitions) {
    check_workload(queries, repetitions);
    oracle_report r;
    r.repetitions = repetitions;
    std::size_t total_matches = 0;
    const auto start = clock_type::now();
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
        for (const auto& pattern : queries.patterns) {
            total_matches += oracle_query(dict, pattern, k).size();
        }
    }
    r.total_seconds = seconds_since(start);
    r.queries_run = queries.patterns.size() * repetitions;
    r.matches_found = total_matches / repetitions;
    r.mean_query_seconds = r.total_seconds / static_cast<double>(r.queries_run);
    return r;
}

sweep_dimension parse_sweep_dimension(std::string_view name) {
    if (name == "hash") return sweep_dimension::hash;
    if (name == "load_factor" || name == "lf") return sweep_dimension::load_factor;
    if (name == "k") return sweep_dimension::k;
    if (name == "compression") return sweep_dimension::compression;
    throw config_error("unknown sweep dimension '" + std::string(name) +
                       "' (expected hash, load_factor, k or compression)");
}

std::vector<bench_report> sweep(const dictionary& dict, const query_set& queries, sweep_dimension dimension,
                                const std::vector<std::string>& grid, const sweep_base& base) {
    if (grid.empty()) {
        throw config_error("sweep grid is empty");
    }
    check_workload(queries, base.repetitions);

    struct point {
        unsigned k;
        build_config build;
    };
    std::vector<point> points;
    for (const auto& value : grid) {
        point p{base.k, base.build};
        switch (dimension) {
        case sweep_dimension::hash:
            p.build.hash.function = parse_hash_function(value);
            break;
        case sweep_dimension::load_factor:
            p.build.hash.max_load_factor = parse_load_factor(value);
            break;
        case sweep_dimension::k:
            p.k = parse_k(value);
            break;
        case sweep_dimension::compression:
            p.build.compression = parse_compression_policy(value);
            break;
        }
        points.push_back(std::move(p));
    }

    std::vector<bench_report> reports;
    reports.reserve(points.size());
    for (const auto& p : points) {
        const auto index = build_index(dict, p.k, p.build);
        reports.push_back(run_bench(index, queries, base.repetitions, compression_policy_name(p.build.compression)));
    }
    return reports;
}

nlohmann::json to_json(const bench_report& r) {
    return {
        {"k", r.k},
        {"hash", r.hash},
        {"max_load_factor", r.max_load_factor},
        {"compression", r.compression},
        {"repetitions", r.repetitions},
        {"queries_run", r.queries_run},
        {"matches_found", r.matches_found},
        {"total_seconds", r.total_seconds},
        {"mean_query_seconds", r.mean_query_seconds},
        {"index_bytes", r.index_bytes},
        {"raw_dictionary_bytes", r.raw_dictionary_bytes},
        {"memory",
         {{"table_bytes", r.memory.table_bytes},
          {"list_bytes", r.memory.list_bytes},
          {"side_table_bytes", r.memory.side_table_bytes},
          {"substitution_bytes", r.memory.substitution_bytes}}},
        {"buckets",
         {{"bucket_count", r.buckets.bucket_count},
          {"key_count", r.buckets.key_count},
          {"occupied_buckets", r.buckets.occupied_buckets},
          {"load_factor", r.buckets.load_factor},
          {"mean_chain", r.buckets.mean_chain},
          {"mean_occupied_chain", r.buckets.mean_occupied_chain},
          {"max_chain", r.buckets.max_chain}}},
        {"lists",
         {{"list_count", r.lists.list_count},
          {"entry_count", r.lists.entry_count},
          {"payload_bytes", r.lists.payload_bytes},
          {"mean_entries", r.lists.mean_entries},
          {"max_entries", r.lists.max_entries}}},
    };
}

nlohmann::json to_json(const oracle_report& r) {
    return {
        {"repetitions", r.repetitions},
        {"queries_run", r.queries_run},
        {"matches_found", r.matches_found},
        {"total_seconds", r.total_seconds},
        {"mean_query_seconds", r.mean_query_seconds},
    };
}

nlohmann::json to_json(const std::vector<bench_report>& reports) {
    auto out = nlohmann::json::array();
    for (const auto& r : reports) {
        out.push_back(to_json(r));
    }
    return out;
}

std::string to_tsv(const std::vector<bench_report>& reports) {
    std::ostringstream out;
    out << "k\thash\tmax_load_factor\tcompression\trepetitions\tqueries_run\tmatches_found\t"
           "mean_query_seconds\tindex_bytes\traw_dictionary_bytes\ttable_bytes\tlist_bytes\t"
           "side_table_bytes\tsubstitution_bytes\tbucket_count\tkey_count\tmean_chain\t"
           "mean_occupied_chain\tmax_chain\tlist_count\tmean_entries\tmax_entries\n";
    for (const auto& r : reports) {
        out << r.k << '\t' << r.hash << '\t' << r.max_load_factor << '\t' << r.compression << '\t'
            << r.repetitions << '\t' << r.queries_run << '\t' << r.matches_found << '\t'
            << r.mean_query_seconds << '\t' << r.index_bytes << '\t' << r.raw_dictionary_bytes << '\t'
            << r.memory.table_bytes << '\t' << r.memory.list_bytes << '\t' << r.memory.side_table_bytes
            << '\t' << r.memory.substitution_bytes << '\t' << r.buckets.bucket_count << '\t'
            << r.buckets.key_count << '\t' << r.buckets.mean_chain << '\t' << r.buckets.mean_occupied_chain
            << '\t' << r.buckets.max_chain << '\t' << r.lists.list_count << '\t' << r.lists.mean_entries
            << '\t' << r.lists.max_entries << '\n';
    }
    return out.str();
}

} // namespace splitidx
