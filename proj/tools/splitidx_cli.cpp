// Command-line front end: build, query, bench, sweep, mine-qgrams.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 data error.

#include "splitidx/bench.hpp"
#include "splitidx/datasets.hpp"
#include "splitidx/error.hpp"
#include "splitidx/qgram.hpp"
#include "splitidx/serialize.hpp"
#include "splitidx/split_index.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace splitidx;

constexpr int exit_usage = 1;
constexpr int exit_data = 2;

struct dict_options {
    std::string dict_path;
    std::string fasta_path;
    std::size_t kmer_length = 20;
};

struct index_options {
    unsigned k = 1;
    std::string hash = "xxhash";
    double max_lf = 2.0;
    std::string compress = "none";
    std::string subs_path;
    std::size_t qgram_limit = 100;
};

struct query_options {
    std::string queries_path;
    std::size_t gen_queries = 0;
    std::uint64_t seed = 1;
    std::size_t max_errors = 3;
    double error_probability = 0.5;
};

void add_dict_options(CLI::App& app, dict_options& o) {
    auto* dict = app.add_option("--dict", o.dict_path, "newline-separated word list");
    auto* fasta = app.add_option("--fasta", o.fasta_path, "FASTA file; indexes its distinct k-mers");
    dict->excludes(fasta);
    app.add_option("--kmer-length", o.kmer_length, "k-mer length for --fasta")->capture_default_str();
}

void add_index_options(CLI::App& app, index_options& o) {
    app.add_option("--k", o.k, "maximum number of mismatches")->capture_default_str()->check(CLI::Range(1, 255));
    app.add_option("--hash", o.hash, "xxhash, fnv1, fnv1a or sdbm")->capture_default_str();
    app.add_option("--max-lf", o.max_lf, "maximum hash table load factor")->capture_default_str();
    app.add_option("--compress", o.compress, "none, 2gram, 3gram, 4gram or mixed")->capture_default_str();
    app.add_option("--subs", o.subs_path, "substitution list file to use instead of mining");
    app.add_option("--qgram-limit", o.qgram_limit, "number of q-grams to mine")->capture_default_str();
}

void add_query_options(CLI::App& app, query_options& o) {
    auto* file = app.add_option("--queries", o.queries_path,
                                "query file: 'wrong->right' lines or one pattern per line");
    auto* gen = app.add_option("--gen-queries", o.gen_queries, "generate N noisy queries from the dictionary");
    file->excludes(gen);
    app.add_option("--seed", o.seed, "seed for --gen-queries")->capture_default_str();
    app.add_option("--max-errors", o.max_errors, "substitution attempts per generated query")->capture_default_str();
    app.add_option("--error-prob", o.error_probability, "probability of each substitution")->capture_default_str();
}

dictionary load_dictionary(const dict_options& o) {
    if (!o.fasta_path.empty()) {
        auto kmers = extract_kmers(o.fasta_path, o.kmer_length);
        if (kmers.kmers.empty()) {
            std::cerr << "warning: no k-mers extracted from " << o.fasta_path << '\n';
        }
        return std::move(kmers.kmers);
    }
    if (o.dict_path.empty()) {
        throw config_error("one of --dict or --fasta is required");
    }
    return load_wordlist(o.dict_path);
}

build_config make_build_config(const index_options& o) {
    build_config config;
    config.hash.function = parse_hash_function(o.hash);
    config.hash.max_load_factor = o.max_lf;
    if (!(o.max_lf > 0.0)) {
        throw config_error("--max-lf must be positive");
    }
    config.compression = parse_compression_policy(o.compress);
    config.qgram_limit = o.qgram_limit;
    if (!o.subs_path.empty()) {
        if (config.compression == compression_policy::none) {
            throw config_error("--subs requires --compress other than none");
        }
        config.substitutions = load_substitutions(o.subs_path);
    }
    return config;
}

query_set load_queries_file(const std::string& path) {
    if (read_file(path).find("->") != std::string::npos) {
        auto qs = load_misspellings(path);
        if (qs.skipped_lines > 0) {
            std::cerr << "warning: skipped " << qs.skipped_lines << " malformed line(s) in " << path << '\n';
        }
        return qs;
    }
    return load_query_lines(path);
}

query_set make_queries(const query_options& o, const dictionary& dict, const std::string& fasta_path) {
    if (!o.queries_path.empty()) {
        return load_queries_file(o.queries_path);
    }
    if (o.gen_queries > 0) {
        // DNA noise draws from ACGTN regardless of which bases occur.
        const std::string_view alphabet = fasta_path.empty() ? std::string_view{} : std::string_view("ACGTN");
        return gen_noisy_queries(dict, o.gen_queries, o.seed, o.max_errors, o.error_probability, alphabet);
    }
    throw config_error("one of --queries or --gen-queries is required");
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << text)) {
        throw io_error("cannot write " + path);
    }
}

std::string render(const std::vector<bench_report>& reports, const std::string& format, bool single) {
    if (format == "tsv") {
        return to_tsv(reports);
    }
    const auto json = single ? to_json(reports.front()) : to_json(reports);
    return json.dump(2) + "\n";
}

std::vector<std::string> split_grid(const std::string& grid) {
    std::vector<std::string> values;
    std::string current;
    for (char c : grid) {
        if (c == ',') {
            values.push_back(current);
            current.clear();
        } else if (c != ' ') {
            current.push_back(c);
        }
    }
    values.push_back(current);
    return values;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Split index for dictionary matching with few mismatches"};
    app.require_subcommand(1);

    dict_options dict_opts;
    index_options index_opts;
    query_options query_opts;
    std::string out_path;
    std::string format = "json";
    std::size_t reps = 1;

    auto* build = app.add_subcommand("build", "build an index and save it");
    add_dict_options(*build, dict_opts);
    add_index_options(*build, index_opts);
    build->add_option("--out", out_path, "index file to write")->required();

    std::string index_path;
    std::vector<std::string> patterns;
    auto* query = app.add_subcommand("query", "print 'pattern<TAB>match' for every match");
    query->add_option("--index", index_path, "saved index file");
    add_dict_options(*query, dict_opts);
    add_index_options(*query, index_opts);
    query->add_option("--queries", query_opts.queries_path, "query file");
    query->add_option("patterns", patterns, "query patterns");

    bool baseline = false;
    auto* bench = app.add_subcommand("bench", "time queries against one index configuration");
    add_dict_options(*bench, dict_opts);
    add_index_options(*bench, index_opts);
    add_query_options(*bench, query_opts);
    bench->add_option("--reps", reps, "repetitions of the full query set")->capture_default_str();
    bench->add_option("--format", format, "json or tsv")->capture_default_str()->check(CLI::IsMember({"json", "tsv"}));
    bench->add_option("--out", out_path, "report file (default: stdout)");
    bench->add_flag("--baseline", baseline, "also time the brute-force scan (JSON only)");

    std::string dimension;
    std::string grid;
    auto* sweep_cmd = app.add_subcommand("sweep", "bench one report per grid value");
    add_dict_options(*sweep_cmd, dict_opts);
    add_index_options(*sweep_cmd, index_opts);
    add_query_options(*sweep_cmd, query_opts);
    sweep_cmd->add_option("--dimension", dimension, "hash, load_factor, k or compression")->required();
    sweep_cmd->add_option("--grid", grid, "comma-separated values, e.g. 1,2,3")->required();
    sweep_cmd->add_option("--reps", reps, "repetitions of the full query set")->capture_default_str();
    sweep_cmd->add_option("--format", format, "json or tsv")->capture_default_str()->check(CLI::IsMember({"json", "tsv"}));
    sweep_cmd->add_option("--out", out_path, "report file (default: stdout)");

    std::string policy = "mixed";
    std::size_t limit = 100;
    auto* mine = app.add_subcommand("mine-qgrams", "select a q-gram substitution list");
    add_dict_options(*mine, dict_opts);
    mine->add_option("--compress", policy, "2gram, 3gram, 4gram or mixed")->capture_default_str();
    mine->add_option("--limit", limit, "maximum number of q-grams")->capture_default_str();
    mine->add_option("--out", out_path, "substitution list file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    }

    try {
        if (build->parsed()) {
            const auto dict = load_dictionary(dict_opts);
            const auto index = build_index(dict, index_opts.k, make_build_config(index_opts));
            save_index(index, out_path);
            const auto mem = index.memory();
            std::cerr << "indexed " << dict.word_count() << " words (" << dict.total_bytes() << " bytes) into "
                      << mem.total() << " bytes\n";
        } else if (query->parsed()) {
            std::optional<split_index> index;
            if (!index_path.empty()) {
                index.emplace(load_index(index_path));
            } else {
                index.emplace(build_index(load_dictionary(dict_opts), index_opts.k, make_build_config(index_opts)));
            }
            if (!query_opts.queries_path.empty()) {
                const auto qs = load_queries_file(query_opts.queries_path);
                patterns.insert(patterns.end(), qs.patterns.begin(), qs.patterns.end());
            }
            if (patterns.empty()) {
                throw config_error("no query patterns given");
            }
            std::vector<std::string> matches;
            for (const auto& pattern : patterns) {
                if (pattern.empty()) {
                    continue;
                }
                index->query_into(pattern, matches);
                for (const auto& m : matches) {
                    std::cout << pattern << '\t' << m << '\n';
                }
            }
        } else if (bench->parsed()) {
            const auto dict = load_dictionary(dict_opts);
            const auto queries = make_queries(query_opts, dict, dict_opts.fasta_path);
            const auto index = build_index(dict, index_opts.k, make_build_config(index_opts));
            const auto report = run_bench(index, queries, reps, index_opts.compress);
            if (baseline && format == "json") {
                auto json = to_json(report);
                json["baseline"] = to_json(run_oracle_bench(dict, queries, index_opts.k, reps));
                write_output(out_path, json.dump(2) + "\n");
            } else {
                write_output(out_path, render({report}, format, true));
            }
        } else if (sweep_cmd->parsed()) {
            const auto dim = parse_sweep_dimension(dimension);
            const auto dict = load_dictionary(dict_opts);
            const auto queries = make_queries(query_opts, dict, dict_opts.fasta_path);
            sweep_base base;
            base.k = index_opts.k;
            base.build = make_build_config(index_opts);
            base.repetitions = reps;
            write_output(out_path, render(sweep(dict, queries, dim, split_grid(grid), base), format, false));
        } else if (mine->parsed()) {
            const auto dict = load_dictionary(dict_opts);
            const auto subs = mine_substitutions(dict, parse_qgram_policy(policy), limit);
            write_output(out_path, format_substitutions(subs));
            std::cerr << subs.size() << " q-grams, compression ratio " << compression_ratio(dict, subs) << '\n';
        }
    } catch (const config_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_data;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return 0;
}
