#include "doctest.h"

#include "splitidx/error.hpp"
#include "splitidx/oracle.hpp"
#include "splitidx/serialize.hpp"
#include "splitidx/split.hpp"
#include "splitidx/split_index.hpp"

#include "test_util.hpp"

#include <thread>

using namespace splitidx;

namespace {

std::size_t long_word_bytes(const dictionary& dict, unsigned k) {
    std::size_t sum = 0;
    for (const auto& w : dict.words()) {
        if (w.size() > k) {
            sum += w.size();
        }
    }
    return sum;
}

} // namespace

TEST_CASE("list layout for table, left, tablet") {
    const auto index = build_index(dictionary({"table", "left", "tablet"}), 1);

    const auto tab = index.list_for("tab");
    REQUIRE(tab);
    CHECK(tab->marker == 0);
    CHECK(tab->entries == std::vector<list_entry>{{"le", 1}, {"let", 1}});

    const auto le = index.list_for("le");
    REQUIRE(le);
    CHECK(le->marker == 2);
    CHECK(le->entries == std::vector<list_entry>{{"ft", 1}, {"tab", 2}});

    const auto ft = index.list_for("ft");
    REQUIRE(ft);
    CHECK(ft->marker == 1);
    CHECK(ft->entries == std::vector<list_entry>{{"le", 2}});

    CHECK(index.list_for("let")->entries == std::vector<list_entry>{{"tab", 2}});
    CHECK_FALSE(index.list_for("zz"));
    CHECK(index.table().key_count() == 4);
}

TEST_CASE("mixed regions share one list") {
    // "ab" is the prefix of "abcd" and the suffix of "xyab".
    const auto index = build_index(dictionary({"abcd", "xyab", "abzz"}), 1);
    const auto ab = index.list_for("ab");
    REQUIRE(ab);
    CHECK(ab->marker == 3);
    CHECK(ab->entries == std::vector<list_entry>{{"cd", 1}, {"zz", 1}, {"xy", 2}});
    CHECK(index.query("abcx") == std::vector<std::string>{"abcd"});
    CHECK(index.query("xxab") == std::vector<std::string>{"xyab"});
    CHECK(index.query("abzd") == std::vector<std::string>{"abcd", "abzz"});
}

TEST_CASE("k > 1 entries carry the key position") {
    // "abcdef" with k = 2 splits into ab | cd | ef.
    const auto index = build_index(dictionary({"abcdef"}), 2);
    CHECK(index.list_for("ab")->entries == std::vector<list_entry>{{"cdef", 1}});
    CHECK(index.list_for("cd")->entries == std::vector<list_entry>{{"abef", 2}});
    CHECK(index.list_for("ef")->entries == std::vector<list_entry>{{"abcd", 3}});
}

TEST_CASE("degenerate dictionaries") {
    const auto empty = build_index(dictionary{}, 1);
    CHECK(empty.table().key_count() == 0);
    CHECK(empty.query("abc").empty());
    CHECK(empty.lists().entry_count == 0);

    const auto shorts = build_index(dictionary({"aa", "ab", "ba", "c"}), 2);
    CHECK(shorts.table().key_count() == 0);
    CHECK(shorts.side_table()[2] == std::vector<std::string>{"aa", "ab", "ba"});
    CHECK(shorts.side_table()[1] == std::vector<std::string>{"c"});
    CHECK(shorts.query("zz") == std::vector<std::string>{"aa", "ab", "ba"});
    CHECK(shorts.query("q") == std::vector<std::string>{"c"});
    CHECK(shorts.query("abc").empty());

    CHECK_THROWS_AS((void)shorts.query(""), std::invalid_argument);
}

TEST_CASE("query examples") {
    const auto index = build_index(dictionary({"table", "left", "tablet"}), 1);
    CHECK(index.query("tavle") == std::vector<std::string>{"table"});
    CHECK(index.query("table") == std::vector<std::string>{"table"});
    CHECK(index.query("lift") == std::vector<std::string>{"left"});
    CHECK(index.query("tablex") == std::vector<std::string>{"tablet"});
    CHECK(index.query("xable") == std::vector<std::string>{"table"});
    CHECK(index.query("tbble") == std::vector<std::string>{"table"});
    CHECK(index.query("tbvle").empty());
    CHECK(index.query("tabl").empty());
    CHECK(index.query("t").empty());

    const auto k3 = build_index(dictionary({"table", "left", "tablet"}), 3);
    CHECK(k3.query("xxxle") == std::vector<std::string>{"table"});
    CHECK(k3.query("lxxx") == std::vector<std::string>{"left"});
    CHECK(k3.query("xxxxx").empty());
}

TEST_CASE("query agrees with the linear scan") {
    std::mt19937_64 rng(77);
    for (int iter = 0; iter < 60; ++iter) {
        const auto alphabet = iter % 2 ? testing::dna4 : testing::latin26;
        const unsigned k = 1 + iter % 4;
        const auto dict = testing::random_dictionary(rng, 1 + rng() % 800, 1, 1 + rng() % 24, alphabet);
        const auto index = build_index(dict, k);
        for (const auto& p : testing::random_patterns(rng, dict, 60, 24, alphabet)) {
            const auto got = index.query(p);
            const auto want = oracle_query(dict, p, k);
            if (got != want) {
                FAIL_CHECK("k=" << k << " pattern=" << p);
            }
            CHECK(index.query_full_scan(p) == want);
        }
    }
}

TEST_CASE("entry count and payload size are linear in the dictionary") {
    std::mt19937_64 rng(5);
    for (unsigned k = 1; k <= 4; ++k) {
        const auto dict = testing::random_dictionary(rng, 2000, 1, 20, testing::latin26);
        const auto index = build_index(dict, k);
        std::size_t long_words = 0;
        for (const auto& w : dict.words()) {
            long_words += w.size() > k;
        }
        const auto stats = index.lists();
        CHECK(stats.entry_count == (k + 1) * long_words);
        CHECK(stats.payload_bytes == k * long_word_bytes(dict, k));
    }
}

TEST_CASE("every piece of every word is a key") {
    std::mt19937_64 rng(6);
    const auto dict = testing::random_dictionary(rng, 300, 3, 15, testing::latin26);
    for (unsigned k = 1; k <= 3; ++k) {
        const auto index = build_index(dict, k);
        for (const auto& w : dict.words()) {
            const auto pieces = split_word(w, k);
            if (!pieces) {
                continue;
            }
            for (std::size_t i = 0; i < pieces->pieces.size(); ++i) {
                const auto list = index.list_for(pieces->pieces[i]);
                REQUIRE(list);
                std::string missing;
                for (std::size_t j = 0; j < pieces->pieces.size(); ++j) {
                    if (j != i) {
                        missing += pieces->pieces[j];
                    }
                }
                const list_entry expected{missing, i + 1};
                CHECK(std::find(list->entries.begin(), list->entries.end(), expected) != list->entries.end());
            }
        }
    }
}

TEST_CASE("builds are deterministic and hash independent") {
    std::mt19937_64 rng(8);
    const auto dict = testing::random_dictionary(rng, 1500, 1, 18, testing::latin26);
    const auto patterns = testing::random_patterns(rng, dict, 300, 18, testing::latin26);
    CHECK(serialize_index(build_index(dict, 2)) == serialize_index(build_index(dict, 2)));

    const auto reference = build_index(dict, 2);
    for (const auto fn : all_hash_functions) {
        build_config cfg;
        cfg.hash.function = fn;
        cfg.hash.max_load_factor = 0.75;
        const auto index = build_index(dict, 2, cfg);
        CHECK(index.lists().entry_count == reference.lists().entry_count);
        for (const auto& p : patterns) {
            CHECK(index.query(p) == reference.query(p));
        }
    }
}

TEST_CASE("compression is transparent to queries") {
    std::mt19937_64 rng(10);
    const auto dict = testing::random_dictionary(rng, 2000, 8, 24, testing::dna4);
    const auto patterns = testing::random_patterns(rng, dict, 300, 24, testing::dna4);
    for (unsigned k = 1; k <= 3; ++k) {
        const auto plain = build_index(dict, k);
        for (const auto policy : {compression_policy::q2, compression_policy::q3, compression_policy::q4,
                                  compression_policy::mixed}) {
            build_config cfg;
            cfg.compression = policy;
            const auto packed = build_index(dict, k, cfg);
            REQUIRE(packed.substitutions() != nullptr);
            CHECK(packed.lists().payload_bytes < plain.lists().payload_bytes);
            for (const auto& p : patterns) {
                CHECK(packed.query(p) == plain.query(p));
            }
        }
    }

    build_config given;
    given.compression = compression_policy::mixed;
    given.substitutions = substitution_list({{"AC", 200, 0}});
    const auto custom = build_index(dict, 1, given);
    CHECK(custom.substitutions()->size() == 1);
    CHECK(custom.query(dict.words().front()) == std::vector<std::string>{dict.words().front()});

    CHECK_THROWS_AS((void)build_index(dictionary({"caf\xC3\xA9"}), 1, given), codec_error);
}

TEST_CASE("concurrent queries") {
    std::mt19937_64 rng(12);
    const auto dict = testing::random_dictionary(rng, 3000, 1, 16, testing::latin26);
    const auto patterns = testing::random_patterns(rng, dict, 400, 16, testing::latin26);
    build_config cfg;
    cfg.compression = compression_policy::mixed;
    const auto index = build_index(dict, 2, cfg);
    std::vector<std::vector<std::string>> expected;
    for (const auto& p : patterns) {
        expected.push_back(index.query(p));
    }
    std::vector<int> ok(4, 1);
    std::vector<std::thread> threads;
    for (int t = 0; t < 4; ++t) {
        threads.emplace_back([&, t] {
            std::vector<std::string> out;
            for (int rep = 0; rep < 5; ++rep) {
                for (std::size_t i = 0; i < patterns.size(); ++i) {
                    index.query_into(patterns[i], out);
                    if (out != expected[i]) {
                        ok[t] = 0;
                    }
                }
            }
        });
    }
    for (auto& th : threads) {
        th.join();
    }
    CHECK(ok == std::vector<int>(4, 1));
}

TEST_CASE("build errors") {
    CHECK_THROWS_AS((void)build_index(dictionary({"abc"}), 0), config_error);

    // 256 * 256 words share the prefix "ab".
    std::vector<std::string> words;
    for (int a = 0; a < 256; ++a) {
        for (int b = 0; b < 256; ++b) {
            words.push_back(std::string("ab") + static_cast<char>(a) + static_cast<char>(b));
        }
    }
    const dictionary crowded(std::move(words));
    REQUIRE(crowded.word_count() == 65536);
    CHECK_THROWS_AS((void)build_index(crowded, 1), build_error);
    CHECK_NOTHROW((void)build_index(crowded, 2));

    const std::string huge(600, 'x');
    try {
        (void)build_index(dictionary({huge}), 1);
        FAIL("expected build_error");
    } catch (const build_error& e) {
        CHECK(std::string(e.what()).find("xxxx") != std::string::npos);
    }
}

TEST_CASE("memory breakdown") {
    const auto index = build_index(dictionary({"table", "left", "tablet", "a"}), 1);
    const auto mem = index.memory();
    CHECK(mem.table_bytes == index.table().byte_size());
    CHECK(mem.list_bytes == index.list_bytes().size());
    CHECK(mem.side_table_bytes == 2);
    CHECK(mem.substitution_bytes == 0);
    CHECK(mem.total() == mem.table_bytes + mem.list_bytes + 2);
    CHECK(index.source_stats().word_count == 4);
}
