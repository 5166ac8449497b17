#include "doctest.h"

#include "splitidx/error.hpp"
#include "splitidx/hash.hpp"
#include "splitidx/piece_table.hpp"

#include "test_util.hpp"

#include <map>
#include <set>

using namespace splitidx;

TEST_CASE("hash_bytes is deterministic and accepts the empty key") {
    for (auto fn : all_hash_functions) {
        CHECK(hash_bytes("tab", fn) == hash_bytes("tab", fn));
        CHECK_NOTHROW((void)hash_bytes("", fn));
    }
}

TEST_CASE("hash_bytes reference vectors") {
    // FNV offset basis 14695981039346656037, prime 1099511628211.
    CHECK(hash_bytes("", hash_function::fnv1a) == 0xcbf29ce484222325ULL);
    CHECK(hash_bytes("a", hash_function::fnv1a) == 0xaf63dc4c8601ec8cULL);
    CHECK(hash_bytes("foobar", hash_function::fnv1a) == 0x85944171f73967e8ULL);
    CHECK(hash_bytes("a", hash_function::fnv1) == 0xaf63bd4c8601b7beULL);
    CHECK(hash_bytes("foobar", hash_function::fnv1) == 0x340d8765a4dda9c2ULL);
    CHECK(hash_bytes("a", hash_function::sdbm) == 0x61ULL);
    CHECK(hash_bytes("tab", hash_function::sdbm) == 0x7439801eb5ULL);
    // XXH3-64 with the default secret, as produced by the python-xxhash binding.
    CHECK(hash_bytes("", hash_function::xxhash) == 0x2d06800538d394c2ULL);
    CHECK(hash_bytes("a", hash_function::xxhash) == 0xe6c632b61e964e1fULL);
}

TEST_CASE("hash function names") {
    for (auto fn : all_hash_functions) {
        CHECK(parse_hash_function(hash_function_name(fn)) == fn);
    }
    CHECK_THROWS_AS((void)parse_hash_function("murmur3"), config_error);
    CHECK_THROWS_AS((void)hash_function_from_id(4), config_error);
}

TEST_CASE("find_or_create installs once") {
    piece_table table;
    const auto [ref, created] = table.find_or_create("tab");
    CHECK(created);
    const auto [again, created_again] = table.find_or_create("tab");
    CHECK_FALSE(created_again);
    CHECK(again == ref);
    CHECK(table.key_count() == 1);
}

TEST_CASE("growth happens before the insertion that would exceed the load factor") {
    piece_table table({hash_function::xxhash, 2.0, 2});
    for (const char* key : {"a", "b", "c", "d"}) {
        (void)table.find_or_create(key);
    }
    CHECK(table.bucket_count() == 2);
    (void)table.find_or_create("e");
    CHECK(table.bucket_count() == 4);
    CHECK(table.stats().load_factor <= 2.0);
}

TEST_CASE("lookup before and after freezing") {
    piece_table table;
    const auto ref = table.find_or_create("le").first;
    CHECK(table.lookup("le") == ref);
    CHECK_FALSE(table.lookup("zzz"));
    table.freeze();
    CHECK(table.lookup("le") == ref);
    CHECK_FALSE(table.lookup("zzz"));
    CHECK_THROWS_AS((void)table.find_or_create("new"), build_error);
}

TEST_CASE("lookups survive growth for every hash function") {
    for (auto fn : all_hash_functions) {
        piece_table table({fn, 2.0, 1});
        std::map<std::string, list_ref> installed;
        for (int i = 0; i < 100; ++i) {
            const std::string key = "key" + std::to_string(i * 7919);
            installed[key] = table.find_or_create(key).first;
            CHECK(table.stats().load_factor <= 2.0);
        }
        CHECK(table.bucket_count() >= 64);
        for (const auto& [key, ref] : installed) {
            CHECK(table.lookup(key) == ref);
        }
        table.freeze();
        for (const auto& [key, ref] : installed) {
            CHECK(table.lookup(key) == ref);
        }
    }
}

TEST_CASE("keys longer than 255 bytes are rejected") {
    piece_table table;
    CHECK_NOTHROW((void)table.find_or_create(std::string(255, 'a')));
    CHECK_THROWS_AS((void)table.find_or_create(std::string(256, 'a')), build_error);
}

TEST_CASE("invalid configuration") {
    CHECK_THROWS_AS(piece_table({hash_function::xxhash, 0.0, 16}), config_error);
    CHECK_THROWS_AS(piece_table({static_cast<hash_function>(9), 2.0, 16}), config_error);
    piece_table rounded({hash_function::xxhash, 2.0, 5});
    CHECK(rounded.bucket_count() == 8);
}

TEST_CASE("bucket_stats") {
    SUBCASE("empty") {
        const auto s = piece_table().stats();
        CHECK(s.mean_chain == 0.0);
        CHECK(s.max_chain == 0);
        CHECK(s.key_count == 0);
    }
    SUBCASE("four keys in two buckets") {
        piece_table table({hash_function::fnv1a, 2.0, 2});
        for (const char* key : {"w", "x", "y", "z"}) {
            (void)table.find_or_create(key);
        }
        CHECK(table.stats().bucket_count == 2);
        CHECK(table.stats().mean_chain == 2.0);
    }
    SUBCASE("randomized keys, chains recounted independently") {
        std::mt19937_64 rng(3);
        piece_table table({hash_function::xxhash, 2.0, 16});
        std::set<std::string> keys;
        while (keys.size() < 10000) {
            keys.insert(testing::random_string(rng, 1, 12, testing::latin26));
        }
        for (const auto& key : keys) {
            (void)table.find_or_create(key);
        }
        table.freeze();
        const auto s = table.stats();
        std::vector<std::size_t> chains(table.bucket_count(), 0);
        for (const auto& key : keys) {
            ++chains[hash_bytes(key, hash_function::xxhash) & (table.bucket_count() - 1)];
        }
        CHECK(s.key_count == 10000);
        CHECK(s.mean_chain == doctest::Approx(10000.0 / static_cast<double>(table.bucket_count())).epsilon(1e-12));
        CHECK(s.max_chain == *std::max_element(chains.begin(), chains.end()));
        CHECK(s.occupied_buckets ==
              static_cast<std::size_t>(std::count_if(chains.begin(), chains.end(), [](auto c) { return c > 0; })));
    }
}

TEST_CASE("remap rewrites references, for_each sees every key") {
    piece_table table;
    for (int i = 0; i < 50; ++i) {
        (void)table.find_or_create("k" + std::to_string(i));
    }
    CHECK_THROWS_AS(table.remap(std::vector<list_ref>(50)), build_error);
    table.freeze();
    std::vector<list_ref> remapped(50);
    for (list_ref i = 0; i < 50; ++i) {
        remapped[i] = 1000 + i;
    }
    table.remap(remapped);
    std::size_t seen = 0;
    table.for_each([&](std::string_view key, list_ref ref) {
        CHECK(table.lookup(key) == ref);
        CHECK(ref >= 1000);
        ++seen;
    });
    CHECK(seen == 50);
}

TEST_CASE("from_frozen validates structure") {
    piece_table table({hash_function::sdbm, 2.0, 4});
    for (const char* key : {"alpha", "beta", "gamma"}) {
        (void)table.find_or_create(key);
    }
    table.freeze();
    const std::vector<std::uint32_t> offsets(table.bucket_offsets().begin(), table.bucket_offsets().end());
    const std::vector<std::uint8_t> arena(table.bucket_bytes().begin(), table.bucket_bytes().end());

    const auto copy = piece_table::from_frozen(table.config(), 3, offsets, arena);
    CHECK(copy.lookup("beta") == table.lookup("beta"));

    CHECK_THROWS_AS((void)piece_table::from_frozen(table.config(), 4, offsets, arena), format_error);
    auto bad_arena = arena;
    bad_arena.pop_back();
    CHECK_THROWS_AS((void)piece_table::from_frozen(table.config(), 3, offsets, bad_arena), format_error);
    hash_config other = table.config();
    other.function = hash_function::fnv1;
    // Keys land in different buckets under another function.
    CHECK_THROWS_AS((void)piece_table::from_frozen(other, 3, offsets, arena), format_error);
}
