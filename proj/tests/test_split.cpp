#include "doctest.h"

#include "splitidx/error.hpp"
#include "splitidx/split.hpp"

#include "test_util.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

using namespace splitidx;

namespace {

std::vector<std::size_t> lengths_of(const piece_vector& pv) {
    std::vector<std::size_t> out;
    for (auto p : pv.pieces) {
        out.push_back(p.size());
    }
    return out;
}

// Floating-point statement of the rule: round |d|/(k+1) half up, and shrink
// the common length to floor((|d|-1)/k) if the last piece would be empty.
std::vector<std::size_t> expected_lengths(std::size_t length, unsigned k) {
    auto common = static_cast<std::size_t>(std::floor(static_cast<double>(length) / (k + 1) + 0.5));
    if (common * k >= length) {
        common = (length - 1) / k;
    }
    std::vector<std::size_t> out(k, common);
    out.push_back(length - common * k);
    return out;
}

} // namespace

TEST_CASE("split_word worked examples") {
    auto table = split_word("table", 1);
    REQUIRE(table);
    CHECK(table->pieces == std::vector<std::string_view>{"tab", "le"});

    CHECK(lengths_of(*split_word("abcde", 1)) == std::vector<std::size_t>{3, 2});
    CHECK(lengths_of(*split_word("abcdef", 3)) == std::vector<std::size_t>{1, 1, 1, 3});
    CHECK(split_word("ab", 1)->pieces == std::vector<std::string_view>{"a", "b"});
}

TEST_CASE("split_word rejects words of length <= k") {
    CHECK_FALSE(split_word("a", 1));
    CHECK_FALSE(split_word("ab", 2));
    CHECK_FALSE(split_word("", 1));
    CHECK(split_word("abc", 2));
}

TEST_CASE("piece lengths match the rounding rule for every small length") {
    for (unsigned k = 1; k <= 6; ++k) {
        for (std::size_t len = k + 1; len <= 80; ++len) {
            const std::string word(len, 'x');
            const auto pv = split_word(word, k);
            REQUIRE(pv);
            CHECK_MESSAGE(lengths_of(*pv) == expected_lengths(len, k), "len=" << len << " k=" << k);
        }
    }
}

TEST_CASE("splitting totality: pieces are non-empty and concatenate to the word") {
    std::mt19937_64 rng(7);
    for (int iter = 0; iter < 2000; ++iter) {
        const unsigned k = 1 + static_cast<unsigned>(rng() % 4);
        const auto word = testing::random_string(rng, k + 1, 60, testing::latin26);
        const auto pv = split_word(word, k);
        REQUIRE(pv);
        REQUIRE(pv->pieces.size() == k + 1);
        std::string joined;
        for (auto p : pv->pieces) {
            CHECK_FALSE(p.empty());
            joined.append(p);
        }
        CHECK(joined == word);
    }
}

TEST_CASE("hamming_at_most") {
    CHECK(hamming_at_most("table", "table", 0));
    CHECK(hamming_at_most("table", "cable", 1));
    CHECK_FALSE(hamming_at_most("table", "cable", 0));
    CHECK_FALSE(hamming_at_most("abbac", "baxcy", 2));
    CHECK_FALSE(hamming_at_most("abbac", "baxcy", 4));
    CHECK(hamming_at_most("abbac", "baxcy", 5));
    CHECK(hamming_at_most("", "", 0));
    CHECK_THROWS_AS((void)hamming_at_most("ab", "abc", 3), std::invalid_argument);
}

TEST_CASE("reconstruct") {
    CHECK(reconstruct("cd", "abe", 2, 2, 5) == "abcde");
    CHECK(reconstruct("a", "bc", 1, 2, 3) == "abc");
    CHECK(reconstruct("c", "ab", 3, 2, 3) == "abc");
    CHECK(reconstruct("tab", "le", 1, 1, 5) == "table");
    CHECK(reconstruct("le", "tab", 2, 1, 5) == "table");

    CHECK_THROWS_AS((void)reconstruct("abc", "", 1, 2, 3), format_error);
    CHECK_THROWS_AS((void)reconstruct("cd", "abe", 4, 2, 5), format_error);
    CHECK_THROWS_AS((void)reconstruct("cd", "abe", 0, 2, 5), format_error);
    CHECK_THROWS_AS((void)reconstruct("cd", "abe", 2, 2, 6), format_error);
    CHECK_THROWS_AS((void)reconstruct("c", "abef", 2, 2, 5), format_error);
}

TEST_CASE("reconstruct inverts split for every key position") {
    std::mt19937_64 rng(11);
    for (int iter = 0; iter < 1000; ++iter) {
        const unsigned k = 1 + static_cast<unsigned>(rng() % 4);
        const auto word = testing::random_string(rng, k + 1, 40, testing::dna4);
        const auto pv = split_word(word, k);
        for (std::size_t i = 0; i <= k; ++i) {
            std::string missing;
            for (std::size_t j = 0; j <= k; ++j) {
                if (j != i) {
                    missing.append(pv->pieces[j]);
                }
            }
            CHECK(reconstruct(pv->pieces[i], missing, i + 1, k, word.size()) == word);
        }
    }
}
