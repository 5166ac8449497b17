#include "splitidx/hash.hpp"

#include "splitidx/error.hpp"

#include <string>

#define XXH_INLINE_ALL
#include "xxhash.h"

namespace splitidx {

namespace {

constexpr std::uint64_t fnv_offset_basis = 14695981039346656037ULL;
constexpr std::uint64_t fnv_prime = 1099511628211ULL;

std::uint64_t fnv1(std::string_view key) noexcept {
    std::uint64_t h = fnv_offset_basis;
    for (unsigned char c : key) {
        h *= fnv_prime;
        h ^= c;
    }
    return h;
}

std::uint64_t fnv1a(std::string_view key) noexcept {
    std::uint64_t h = fnv_offset_basis;
    for (unsigned char c : key) {
        h ^= c;
        h *= fnv_prime;
    }
    return h;
}

std::uint64_t sdbm(std::string_view key) noexcept {
    std::uint64_t h = 0;
    for (unsigned char c : key) {
        h = c + (h << 6) + (h << 16) - h;
    }
    return h;
}

} // namespace

std::uint64_t hash_bytes(std::string_view key, hash_function fn) {
    switch (fn) {
    case hash_function::xxhash:
        return XXH3_64bits(key.data(), key.size());
    case hash_function::fnv1:
        return fnv1(key);
    case hash_function::fnv1a:
        return fnv1a(key);
    case hash_function::sdbm:
        return sdbm(key);
    }
    throw config_error("unknown hash function id " + std::to_string(static_cast<int>(fn)));
}

hash_function parse_hash_function(std::string_view name) {
    for (auto fn : all_hash_functions) {
        if (hash_function_name(fn) == name) {
            return fn;
        }
    }
    throw config_error("unknown hash function '" + std::string(name) +
                       "' (expected xxhash, fnv1, fnv1a or sdbm)");
}

std::string_view hash_function_name(hash_function fn) noexcept {
    switch (fn) {
    case hash_function::xxhash:
        return "xxhash";
    case hash_function::fnv1:
        return "fnv1";
    case hash_function::fnv1a:
        return "fnv1a";
    case hash_function::sdbm:
        return "sdbm";
    }
    return "unknown";
}

hash_function hash_function_from_id(std::uint8_t id) {
    if (id >= all_hash_functions.size()) {
        throw config_error("unknown hash function id " + std::to_string(id));
    }
    return static_cast<hash_function>(id);
}

} // namespace splitidx
