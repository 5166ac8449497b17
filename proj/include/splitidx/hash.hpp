#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace splitidx {

// String hash functions available to the piece table. The numeric values are
// persisted in index files and must not be renumbered.
enum class hash_function : std::uint8_t {
    xxhash = 0, // XXH3 64-bit, default seed
    fnv1 = 1,
    fnv1a = 2,
    sdbm = 3,
};

inline constexpr std::array<hash_function, 4> all_hash_functions{
    hash_function::xxhash, hash_function::fnv1, hash_function::fnv1a, hash_function::sdbm};

[[nodiscard]] std::uint64_t hash_bytes(std::string_view key, hash_function fn);

// CLI names: "xxhash", "fnv1", "fnv1a", "sdbm". Throws config_error otherwise.
[[nodiscard]] hash_function parse_hash_function(std::string_view name);
[[nodiscard]] std::string_view hash_function_name(hash_function fn) noexcept;

// Validates a persisted id. Throws config_error for unknown values.
[[nodiscard]] hash_function hash_function_from_id(std::uint8_t id);

} // namespace splitidx
