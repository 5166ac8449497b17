#pragma once

#include "splitidx/split_index.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace splitidx {

inline constexpr std::uint32_t index_format_version = 1;

// Binary index file, all integers little-endian:
//
//   "SPLITIDX"                      8-byte magic
//   u32 format version
//   u32 k
//   u8  hash function id            (see hash_function)
//   u64 max load factor             IEEE-754 double bits
//   u64 bucket count
//   u64 key count
//   u64 total bytes, u64 word count, u64 alphabet size   (source dictionary)
//   u64 side-table word count, then per word: u8 length, bytes
//   u8  has substitution list, u32 entry count, then per entry:
//       u8 code, u8 q-gram length, q-gram bytes
//   (bucket count + 1) x u32 bucket offsets
//   u64 bucket arena size, arena bytes
//   u64 list arena size, list bytes
//
// Bucket and list arenas are written verbatim from memory.
[[nodiscard]] std::vector<std::uint8_t> serialize_index(const split_index& index);

// Throws format_error: bad_magic, version_mismatch (naming both versions),
// truncated, or corrupt (structural validation failed, trailing bytes).
[[nodiscard]] split_index deserialize_index(std::span<const std::uint8_t> bytes);

void save_index(const split_index& index, const std::filesystem::path& path);
[[nodiscard]] split_index load_index(const std::filesystem::path& path);

} // namespace splitidx
