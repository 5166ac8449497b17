#pragma once

#include "splitidx/dictionary.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace splitidx {

// Brute-force reference: every dictionary word of |pattern| bytes with at most
// k mismatching positions, in dictionary (lexicographic) order. Shares no code
// with the split index.
[[nodiscard]] std::vector<std::string> oracle_query(const dictionary& dict, std::string_view pattern,
                                                    std::size_t k);

} // namespace splitidx
