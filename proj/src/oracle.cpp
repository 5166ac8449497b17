#include "splitidx/oracle.hpp"

namespace splitidx {

std::vector<std::string> oracle_query(const dictionary& dict, std::string_view pattern, std::size_t k) {
    std::vector<std::string> out;
    for (const auto& word : dict.words()) {
        if (word.size() != pattern.size()) {
            continue;
        }
        std::size_t diff = 0;
        for (std::size_t i = 0; i < word.size() && diff <= k; ++i) {
            diff += word[i] != pattern[i];
        }
        if (diff <= k) {
            out.push_back(word);
        }
    }
    return out;
}

} // namespace splitidx
