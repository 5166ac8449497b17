#include "splitidx/dictionary.hpp"

#include <algorithm>
#include <array>

namespace splitidx {

dictionary::dictionary(std::vector<std::string> words) : words_(std::move(words)) {
    std::erase_if(words_, [](const std::string& w) { return w.empty(); });
    std::sort(words_.begin(), words_.end());
    words_.erase(std::unique(words_.begin(), words_.end()), words_.end());

    std::array<bool, 256> seen{};
    for (const auto& w : words_) {
        total_bytes_ += w.size();
        for (unsigned char c : w) {
            seen[c] = true;
        }
    }
    for (std::size_t c = 0; c < seen.size(); ++c) {
        if (seen[c]) {
            alphabet_.push_back(static_cast<char>(c));
        }
    }
}

bool dictionary::is_ascii() const noexcept {
    return alphabet_.empty() || static_cast<unsigned char>(alphabet_.back()) < 128;
}

} // namespace splitidx
