#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace betaexp {

// Digit string over {0,1}, most significant digit first.
using digit_word = std::vector<std::uint8_t>;

inline std::string word_to_string(const digit_word& w) {
    std::string s;
    s.reserve(w.size());
    for (auto d : w) s.push_back(d ? '1' : '0');
    return s;
}

inline digit_word word_from_string(const std::string& s) {
    digit_word w;
    w.reserve(s.size());
    for (char c : s) w.push_back(c == '1' ? 1 : 0);
    return w;
}

} // namespace betaexp
