#pragma once

#include <string>
#include <string_view>

namespace summeval {

// Porter's 1980 suffix-stripping algorithm. Input is lowercased first;
// words shorter than three letters or containing non-letters are returned
// unchanged (lowercased).
std::string porter_stem(std::string_view word);

}  // namespace summeval
