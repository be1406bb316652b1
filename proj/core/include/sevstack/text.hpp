#pragma once

#include <string>
#include <string_view>

namespace sevstack::text {

/// Unicode NFC. Invalid UTF-8 sequences are replaced by U+FFFD.
std::string nfc(std::string_view utf8);

/// Replaces every maximal whitespace run by one ASCII space and trims both ends.
std::string collapse_whitespace(std::string_view utf8);

std::string trim(std::string_view s);

/// Full Unicode case folding.
std::string fold_case(std::string_view utf8);

}  // namespace sevstack::text
