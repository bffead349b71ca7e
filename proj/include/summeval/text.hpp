#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace summeval {

// Minimal UTF-8 handling for OCR-noise measurement. Decoding is tolerant:
// an invalid byte is yielded as a single codepoint so garbage input still
// gets a defined fraction instead of an exception.

struct DecodedChar {
  char32_t codepoint;
  std::size_t length;  // bytes consumed
};

DecodedChar decode_utf8(std::string_view text, std::size_t pos);

bool is_space_cp(char32_t cp);

// Letters (ASCII plus the common Latin/Greek/Cyrillic ranges) or ASCII digits.
bool is_alnum_cp(char32_t cp);

bool is_ascii_letter(char c);
bool is_ascii_alnum(char c);

std::string to_lower_ascii(std::string_view text);

// First max_chars codepoints (not bytes), never splitting a UTF-8 sequence.
std::string truncate_codepoints(std::string_view text, std::size_t max_chars);

std::size_t count_codepoints(std::string_view text);

}  // namespace summeval
