#include "summeval/text.hpp"

namespace summeval {

DecodedChar decode_utf8(std::string_view text, std::size_t pos) {
  const auto byte = [&](std::size_t i) { return static_cast<unsigned char>(text[i]); };
  const unsigned char b0 = byte(pos);
  if (b0 < 0x80) return {b0, 1};

  std::size_t len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return {b0, 1};  // stray continuation or invalid lead byte
  }
  if (pos + len > text.size()) return {b0, 1};
  for (std::size_t i = 1; i < len; ++i) {
    const unsigned char bi = byte(pos + i);
    if ((bi & 0xC0) != 0x80) return {b0, 1};
    cp = (cp << 6) | (bi & 0x3F);
  }
  return {cp, len};
}

bool is_space_cp(char32_t cp) {
  switch (cp) {
    case U' ':
    case U'\t':
    case U'\n':
    case U'\r':
    case U'\v':
    case U'\f':
    case 0x00A0:  // no-break space
    case 0x2028:
    case 0x2029:
    case 0x3000:
      return true;
    default:
      return (cp >= 0x2000 && cp <= 0x200B);
  }
}

bool is_alnum_cp(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= U'0' && cp <= U'9') || (cp >= U'A' && cp <= U'Z') || (cp >= U'a' && cp <= U'z');
  }
  // Latin-1 letters minus multiplication/division signs.
  if (cp >= 0x00C0 && cp <= 0x00FF) return cp != 0x00D7 && cp != 0x00F7;
  if (cp >= 0x0100 && cp <= 0x024F) return true;  // Latin Extended-A/B
  if (cp >= 0x0370 && cp <= 0x03FF) return true;  // Greek
  if (cp >= 0x0400 && cp <= 0x04FF) return true;  // Cyrillic
  return false;
}

bool is_ascii_letter(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z');
}

bool is_ascii_alnum(char c) {
  return is_ascii_letter(c) || (c >= '0' && c <= '9');
}

std::string to_lower_ascii(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string truncate_codepoints(std::string_view text, std::size_t max_chars) {
  std::size_t pos = 0;
  std::size_t count = 0;
  while (pos < text.size() && count < max_chars) {
    pos += decode_utf8(text, pos).length;
    ++count;
  }
  return std::string(text.substr(0, pos));
}

std::size_t count_codepoints(std::string_view text) {
  std::size_t pos = 0;
  std::size_t count = 0;
  while (pos < text.size()) {
    pos += decode_utf8(text, pos).length;
    ++count;
  }
  return count;
}

}  // namespace summeval
