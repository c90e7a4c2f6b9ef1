#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace infosum::unicode {

// Decodes one code point starting at text[pos]. Invalid sequences decode
// as U+FFFD with length 1 so scanning always advances.
struct Decoded {
  char32_t cp;
  std::size_t length;
};
Decoded decode(std::string_view text, std::size_t pos) noexcept;

void append_utf8(std::string& out, char32_t cp);

// General category P* (Pc, Pd, Ps, Pe, Pi, Pf, Po).
bool is_punctuation(char32_t cp) noexcept;

// White_Space property.
bool is_space(char32_t cp) noexcept;

// Apostrophe-like characters that stay inside a word when interior.
bool is_apostrophe(char32_t cp) noexcept;

// Full Unicode case folding (e.g. "Straße" -> "strasse").
std::string casefold(std::string_view text);

}  // namespace infosum::unicode
