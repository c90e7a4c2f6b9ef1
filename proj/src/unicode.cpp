#include "infosum/unicode.h"

#include <algorithm>
#include <iterator>

namespace infosum::unicode {
namespace {

struct CodeRange {
  char32_t first;
  char32_t last;
};

struct FoldEntry {
  char32_t cp;
  char32_t folded[3];
};

#include "unicode_tables.inc"

}  // namespace

Decoded decode(std::string_view text, std::size_t pos) noexcept {
  const auto b0 = static_cast<unsigned char>(text[pos]);
  if (b0 < 0x80) return {b0, 1};

  std::size_t len = 0;
  char32_t cp = 0;
  char32_t min = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2, cp = b0 & 0x1F, min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3, cp = b0 & 0x0F, min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4, cp = b0 & 0x07, min = 0x10000;
  } else {
    return {0xFFFD, 1};
  }
  if (pos + len > text.size()) return {0xFFFD, 1};
  for (std::size_t i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(text[pos + i]);
    if ((b & 0xC0) != 0x80) return {0xFFFD, 1};
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return {0xFFFD, 1};
  return {cp, len};
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_punctuation(char32_t cp) noexcept {
  const auto it = std::upper_bound(std::begin(kPunctuationRanges), std::end(kPunctuationRanges), cp,
                                   [](char32_t c, const CodeRange& r) { return c < r.first; });
  if (it == std::begin(kPunctuationRanges)) return false;
  return cp <= std::prev(it)->last;
}

bool is_space(char32_t cp) noexcept {
  switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

bool is_apostrophe(char32_t cp) noexcept { return cp == U'\'' || cp == U'’'; }

std::string casefold(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto [cp, len] = decode(text, pos);
    if (cp < 0x80) {
      const auto c = static_cast<char>(cp);
      out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
    } else if (cp == 0xFFFD && len == 1) {
      out.append(text.substr(pos, len));  // keep invalid bytes untouched
    } else {
      const auto it = std::lower_bound(std::begin(kCaseFold), std::end(kCaseFold), cp,
                                       [](const FoldEntry& e, char32_t c) { return e.cp < c; });
      if (it != std::end(kCaseFold) && it->cp == cp) {
        for (char32_t f : it->folded)
          if (f != 0) append_utf8(out, f);
      } else {
        out.append(text.substr(pos, len));
      }
    }
    pos += len;
  }
  return out;
}

}  // namespace infosum::unicode
