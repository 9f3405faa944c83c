#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace chartkit::text {

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

// Trim, collapse interior whitespace runs to one space, ASCII-lowercase.
// This is the normalization applied before any entity comparison; stored
// data is never rewritten.
inline std::string normalize_for_match(std::string_view s) {
  s = trim(s);
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (is_space(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    out.push_back(c);
  }
  return out;
}

// Decode UTF-8 into Unicode scalar values. Each byte of an invalid
// sequence becomes U+FFFD so the decoder is total.
inline std::vector<char32_t> utf8_decode(std::string_view s) {
  std::vector<char32_t> out;
  out.reserve(s.size());
  std::size_t i = 0;
  const auto bad = [&] { out.push_back(0xFFFD); ++i; };
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) {
      out.push_back(b0);
      ++i;
      continue;
    }
    int len = 0;
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
      bad();
      continue;
    }
    if (i + len > s.size()) {
      bad();
      continue;
    }
    bool ok = true;
    char32_t decoded = cp;
    for (int k = 1; k < len; ++k) {
      const auto b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      decoded = (decoded << 6) | (b & 0x3F);
    }
    if (!ok) {
      bad();
      continue;
    }
    // Reject overlong forms and surrogates.
    if ((len == 2 && decoded < 0x80) || (len == 3 && decoded < 0x800) ||
        (len == 4 && decoded < 0x10000) || (decoded >= 0xD800 && decoded <= 0xDFFF) ||
        decoded > 0x10FFFF) {
      bad();
      continue;
    }
    out.push_back(decoded);
    i += len;
  }
  return out;
}

}  // namespace chartkit::text
