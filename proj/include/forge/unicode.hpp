// Copyright 2026 The Forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FORGE_UNICODE_HPP_
#define FORGE_UNICODE_HPP_

#include <cstdint>
#include <string>
#include <string_view>

#include "forge/unicode_tables.hpp"

namespace forge {

inline constexpr char32_t kReplacementChar = 0xFFFD;

/// Appends one code point to a UTF-8 string.
inline void append_utf8(std::string& out, char32_t cp) {
  if (cp <= 0x7F) {
    out.push_back(static_cast<char>(cp));
  } else if (cp <= 0x7FF) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp <= 0xFFFF) {
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

inline std::string encode_utf8(const std::u32string& cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t cp : cps) append_utf8(out, cp);
  return out;
}

/// Decodes UTF-8 into code points.  Invalid bytes, overlong forms, surrogate
/// halves and out-of-range values each decode to U+FFFD, so that decode
/// followed by encode is stable on arbitrary byte input.
inline std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  size_t i = 0;
  const auto cont = [&](size_t k) {
    return i + k < s.size() && (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80;
  };
  while (i < s.size()) {
    unsigned char b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) {
      out.push_back(b0);
      i += 1;
    } else if ((b0 & 0xE0) == 0xC0 && cont(1)) {
      char32_t cp = ((b0 & 0x1F) << 6) | (s[i + 1] & 0x3F);
      out.push_back(cp < 0x80 ? kReplacementChar : cp);
      i += 2;
    } else if ((b0 & 0xF0) == 0xE0 && cont(1) && cont(2)) {
      char32_t cp = ((b0 & 0x0F) << 12) | ((s[i + 1] & 0x3F) << 6) | (s[i + 2] & 0x3F);
      if (cp < 0x800 || (cp >= 0xD800 && cp <= 0xDFFF)) cp = kReplacementChar;
      out.push_back(cp);
      i += 3;
    } else if ((b0 & 0xF8) == 0xF0 && cont(1) && cont(2) && cont(3)) {
      char32_t cp = ((b0 & 0x07) << 18) | ((s[i + 1] & 0x3F) << 12) |
                    ((s[i + 2] & 0x3F) << 6) | (s[i + 3] & 0x3F);
      if (cp < 0x10000 || cp > 0x10FFFF) cp = kReplacementChar;
      out.push_back(cp);
      i += 4;
    } else {
      out.push_back(kReplacementChar);
      i += 1;
    }
  }
  return out;
}

/// Simple 1:1 lowercase mapping; code points without a mapping pass through.
inline char32_t to_lower(char32_t cp) {
  if (cp < 0x80) return (cp >= U'A' && cp <= U'Z') ? cp + 32 : cp;
  size_t lo = 0, hi = detail::kLowerPairCount;
  while (lo < hi) {
    size_t mid = (lo + hi) / 2;
    if (detail::kLowerPairs[mid][0] < cp) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < detail::kLowerPairCount && detail::kLowerPairs[lo][0] == cp) {
    return detail::kLowerPairs[lo][1];
  }
  return cp;
}

/// True for code points in general category P*.
inline bool is_punct(char32_t cp) {
  size_t lo = 0, hi = detail::kPunctRangeCount;
  while (lo < hi) {
    size_t mid = (lo + hi) / 2;
    if (detail::kPunctRanges[mid][1] < cp) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return lo < detail::kPunctRangeCount && detail::kPunctRanges[lo][0] <= cp &&
         cp <= detail::kPunctRanges[lo][1];
}

/// ASCII whitespace plus the Unicode space separators seen in subtitle files.
inline bool is_space(char32_t cp) {
  switch (cp) {
    case U' ':
    case U'\t':
    case U'\n':
    case U'\r':
    case 0x0B:
    case 0x0C:
    case 0x85:    // NEL
    case 0xA0:    // NBSP
    case 0x1680:
    case 0x2028:
    case 0x2029:
    case 0x202F:
    case 0x205F:
    case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

inline std::string fold_case(std::string_view s) {
  std::u32string cps = decode_utf8(s);
  for (char32_t& cp : cps) cp = to_lower(cp);
  return encode_utf8(cps);
}

}  // namespace forge

#endif  // FORGE_UNICODE_HPP_
