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

#ifndef FORGE_TEXTNORM_HPP_
#define FORGE_TEXTNORM_HPP_

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "forge/unicode.hpp"

namespace forge {

/// Light text normalization: case folding, punctuation removal and
/// whitespace collapse are independent switches; extra_mappings are literal
/// substring replacements applied last, in order.
struct NormalizationConfig {
  bool lowercase = true;
  bool strip_punctuation = true;
  bool collapse_whitespace = true;
  std::vector<std::pair<std::string, std::string>> extra_mappings;

  static NormalizationConfig light() { return NormalizationConfig{}; }
  static NormalizationConfig none() {
    return NormalizationConfig{false, false, false, {}};
  }
};

namespace detail {

// Word-internal apostrophes are kept; everything else in P* becomes a space
// so joined-up punctuation like dashes still separates words.
inline bool keep_apostrophe(const std::u32string& cps, size_t i) {
  char32_t cp = cps[i];
  if (cp != U'\'' && cp != 0x2019) return false;
  if (i == 0 || i + 1 >= cps.size()) return false;
  const auto wordish = [](char32_t c) { return !is_space(c) && !is_punct(c); };
  return wordish(cps[i - 1]) && wordish(cps[i + 1]);
}

inline void replace_all(std::string& s, const std::string& from, const std::string& to) {
  if (from.empty()) return;
  size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
}

}  // namespace detail

inline std::string normalize(std::string_view text, const NormalizationConfig& cfg) {
  std::u32string cps = decode_utf8(text);
  std::u32string out;
  out.reserve(cps.size());
  for (size_t i = 0; i < cps.size(); ++i) {
    char32_t cp = cps[i];
    if (cfg.lowercase) cp = to_lower(cp);
    if (cfg.strip_punctuation && is_punct(cps[i]) && !detail::keep_apostrophe(cps, i)) {
      cp = U' ';
    }
    out.push_back(cp);
  }
  if (cfg.collapse_whitespace) {
    std::u32string collapsed;
    collapsed.reserve(out.size());
    bool pending_space = false;
    for (char32_t cp : out) {
      if (is_space(cp)) {
        pending_space = !collapsed.empty();
      } else {
        if (pending_space) collapsed.push_back(U' ');
        pending_space = false;
        collapsed.push_back(cp);
      }
    }
    out = std::move(collapsed);
  }
  std::string result = encode_utf8(out);
  for (const auto& [from, to] : cfg.extra_mappings) {
    detail::replace_all(result, from, to);
  }
  return result;
}

/// Splits on whitespace after normalizing with `cfg`.
inline std::vector<std::string> tokenize(std::string_view text,
                                         const NormalizationConfig& cfg) {
  std::string norm = normalize(text, cfg);
  std::u32string cps = decode_utf8(norm);
  std::vector<std::string> tokens;
  std::string cur;
  for (char32_t cp : cps) {
    if (is_space(cp)) {
      if (!cur.empty()) tokens.push_back(std::move(cur));
      cur.clear();
    } else {
      append_utf8(cur, cp);
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

/// Tokenization used by the n-gram filters and boundary matching: case-folded,
/// punctuation-stripped, whitespace-split.
inline std::vector<std::string> tokenize(std::string_view text) {
  return tokenize(text, NormalizationConfig::light());
}

}  // namespace forge

#endif  // FORGE_TEXTNORM_HPP_
