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

#ifndef FORGE_TOML_HPP_
#define FORGE_TOML_HPP_

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "forge/core.hpp"

// A deliberately small TOML reader covering what the configuration files
// here use: [tables], [[arrays of tables]], dotted table headers, and
// key = value lines with strings, integers, floats, booleans and same-line
// arrays.  Values land in a nlohmann::json tree.  Multi-line strings, dates
// and inline tables are not supported.

namespace forge::toml {

namespace detail {

[[noreturn]] inline void fail(std::string_view name, int lineno, const std::string& what) {
  throw ConfigError(std::string(name) + ":" + std::to_string(lineno) + ": " + what);
}

inline std::string trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return "";
  size_t e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

/// Strips a trailing comment, respecting quoted strings.
inline std::string strip_comment(std::string_view line) {
  bool in_basic = false, in_literal = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (in_basic) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_basic = false;
      }
    } else if (in_literal) {
      if (c == '\'') in_literal = false;
    } else if (c == '"') {
      in_basic = true;
    } else if (c == '\'') {
      in_literal = true;
    } else if (c == '#') {
      return std::string(line.substr(0, i));
    }
  }
  return std::string(line);
}

struct ValueParser {
  std::string_view text;
  size_t pos = 0;
  std::string_view name;
  int lineno;

  void skip_ws() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  }

  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }

  json parse_value() {
    skip_ws();
    if (pos >= text.size()) fail(name, lineno, "expected a value");
    char c = text[pos];
    if (c == '"') return parse_basic_string();
    if (c == '\'') return parse_literal_string();
    if (c == '[') return parse_array();
    return parse_scalar();
  }

  json parse_basic_string() {
    ++pos;  // opening quote
    std::string out;
    while (pos < text.size() && text[pos] != '"') {
      char c = text[pos];
      if (c == '\\') {
        ++pos;
        if (pos >= text.size()) fail(name, lineno, "dangling escape in string");
        switch (text[pos]) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case 'r': out += '\r'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default:
            fail(name, lineno, std::string("unsupported escape \\") + text[pos]);
        }
        ++pos;
      } else {
        out += c;
        ++pos;
      }
    }
    if (pos >= text.size()) fail(name, lineno, "unterminated string");
    ++pos;  // closing quote
    return json(out);
  }

  json parse_literal_string() {
    ++pos;
    size_t close = text.find('\'', pos);
    if (close == std::string_view::npos) fail(name, lineno, "unterminated string");
    json v(std::string(text.substr(pos, close - pos)));
    pos = close + 1;
    return v;
  }

  json parse_array() {
    ++pos;  // '['
    json arr = json::array();
    skip_ws();
    if (pos < text.size() && text[pos] == ']') {
      ++pos;
      return arr;
    }
    while (true) {
      arr.push_back(parse_value());
      skip_ws();
      if (pos < text.size() && text[pos] == ',') {
        ++pos;
        skip_ws();
        if (pos < text.size() && text[pos] == ']') {  // trailing comma
          ++pos;
          return arr;
        }
        continue;
      }
      if (pos < text.size() && text[pos] == ']') {
        ++pos;
        return arr;
      }
      fail(name, lineno, "expected ',' or ']' in array");
    }
  }

  json parse_scalar() {
    size_t start = pos;
    while (pos < text.size() && text[pos] != ',' && text[pos] != ']') ++pos;
    std::string tok = trim(text.substr(start, pos - start));
    if (tok == "true") return json(true);
    if (tok == "false") return json(false);
    std::string digits;
    for (char c : tok) {
      if (c != '_') digits += c;
    }
    if (digits.empty()) fail(name, lineno, "empty value");
    bool is_float = digits.find_first_of(".eE") != std::string::npos;
    try {
      size_t used = 0;
      if (is_float) {
        double d = std::stod(digits, &used);
        if (used == digits.size()) return json(d);
      } else {
        long long v = std::stoll(digits, &used);
        if (used == digits.size()) return json(v);
      }
    } catch (const std::exception&) {
      // fallthrough
    }
    fail(name, lineno, "cannot parse value '" + tok + "'");
  }
};

inline std::vector<std::string> split_key_path(const std::string& s, std::string_view name,
                                               int lineno) {
  std::vector<std::string> parts;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (quoted) {
      if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == '.') {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(trim(cur));
  for (const std::string& p : parts) {
    if (p.empty()) fail(name, lineno, "empty key component in '" + s + "'");
  }
  return parts;
}

/// Walks a dotted path; descending through an array means its last element.
inline json* navigate(json* root, const std::vector<std::string>& path,
                      std::string_view name, int lineno) {
  json* node = root;
  for (const std::string& part : path) {
    if (node->is_array()) {
      if (node->empty()) fail(name, lineno, "table array is empty");
      node = &node->back();
    }
    if (!node->is_object()) fail(name, lineno, "path collides with a value");
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
  }
  if (node->is_array()) {
    if (node->empty()) fail(name, lineno, "table array is empty");
    node = &node->back();
  }
  return node;
}

}  // namespace detail

inline json parse(std::istream& in, std::string_view name = "<toml>") {
  json root = json::object();
  json* current = &root;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::string line = detail::trim(detail::strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      bool is_array = line.size() > 1 && line[1] == '[';
      std::string closer = is_array ? "]]" : "]";
      if (!line.ends_with(closer)) detail::fail(name, lineno, "unterminated table header");
      std::string inner = detail::trim(
          line.substr(is_array ? 2 : 1, line.size() - (is_array ? 4 : 2)));
      if (inner.empty()) detail::fail(name, lineno, "empty table header");
      auto path = detail::split_key_path(inner, name, lineno);
      if (is_array) {
        std::vector<std::string> parent_path(path.begin(), path.end() - 1);
        json* parent = detail::navigate(&root, parent_path, name, lineno);
        json& arr = (*parent)[path.back()];
        if (arr.is_null()) arr = json::array();
        if (!arr.is_array()) detail::fail(name, lineno, "redefinition as table array");
        arr.push_back(json::object());
        current = &arr.back();
      } else {
        current = detail::navigate(&root, path, name, lineno);
      }
      continue;
    }
    size_t eq = std::string::npos;
    {
      bool in_basic = false, in_literal = false;
      for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (in_basic) {
          if (c == '\\') {
            ++i;
          } else if (c == '"') {
            in_basic = false;
          }
        } else if (in_literal) {
          if (c == '\'') in_literal = false;
        } else if (c == '"') {
          in_basic = true;
        } else if (c == '\'') {
          in_literal = true;
        } else if (c == '=') {
          eq = i;
          break;
        }
      }
    }
    if (eq == std::string::npos) detail::fail(name, lineno, "expected 'key = value'");
    auto key_path = detail::split_key_path(detail::trim(line.substr(0, eq)), name, lineno);
    detail::ValueParser vp{line, eq + 1, name, lineno};
    json value = vp.parse_value();
    if (!vp.at_end()) detail::fail(name, lineno, "trailing characters after value");
    json* slot = current;
    for (size_t k = 0; k + 1 < key_path.size(); ++k) {
      slot = &(*slot)[key_path[k]];
      if (slot->is_null()) *slot = json::object();
      if (!slot->is_object()) detail::fail(name, lineno, "dotted key collides with a value");
    }
    if (!(*slot)[key_path.back()].is_null()) {
      detail::fail(name, lineno, "duplicate key '" + key_path.back() + "'");
    }
    (*slot)[key_path.back()] = std::move(value);
  }
  return root;
}

inline json parse(std::string_view text, std::string_view name = "<toml>") {
  std::istringstream in{std::string(text)};
  return parse(in, name);
}

inline json parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return parse(in, path);
}

}  // namespace forge::toml

#endif  // FORGE_TOML_HPP_
