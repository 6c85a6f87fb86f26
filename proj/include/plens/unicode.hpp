// Copyright 2026 The propaganda-lens Authors.
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

// Minimal UTF-8 helpers: code point iteration, White_Space classification
// and simple case folding. Invalid byte sequences are never rejected; each
// offending byte is passed through untouched as its own unit.

#ifndef PLENS_UNICODE_HPP_
#define PLENS_UNICODE_HPP_

#include <unicode/uchar.h>

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace plens::utf8 {

inline constexpr char32_t kInvalid = 0xFFFFFFFF;

// One decoded unit: a code point (or kInvalid) and the bytes it spans.
struct Unit {
  char32_t cp;
  std::size_t length;
};

// Decodes the unit starting at `pos`. Overlong forms, surrogates and
// truncated sequences yield {kInvalid, 1}.
inline Unit Decode(std::string_view s, std::size_t pos) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) return {b0, 1};
  std::size_t len;
  char32_t cp;
  char32_t min;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2, cp = b0 & 0x1F, min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3, cp = b0 & 0x0F, min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4, cp = b0 & 0x07, min = 0x10000;
  } else {
    return {kInvalid, 1};
  }
  if (pos + len > s.size()) return {kInvalid, 1};
  for (std::size_t i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(s[pos + i]);
    if ((b & 0xC0) != 0x80) return {kInvalid, 1};
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    return {kInvalid, 1};
  }
  return {cp, len};
}

inline void Append(std::string &out, char32_t cp) {
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

// Unicode White_Space property (PropList.txt).
constexpr bool IsWhitespace(char32_t cp) {
  switch (cp) {
    case 0x0009: case 0x000A: case 0x000B: case 0x000C: case 0x000D:
    case 0x0020: case 0x0085: case 0x00A0: case 0x1680: case 0x2028:
    case 0x2029: case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

// True if any unit of `s` is a whitespace code point.
inline bool ContainsWhitespace(std::string_view s) {
  for (std::size_t pos = 0; pos < s.size();) {
    const Unit u = Decode(s, pos);
    if (u.cp != kInvalid && IsWhitespace(u.cp)) return true;
    pos += u.length;
  }
  return false;
}

// Simple (one-to-one) default case folding. Idempotent.
inline std::string CaseFold(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t pos = 0; pos < s.size();) {
    const Unit u = Decode(s, pos);
    if (u.cp == kInvalid) {
      out.push_back(s[pos]);
    } else if (u.cp < 0x80) {
      const char c = static_cast<char>(u.cp);
      out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c + 32) : c);
    } else {
      Append(out, static_cast<char32_t>(
                      u_foldCase(static_cast<UChar32>(u.cp),
                                 U_FOLD_CASE_DEFAULT)));
    }
    pos += u.length;
  }
  return out;
}

}  // namespace plens::utf8

#endif  // PLENS_UNICODE_HPP_
