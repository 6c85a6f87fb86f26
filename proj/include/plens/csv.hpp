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

// RFC 4180 style delimited text. Quoted fields may contain the delimiter,
// doubled quotes and raw newlines. Records end at LF or CRLF.

#ifndef PLENS_CSV_HPP_
#define PLENS_CSV_HPP_

#include <charconv>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_map>
#include <vector>

#include "plens/error.hpp"

namespace plens::csv {

using Record = std::vector<std::string>;

class Reader {
 public:
  explicit Reader(std::istream &in, char delimiter = ',')
      : in_(in), delim_(delimiter) {}

  // Reads the next record. Returns false at end of input. A quoted field
  // left open at end of input sets `unterminated()` on the returned record.
  bool Next(Record &record) {
    record.clear();
    unterminated_ = false;
    int c = in_.get();
    if (c == std::char_traits<char>::eof()) return false;
    ++records_;
    std::string field;
    bool quoted = false;
    bool field_started_quoted = false;
    while (true) {
      if (c == std::char_traits<char>::eof()) {
        if (quoted) unterminated_ = true;
        record.push_back(std::move(field));
        return true;
      }
      const char ch = static_cast<char>(c);
      if (quoted) {
        if (ch == '"') {
          if (in_.peek() == '"') {
            in_.get();
            field.push_back('"');
          } else {
            quoted = false;
          }
        } else {
          field.push_back(ch);
        }
      } else if (ch == '"' && field.empty() && !field_started_quoted) {
        quoted = true;
        field_started_quoted = true;
      } else if (ch == delim_) {
        record.push_back(std::move(field));
        field.clear();
        field_started_quoted = false;
      } else if (ch == '\n') {
        record.push_back(std::move(field));
        return true;
      } else if (ch == '\r' && in_.peek() == '\n') {
        in_.get();
        record.push_back(std::move(field));
        return true;
      } else {
        field.push_back(ch);
      }
      c = in_.get();
    }
  }

  bool unterminated() const { return unterminated_; }
  std::uint64_t records() const { return records_; }

 private:
  std::istream &in_;
  char delim_;
  bool unterminated_ = false;
  std::uint64_t records_ = 0;
};

// Column-name lookup over a header record.
class Header {
 public:
  Header() = default;
  explicit Header(Record names) : names_(std::move(names)) {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      std::string name = names_[i];
      // Tolerate a UTF-8 byte-order mark on the first column.
      if (i == 0 && name.rfind("\xEF\xBB\xBF", 0) == 0) name.erase(0, 3);
      index_.emplace(name, i);
    }
  }

  std::optional<std::size_t> Find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t Require(std::string_view name, std::string_view file) const {
    auto idx = Find(name);
    if (!idx) {
      throw FormatError(std::string(file) + ": missing required column '" +
                        std::string(name) + "'");
    }
    return *idx;
  }

  std::size_t size() const { return names_.size(); }

 private:
  Record names_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline bool NeedsQuoting(std::string_view field, char delimiter) {
  for (char c : field) {
    if (c == delimiter || c == '"' || c == '\n' || c == '\r') return true;
  }
  return false;
}

inline void WriteField(std::ostream &out, std::string_view field,
                       char delimiter = ',') {
  if (!NeedsQuoting(field, delimiter)) {
    out << field;
    return;
  }
  out << '"';
  for (char c : field) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

inline void WriteRecord(std::ostream &out, const Record &record,
                        char delimiter = ',') {
  for (std::size_t i = 0; i < record.size(); ++i) {
    if (i) out << delimiter;
    WriteField(out, record[i], delimiter);
  }
  out << '\n';
}

// Shortest decimal form that round-trips.
inline std::string FormatDouble(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::optional<double> ParseDouble(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    return std::nullopt;
  }
  return v;
}

template <typename Int>
std::optional<Int> ParseInt(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  Int v{};
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    return std::nullopt;
  }
  return v;
}

}  // namespace plens::csv

#endif  // PLENS_CSV_HPP_
