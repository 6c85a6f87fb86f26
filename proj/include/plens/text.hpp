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

#ifndef PLENS_TEXT_HPP_
#define PLENS_TEXT_HPP_

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "plens/error.hpp"
#include "plens/unicode.hpp"

namespace plens {

using TokenSequence = std::vector<std::string>;

// Pinned English stop-word snapshot (the 179-entry NLTK list).
inline constexpr std::array<std::string_view, 179> kDefaultStopWords = {
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you",
    "you're", "you've", "you'll", "you'd", "your", "yours", "yourself",
    "yourselves", "he", "him", "his", "himself", "she", "she's", "her",
    "hers", "herself", "it", "it's", "its", "itself", "they", "them",
    "their", "theirs", "themselves", "what", "which", "who", "whom", "this",
    "that", "that'll", "these", "those", "am", "is", "are", "was", "were",
    "be", "been", "being", "have", "has", "had", "having", "do", "does",
    "did", "doing", "a", "an", "the", "and", "but", "if", "or", "because",
    "as", "until", "while", "of", "at", "by", "for", "with", "about",
    "against", "between", "into", "through", "during", "before", "after",
    "above", "below", "to", "from", "up", "down", "in", "out", "on", "off",
    "over", "under", "again", "further", "then", "once", "here", "there",
    "when", "where", "why", "how", "all", "any", "both", "each", "few",
    "more", "most", "other", "some", "such", "no", "nor", "not", "only",
    "own", "same", "so", "than", "too", "very", "s", "t", "can", "will",
    "just", "don", "don't", "should", "should've", "now", "d", "ll", "m",
    "o", "re", "ve", "y", "ain", "aren", "aren't", "couldn", "couldn't",
    "didn", "didn't", "doesn", "doesn't", "hadn", "hadn't", "hasn",
    "hasn't", "haven", "haven't", "isn", "isn't", "ma", "mightn",
    "mightn't", "mustn", "mustn't", "needn", "needn't", "shan", "shan't",
    "shouldn", "shouldn't", "wasn", "wasn't", "weren", "weren't", "won",
    "won't", "wouldn", "wouldn't"};

// Set of case-folded stop words.
class StopList {
 public:
  StopList() = default;

  template <typename Range>
  explicit StopList(const Range &words) {
    for (const auto &w : words) Add(w);
  }

  static StopList Default() { return StopList(kDefaultStopWords); }

  // One token per line, UTF-8. Blank lines are ignored.
  static StopList Load(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read stop list: " + path.string());
    StopList list;
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      list.Add(line);
    }
    return list;
  }

  void Add(std::string_view word) {
    // Entries are split like text so that a stray trailing space or tab
    // does not create an entry that can never match.
    std::string folded = utf8::CaseFold(word);
    std::size_t begin = 0;
    while (begin < folded.size()) {
      const auto u = utf8::Decode(folded, begin);
      if (u.cp == utf8::kInvalid || !utf8::IsWhitespace(u.cp)) break;
      begin += u.length;
    }
    std::size_t end = begin;
    for (std::size_t pos = begin; pos < folded.size();) {
      const auto u = utf8::Decode(folded, pos);
      pos += u.length;
      if (u.cp == utf8::kInvalid || !utf8::IsWhitespace(u.cp)) end = pos;
    }
    if (end > begin) words_.emplace(folded.substr(begin, end - begin));
  }

  bool Contains(const std::string &folded) const {
    return words_.count(folded) != 0;
  }
  std::size_t size() const { return words_.size(); }

  std::vector<std::string> Sorted() const {
    std::vector<std::string> out(words_.begin(), words_.end());
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::unordered_set<std::string> words_;
};

// Splits `text` on runs of Unicode whitespace, case-folds every token and
// drops stop words. Newlines become spaces first; hashtags, mentions, emoji
// and misspellings pass through (folded) unchanged.
inline TokenSequence Preprocess(std::string_view text, const StopList &stop) {
  TokenSequence tokens;
  std::string current;
  auto flush = [&] {
    if (current.empty()) return;
    std::string folded = utf8::CaseFold(current);
    if (!stop.Contains(folded)) tokens.push_back(std::move(folded));
    current.clear();
  };
  for (std::size_t pos = 0; pos < text.size();) {
    const auto u = utf8::Decode(text, pos);
    const bool space =
        text[pos] == '\n' || (u.cp != utf8::kInvalid && utf8::IsWhitespace(u.cp));
    if (space) {
      flush();
    } else {
      current.append(text.substr(pos, u.length));
    }
    pos += u.length;
  }
  flush();
  return tokens;
}

inline std::string JoinTokens(const TokenSequence &tokens,
                              std::size_t begin, std::size_t count) {
  std::string out;
  for (std::size_t i = 0; i < count; ++i) {
    if (i) out.push_back(' ');
    out += tokens[begin + i];
  }
  return out;
}

inline std::string JoinTokens(const TokenSequence &tokens) {
  return JoinTokens(tokens, 0, tokens.size());
}

}  // namespace plens

#endif  // PLENS_TEXT_HPP_
