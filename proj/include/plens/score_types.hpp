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

#ifndef PLENS_SCORE_TYPES_HPP_
#define PLENS_SCORE_TYPES_HPP_

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "plens/unicode.hpp"

namespace plens {

// The overall English bot score followed by the six subscores, in the
// fixed order every score table is emitted in.
enum class ScoreType { kEnglish, kContent, kFriend, kNetwork, kSentiment, kTemporal, kUser };

inline constexpr std::array<ScoreType, 7> kAllScoreTypes = {
    ScoreType::kEnglish,   ScoreType::kContent,  ScoreType::kFriend, ScoreType::kNetwork,
    ScoreType::kSentiment, ScoreType::kTemporal, ScoreType::kUser};

// Lowercase key used in files ("english", "content", ...).
inline std::string_view ScoreKey(ScoreType t) {
  static constexpr std::array<std::string_view, 7> kKeys = {
      "english", "content", "friend", "network", "sentiment", "temporal", "user"};
  return kKeys[static_cast<std::size_t>(t)];
}

// Row name used in KS tables ("English", "Content", ...).
inline std::string_view ScoreDisplayName(ScoreType t) {
  static constexpr std::array<std::string_view, 7> kNames = {
      "English", "Content", "Friend", "Network", "Sentiment", "Temporal", "User"};
  return kNames[static_cast<std::size_t>(t)];
}

// Accepts canonical keys and the alternate subscore spellings
// (friends, timing, user meta-data and similar).
inline std::optional<ScoreType> ParseScoreType(std::string_view raw) {
  const std::string s = utf8::CaseFold(raw);
  for (auto t : kAllScoreTypes) {
    if (s == ScoreKey(t)) return t;
  }
  if (s == "friends") return ScoreType::kFriend;
  if (s == "timing") return ScoreType::kTemporal;
  if (s == "user meta-data" || s == "user_meta_data" || s == "user_metadata" ||
      s == "user-metadata" || s == "metadata") {
    return ScoreType::kUser;
  }
  if (s == "overall" || s == "english_score") return ScoreType::kEnglish;
  return std::nullopt;
}

}  // namespace plens

#endif  // PLENS_SCORE_TYPES_HPP_
