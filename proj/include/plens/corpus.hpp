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

// Corpus ingestion: Reddit seed titles labeled by community provenance, and
// the delimited tweet corpus that the trained classifier is applied to.

#ifndef PLENS_CORPUS_HPP_
#define PLENS_CORPUS_HPP_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "plens/csv.hpp"
#include "plens/error.hpp"
#include "plens/timeutil.hpp"
#include "plens/unicode.hpp"

namespace plens {

enum class Platform { kReddit, kTwitter };

inline std::string_view PlatformName(Platform p) {
  return p == Platform::kReddit ? "reddit" : "twitter";
}

// 0 = neutral, 1 = pro-China.
using Label = int;

enum class Provenance { kSeedList, kPredicted, kImported };

inline std::string_view ProvenanceName(Provenance p) {
  switch (p) {
    case Provenance::kSeedList: return "seed_list";
    case Provenance::kPredicted: return "predicted";
    case Provenance::kImported: return "imported";
  }
  return "";
}

inline std::optional<Provenance> ParseProvenance(std::string_view s) {
  if (s == "seed_list") return Provenance::kSeedList;
  if (s == "predicted") return Provenance::kPredicted;
  if (s == "imported") return Provenance::kImported;
  return std::nullopt;
}

struct Document {
  std::string id;
  Platform platform = Platform::kTwitter;
  std::string author_or_community;  // subreddit for reddit, user id for twitter
  std::string text;
  std::string lang = "unknown";
  std::optional<UtcSeconds> timestamp;
};

struct LabeledDocument {
  Document doc;
  Label label = 0;
  Provenance provenance = Provenance::kSeedList;
};

// Case-folds and strips a leading "/r/" (or "r/") and trailing "/".
inline std::string CanonicalCommunity(std::string_view name) {
  while (!name.empty() && (name.front() == ' ' || name.front() == '\t')) {
    name.remove_prefix(1);
  }
  while (!name.empty() && (name.back() == ' ' || name.back() == '\t')) {
    name.remove_suffix(1);
  }
  std::string s = utf8::CaseFold(name);
  if (s.rfind("/r/", 0) == 0) {
    s.erase(0, 3);
  } else if (s.rfind("r/", 0) == 0) {
    s.erase(0, 2);
  }
  while (!s.empty() && s.back() == '/') s.pop_back();
  return s;
}

class SeedLabelMap {
 public:
  SeedLabelMap() = default;
  SeedLabelMap(std::initializer_list<std::pair<std::string, Label>> entries) {
    for (const auto &[name, label] : entries) Insert(name, label);
  }

  // Lines of "community<TAB>label". Blank lines and lines starting with '#'
  // are skipped.
  static SeedLabelMap Load(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read seed label map: " + path.string());
    SeedLabelMap map;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line.front() == '#') continue;
      const auto tab = line.find('\t');
      const auto where = path.string() + ":" + std::to_string(line_no);
      if (tab == std::string::npos) {
        throw FormatError(where + ": expected community<TAB>label");
      }
      const std::string_view label_text = std::string_view(line).substr(tab + 1);
      if (label_text != "0" && label_text != "1") {
        throw FormatError(where + ": label must be 0 or 1");
      }
      try {
        map.Insert(line.substr(0, tab), label_text == "1" ? 1 : 0);
      } catch (const std::invalid_argument &e) {
        throw FormatError(where + ": " + e.what());
      }
    }
    return map;
  }

  // Throws std::invalid_argument when the community already maps to the
  // other label or canonicalizes to an empty name.
  void Insert(std::string_view community, Label label) {
    if (label != 0 && label != 1) {
      throw std::invalid_argument("label must be 0 or 1");
    }
    std::string key = CanonicalCommunity(community);
    if (key.empty()) throw std::invalid_argument("empty community name");
    auto [it, inserted] = entries_.emplace(key, label);
    if (!inserted && it->second != label) {
      throw std::invalid_argument("community '" + key +
                                  "' mapped to both labels");
    }
  }

  std::optional<Label> Find(std::string_view community) const {
    auto it = entries_.find(CanonicalCommunity(community));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, Label> &entries() const { return entries_; }

 private:
  std::map<std::string, Label> entries_;
};

// Attaches the seed-list label for a Reddit document, or nullopt on a miss.
inline std::optional<LabeledDocument> ApplySeedLabels(
    const Document &doc, const SeedLabelMap &seed_map) {
  if (doc.platform != Platform::kReddit) {
    throw std::invalid_argument("seed labels apply to reddit documents only");
  }
  auto label = seed_map.Find(doc.author_or_community);
  if (!label) return std::nullopt;
  return LabeledDocument{doc, *label, Provenance::kSeedList};
}

// Row accounting for one ingest run. Every record read lands in exactly one
// of the other buckets.
struct IngestReport {
  std::uint64_t read = 0;
  std::uint64_t emitted = 0;
  std::uint64_t skipped_unknown_community = 0;
  std::uint64_t filtered_lang = 0;
  std::uint64_t deduped = 0;
  std::uint64_t rejected_empty = 0;
  std::uint64_t rejected_malformed = 0;

  bool Conserved() const {
    return read == emitted + skipped_unknown_community + filtered_lang +
                       deduped + rejected_empty + rejected_malformed;
  }

  friend bool operator==(const IngestReport &, const IngestReport &) = default;
};

inline bool IsBlank(std::string_view s) {
  for (std::size_t pos = 0; pos < s.size();) {
    const auto u = utf8::Decode(s, pos);
    if (u.cp == utf8::kInvalid || !utf8::IsWhitespace(u.cp)) return false;
    pos += u.length;
  }
  return true;
}

// Line-delimited JSON records {"subreddit": ..., "title": ...}, optionally
// with "id" and "label" (the latter ignored). Records without an "id" get
// "reddit-<line number>". Blank lines are not records.
inline IngestReport IngestRedditTitles(
    const std::filesystem::path &path, const SeedLabelMap &seed_map,
    const std::function<void(LabeledDocument &&)> &sink) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read reddit corpus: " + path.string());
  IngestReport report;
  std::unordered_set<std::string> seen_ids;
  std::unordered_map<std::string, std::unordered_set<std::string>> seen_titles;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (IsBlank(line)) continue;
    ++report.read;
    nlohmann::json rec = nlohmann::json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object() || !rec.contains("subreddit") ||
        !rec.contains("title") || !rec["subreddit"].is_string() ||
        !rec["title"].is_string()) {
      ++report.rejected_malformed;
      continue;
    }
    Document doc;
    doc.platform = Platform::kReddit;
    doc.author_or_community = rec["subreddit"].get<std::string>();
    doc.text = rec["title"].get<std::string>();
    if (rec.contains("id")) {
      if (!rec["id"].is_string() || rec["id"].get<std::string>().empty()) {
        ++report.rejected_malformed;
        continue;
      }
      doc.id = rec["id"].get<std::string>();
    } else {
      doc.id = "reddit-" + std::to_string(line_no);
    }
    if (IsBlank(doc.text)) {
      ++report.rejected_empty;
      continue;
    }
    auto labeled = ApplySeedLabels(doc, seed_map);
    if (!labeled) {
      ++report.skipped_unknown_community;
      continue;
    }
    auto &titles = seen_titles[CanonicalCommunity(doc.author_or_community)];
    if (!titles.insert(doc.text).second) {
      ++report.deduped;
      continue;
    }
    if (!seen_ids.insert(doc.id).second) {
      // Supplied ids must be unique within the corpus.
      titles.erase(doc.text);
      ++report.rejected_malformed;
      continue;
    }
    ++report.emitted;
    sink(std::move(*labeled));
  }
  return report;
}

inline std::pair<std::vector<LabeledDocument>, IngestReport>
IngestRedditTitles(const std::filesystem::path &path,
                   const SeedLabelMap &seed_map) {
  std::vector<LabeledDocument> docs;
  auto report = IngestRedditTitles(
      path, seed_map, [&](LabeledDocument &&d) { docs.push_back(std::move(d)); });
  return {std::move(docs), report};
}

struct TweetIngestOptions {
  char delimiter = ',';
  std::optional<std::string> lang_filter;
};

// Delimited tweets with a header row carrying id, user_id, text and lang
// (and optionally created_at). Checks per row, in order: malformed, empty
// text, language filter, duplicate id.
inline IngestReport IngestTweets(const std::filesystem::path &path,
                                 const TweetIngestOptions &options,
                                 const std::function<void(Document &&)> &sink) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read tweet corpus: " + path.string());
  csv::Reader reader(in, options.delimiter);
  csv::Record record;
  if (!reader.Next(record)) {
    throw FormatError(path.string() + ": missing header row");
  }
  const csv::Header header(record);
  const auto file = path.string();
  const std::size_t id_col = header.Require("id", file);
  const std::size_t user_col = header.Require("user_id", file);
  const std::size_t text_col = header.Require("text", file);
  const std::size_t lang_col = header.Require("lang", file);
  const auto created_col = header.Find("created_at");
  std::optional<std::string> filter;
  if (options.lang_filter) filter = utf8::CaseFold(*options.lang_filter);

  IngestReport report;
  std::unordered_set<std::string> seen_ids;
  while (reader.Next(record)) {
    if (record.size() == 1 && record[0].empty() && !reader.unterminated()) {
      continue;  // blank line
    }
    ++report.read;
    if (reader.unterminated() || record.size() != header.size() ||
        record[id_col].empty() || record[user_col].empty()) {
      ++report.rejected_malformed;
      continue;
    }
    Document doc;
    doc.platform = Platform::kTwitter;
    doc.id = record[id_col];
    doc.author_or_community = record[user_col];
    doc.text = record[text_col];
    doc.lang = record[lang_col].empty() ? "unknown" : record[lang_col];
    if (created_col && !record[*created_col].empty()) {
      doc.timestamp = ParseIso8601(record[*created_col]);
      if (!doc.timestamp) {
        ++report.rejected_malformed;
        continue;
      }
    }
    if (IsBlank(doc.text)) {
      ++report.rejected_empty;
      continue;
    }
    if (filter && utf8::CaseFold(doc.lang) != *filter) {
      ++report.filtered_lang;
      continue;
    }
    if (!seen_ids.insert(doc.id).second) {
      ++report.deduped;
      continue;
    }
    ++report.emitted;
    sink(std::move(doc));
  }
  return report;
}

inline std::pair<std::vector<Document>, IngestReport> IngestTweets(
    const std::filesystem::path &path, const TweetIngestOptions &options = {}) {
  std::vector<Document> docs;
  auto report = IngestTweets(path, options,
                             [&](Document &&d) { docs.push_back(std::move(d)); });
  return {std::move(docs), report};
}

}  // namespace plens

#endif  // PLENS_CORPUS_HPP_
