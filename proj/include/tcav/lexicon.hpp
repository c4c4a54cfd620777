/* Copyright 2026 The TCAV Audit Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tcav/error.hpp"
#include "tcav/text.hpp"

namespace tcav {

/// Five sentiment levels over the rescaled valence range [-1, 1].
///
/// Boundaries follow interval notation exactly:
///   VeryNegative [-1, -0.75], Negative (-0.75, -0.25), Neutral [-0.25, 0.25],
///   Positive (0.25, 0.75), VeryPositive [0.75, 1].
enum class SentimentBin { kVeryNegative, kNegative, kNeutral, kPositive, kVeryPositive };

inline constexpr std::array<SentimentBin, 5> kAllBins = {
    SentimentBin::kVeryNegative, SentimentBin::kNegative, SentimentBin::kNeutral,
    SentimentBin::kPositive, SentimentBin::kVeryPositive};

inline constexpr std::string_view to_string(SentimentBin bin) noexcept {
  switch (bin) {
    case SentimentBin::kVeryNegative: return "VeryNegative";
    case SentimentBin::kNegative: return "Negative";
    case SentimentBin::kNeutral: return "Neutral";
    case SentimentBin::kPositive: return "Positive";
    case SentimentBin::kVeryPositive: return "VeryPositive";
  }
  return "?";
}

inline SentimentBin bin_from_string(std::string_view name) {
  for (auto bin : kAllBins) {
    if (to_string(bin) == name) return bin;
  }
  throw InvalidArgument("unknown sentiment bin '" + std::string(name) + "'");
}

inline constexpr bool is_negative(SentimentBin bin) noexcept {
  return bin == SentimentBin::kVeryNegative || bin == SentimentBin::kNegative;
}

struct LexiconEntry {
  std::string word;
  double valence = 0.0;  // rescaled, in [-1, 1]
  std::string pos = "unknown";
  std::uint64_t frequency = 0;

  bool operator==(const LexiconEntry&) const = default;
};

using Lexicon = std::vector<LexiconEntry>;

struct WordSet {
  SentimentBin bin = SentimentBin::kNeutral;
  std::vector<std::string> words;  // descending frequency
  std::string source;
};

// Affine map of a raw [0, 1] valence score onto [-1, 1].
inline double rescale_valence(double raw) {
  if (!(raw >= 0.0 && raw <= 1.0)) {
    throw RangeError("raw valence " + std::to_string(raw) +
                     " outside [0, 1]");
  }
  return 2.0 * raw - 1.0;
}

inline SentimentBin bin_valence(double v) {
  if (!(v >= -1.0 && v <= 1.0)) {
    throw RangeError("valence " + std::to_string(v) + " outside [-1, 1]");
  }
  if (v <= -0.75) return SentimentBin::kVeryNegative;
  if (v < -0.25) return SentimentBin::kNegative;
  if (v <= 0.25) return SentimentBin::kNeutral;
  if (v < 0.75) return SentimentBin::kPositive;
  return SentimentBin::kVeryPositive;
}

namespace detail {

inline std::optional<double> parse_double(std::string_view s) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

inline std::optional<std::uint64_t> parse_count(std::string_view s) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

struct FrequencyRecord {
  std::string pos;
  std::uint64_t count = 0;
};

// word -> predominant part of speech. A word listed under several tags keeps
// the tag with the highest count.
inline std::unordered_map<std::string, FrequencyRecord> parse_frequencies(
    std::istream& in, const std::string& source) {
  std::unordered_map<std::string, FrequencyRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto fields = text::split_fields(t);
    if (fields.size() != 3) {
      throw ParseError(source, line_no, "expected word<TAB>pos<TAB>count");
    }
    auto count = parse_count(fields[2]);
    if (!count) throw ParseError(source, line_no, "bad count '" + fields[2] + "'");
    auto word = text::to_lower(fields[0]);
    auto& rec = out[word];
    if (rec.pos.empty() || *count > rec.count) {
      rec.pos = text::to_lower(fields[1]);
      rec.count = *count;
    }
  }
  return out;
}

}  // namespace detail

/// Reads `word<TAB>raw_valence` lines (extra columns such as arousal and
/// dominance are ignored; an NRC-VAD style header row is skipped). Valences
/// are rescaled on the way in. The optional frequency stream supplies
/// part-of-speech and corpus counts.
inline Lexicon parse_vad_lexicon(std::istream& lexicon, const std::string& source,
                                 std::istream* frequencies = nullptr,
                                 const std::string& freq_source = "frequencies") {
  std::unordered_map<std::string, detail::FrequencyRecord> freq;
  if (frequencies != nullptr) freq = detail::parse_frequencies(*frequencies, freq_source);

  Lexicon out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lexicon, line)) {
    ++line_no;
    auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto fields = text::split_fields(t);
    if (fields.size() < 2 || fields[0].empty()) {
      throw ParseError(source, line_no, "expected word<TAB>valence");
    }
    auto raw = detail::parse_double(fields[1]);
    if (!raw) {
      if (out.empty() && text::to_lower(fields[1]) == "valence") continue;
      throw ParseError(source, line_no, "bad valence '" + fields[1] + "'");
    }
    // Multiword expressions are not supported.
    if (text::has_whitespace(fields[0])) continue;
    if (!(*raw >= 0.0 && *raw <= 1.0)) {
      throw RangeError(source + ":" + std::to_string(line_no) +
                       ": raw valence " + fields[1] + " outside [0, 1]");
    }
    LexiconEntry entry;
    entry.word = text::to_lower(fields[0]);
    entry.valence = rescale_valence(*raw);
    if (auto it = freq.find(entry.word); it != freq.end()) {
      entry.pos = it->second.pos;
      entry.frequency = it->second.count;
    }
    out.push_back(std::move(entry));
  }
  return out;
}

inline Lexicon parse_vad_lexicon(
    const std::filesystem::path& path,
    const std::optional<std::filesystem::path>& freq_path = std::nullopt) {
  auto in = text::open_input(path);
  if (freq_path) {
    auto fin = text::open_input(*freq_path);
    return parse_vad_lexicon(in, path.string(), &fin, freq_path->string());
  }
  return parse_vad_lexicon(in, path.string());
}

/// Adjectives in `bin`, optionally restricted to `allow_list`, sorted by
/// (frequency desc, word asc) and truncated to `n`.
inline WordSet select_words(
    const Lexicon& lexicon, SentimentBin bin, std::size_t n = 100,
    const std::optional<std::vector<std::string>>& allow_list = std::nullopt) {
  if (n == 0) throw InvalidArgument("select_words: n must be at least 1");

  std::unordered_set<std::string> allowed;
  if (allow_list) {
    for (const auto& w : *allow_list) allowed.insert(text::to_lower(w));
  }

  std::vector<const LexiconEntry*> picked;
  std::unordered_set<std::string> seen;
  for (const auto& e : lexicon) {
    if (e.pos != "adj" || bin_valence(e.valence) != bin) continue;
    if (allow_list && !allowed.contains(e.word)) continue;
    if (!seen.insert(e.word).second) continue;
    picked.push_back(&e);
  }
  if (picked.empty()) {
    throw EmptySetError("no adjectives found for bin " +
                        std::string(to_string(bin)));
  }
  std::sort(picked.begin(), picked.end(), [](const auto* a, const auto* b) {
    if (a->frequency != b->frequency) return a->frequency > b->frequency;
    return a->word < b->word;
  });
  if (picked.size() > n) picked.resize(n);

  WordSet out;
  out.bin = bin;
  out.words.reserve(picked.size());
  for (const auto* e : picked) out.words.push_back(e->word);
  out.source = "top " + std::to_string(n) + " adjectives by frequency" +
               (allow_list ? " (allow-list filtered)" : "");
  return out;
}

}  // namespace tcav
