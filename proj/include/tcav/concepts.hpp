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

#include <cctype>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "tcav/error.hpp"
#include "tcav/lexicon.hpp"
#include "tcav/random.hpp"

namespace tcav {

enum class ConceptKind {
  kSentimentLevel,
  kIdentitySentiment,
  kControlProfane,
  kControlRandom,
  kComposite
};

inline constexpr std::string_view to_string(ConceptKind kind) noexcept {
  switch (kind) {
    case ConceptKind::kSentimentLevel: return "SentimentLevel";
    case ConceptKind::kIdentitySentiment: return "IdentitySentiment";
    case ConceptKind::kControlProfane: return "ControlProfane";
    case ConceptKind::kControlRandom: return "ControlRandom";
    case ConceptKind::kComposite: return "Composite";
  }
  return "?";
}

inline ConceptKind concept_kind_from_string(std::string_view name) {
  for (auto kind : {ConceptKind::kSentimentLevel, ConceptKind::kIdentitySentiment,
                    ConceptKind::kControlProfane, ConceptKind::kControlRandom,
                    ConceptKind::kComposite}) {
    if (to_string(kind) == name) return kind;
  }
  throw InvalidArgument("unknown concept kind '" + std::string(name) + "'");
}

/// A human-defined concept, given by its example sentences.
struct Concept {
  std::string id;
  ConceptKind kind = ConceptKind::kSentimentLevel;
  std::optional<std::string> subject;
  std::optional<SentimentBin> bin;
  std::vector<std::string> examples;

  std::size_t size() const noexcept { return examples.size(); }

  bool operator==(const Concept&) const = default;
};

inline constexpr std::string_view kGenericSubject = "They";

struct SubjectRoster {
  std::vector<std::string> identity_terms;
  std::vector<std::string> baselines;

  // The seven HateCheck identity terms plus the people/object baselines.
  static SubjectRoster defaults() {
    return {{"Women", "Gay people", "Trans people", "Muslims", "Immigrants",
             "Black people", "Disabled people"},
            {"These people", "These things"}};
  }

  std::vector<std::string> all() const {
    std::vector<std::string> out = identity_terms;
    out.insert(out.end(), baselines.begin(), baselines.end());
    return out;
  }

  void validate() const {
    auto subjects = all();
    if (subjects.empty()) throw InvalidArgument("subject roster is empty");
    std::unordered_set<std::string> seen;
    for (const auto& s : subjects) {
      if (s.empty()) throw InvalidArgument("subject roster has an empty term");
      if (!seen.insert(s).second) {
        throw InvalidArgument("duplicate subject '" + s + "' in roster");
      }
    }
  }
};

inline std::string render_template(std::string_view subject, std::string_view word) {
  std::string out(subject);
  if (!out.empty()) {
    out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  }
  out += " are ";
  out += word;
  out += '.';
  return out;
}

// "Gay people" -> "gay_people"
inline std::string subject_slug(std::string_view subject) {
  std::string out;
  for (unsigned char c : subject) {
    if (std::isalnum(c)) {
      out += static_cast<char>(std::tolower(c));
    } else if (!out.empty() && out.back() != '_') {
      out += '_';
    }
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out;
}

inline std::string sentiment_concept_id(std::string_view subject, SentimentBin bin) {
  return subject_slug(subject) + "/" + std::string(to_string(bin));
}

namespace detail {

inline std::vector<std::string> dedupe(std::span<const std::string> items) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& s : items) {
    if (seen.insert(s).second) out.push_back(s);
  }
  return out;
}

}  // namespace detail

inline Concept build_sentiment_concept(SentimentBin bin, const WordSet& words,
                                       std::string_view subject) {
  if (subject.empty()) throw InvalidArgument("concept subject is empty");
  if (words.words.empty()) {
    throw EmptySetError("word set for " + std::string(to_string(bin)) + " is empty");
  }
  if (words.bin != bin) {
    throw ConsistencyError("word set is for bin " + std::string(to_string(words.bin)) +
                           ", requested " + std::string(to_string(bin)));
  }
  Concept c;
  c.id = sentiment_concept_id(subject, bin);
  c.kind = subject == kGenericSubject ? ConceptKind::kSentimentLevel
                                      : ConceptKind::kIdentitySentiment;
  c.subject = std::string(subject);
  c.bin = bin;
  for (const auto& w : detail::dedupe(words.words)) {
    c.examples.push_back(render_template(subject, w));
  }
  return c;
}

inline Concept build_control_profane(std::span<const std::string> profane_words) {
  auto words = detail::dedupe(profane_words);
  if (words.empty()) throw EmptySetError("profane word list is empty");
  Concept c;
  c.id = "control/Explicit";
  c.kind = ConceptKind::kControlProfane;
  c.subject = std::string(kGenericSubject);
  for (const auto& w : words) c.examples.push_back(render_template(kGenericSubject, w));
  return c;
}

/// n distinct corpus sentences drawn uniformly without replacement.
inline Concept build_control_random(std::span<const std::string> corpus, std::size_t n,
                                    std::uint64_t seed) {
  auto unique = detail::dedupe(corpus);
  if (n == 0) throw InvalidArgument("random concept needs at least one example");
  if (unique.size() < n) {
    throw EmptySetError("corpus has " + std::to_string(unique.size()) +
                        " distinct sentences, random concept needs " + std::to_string(n));
  }
  Rng rng(seed);
  Concept c;
  c.id = "control/Random";
  c.kind = ConceptKind::kControlRandom;
  for (std::size_t i : sample_without_replacement(unique.size(), n, rng)) {
    c.examples.push_back(unique[i]);
  }
  return c;
}

inline Concept merge_concepts(const Concept& a, const Concept& b, std::string id) {
  if (a.examples.empty() || b.examples.empty()) {
    throw EmptySetError("cannot merge an empty concept");
  }
  std::vector<std::string> all = a.examples;
  all.insert(all.end(), b.examples.begin(), b.examples.end());
  Concept c;
  c.id = std::move(id);
  c.kind = ConceptKind::kComposite;
  c.examples = detail::dedupe(all);
  return c;
}

}  // namespace tcav
