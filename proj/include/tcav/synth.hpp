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
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tcav/concepts.hpp"
#include "tcav/error.hpp"
#include "tcav/lexicon.hpp"
#include "tcav/model.hpp"
#include "tcav/random.hpp"
#include "tcav/text.hpp"

namespace tcav {

struct LabeledExample {
  std::string text;
  std::vector<std::uint8_t> labels;  // aligned with LabeledCorpus::classes

  bool operator==(const LabeledExample&) const = default;
};

struct LabeledCorpus {
  std::vector<std::string> classes = default_classes();
  std::vector<LabeledExample> examples;

  std::size_t size() const noexcept { return examples.size(); }

  std::vector<std::string> texts() const {
    std::vector<std::string> out;
    out.reserve(examples.size());
    for (const auto& e : examples) out.push_back(e.text);
    return out;
  }

  bool operator==(const LabeledCorpus&) const = default;
};

/// Controls for a template corpus with known ("planted") label rules.
///
/// Each sentence is "<subject> are <word>." with the subject drawn from
/// {They} plus identity_terms and the word drawn from the five word sets.
/// Toxicity and Insult fire with probability sentiment_toxicity_strength for
/// Negative/VeryNegative words and bias_strength for biased subjects (the
/// larger of the two applies); IdentityAttack follows bias_strength only;
/// Obscene follows profanity_strength when a profane word is used. Object
/// subjects are never linked to any label. Every label is finally flipped
/// with probability `noise`.
struct SynthSpec {
  std::vector<std::string> identity_terms;
  std::vector<std::string> biased_terms;
  std::vector<std::string> object_terms = {"These things"};
  double sentiment_toxicity_strength = 0.95;
  double bias_strength = 0.0;
  std::size_t size = 1000;
  double noise = 0.0;
  std::uint64_t seed = 0;
  // Share of sentences made of random stop words (all labels 0 before noise).
  double filler_fraction = 0.0;
  std::vector<std::string> profane_words;
  double profane_rate = 0.0;
  double profanity_strength = 0.95;
  // Toxicity/Insult probability for sentences no other rule covers.
  double baseline_rate = 0.0;
  // Per-bin Toxicity/Insult probability in kAllBins order; when set it
  // replaces sentiment_toxicity_strength for every bin.
  std::optional<std::array<double, 5>> bin_toxicity;
  std::vector<std::string> classes = default_classes();

  void validate() const {
    auto check_prob = [](double p, const char* name) {
      if (!(p >= 0.0 && p <= 1.0)) {
        throw RangeError(std::string(name) + " must be a probability in [0, 1]");
      }
    };
    check_prob(sentiment_toxicity_strength, "sentiment_toxicity_strength");
    check_prob(bias_strength, "bias_strength");
    check_prob(noise, "noise");
    check_prob(filler_fraction, "filler_fraction");
    check_prob(profane_rate, "profane_rate");
    check_prob(profanity_strength, "profanity_strength");
    check_prob(baseline_rate, "baseline_rate");
    if (bin_toxicity) {
      for (double p : *bin_toxicity) check_prob(p, "bin_toxicity");
    }
    if (size < 100) {
      throw InvalidArgument("synthetic corpus size must be at least 100, got " +
                            std::to_string(size));
    }
    for (const auto& b : biased_terms) {
      if (std::find(identity_terms.begin(), identity_terms.end(), b) == identity_terms.end()) {
        throw InvalidArgument("biased term '" + b + "' is not an identity term");
      }
      if (std::find(object_terms.begin(), object_terms.end(), b) != object_terms.end()) {
        throw InvalidArgument("object term '" + b + "' cannot be biased");
      }
    }
    if (profane_rate > 0.0 && profane_words.empty()) {
      throw InvalidArgument("profane_rate > 0 needs a profane word list");
    }
    if (classes.empty()) throw InvalidArgument("synthetic corpus needs at least one class");
  }
};

inline const std::vector<std::string>& stop_words() {
  static const std::vector<std::string> kWords = {
      "a",     "about", "all",   "also",  "and",   "any",   "as",    "at",
      "be",    "been",  "but",   "by",    "can",   "could", "do",    "for",
      "from",  "get",   "go",    "had",   "has",   "have",  "he",    "her",
      "him",   "his",   "how",   "i",     "if",    "in",    "into",  "is",
      "it",    "just",  "like",  "me",    "my",    "no",    "not",   "now",
      "of",    "on",    "one",   "or",    "our",   "out",   "she",   "so",
      "some",  "that",  "the",   "their", "them",  "then",  "there", "these",
      "they",  "this",  "to",    "up",    "was",   "we",    "what",  "when",
      "which", "who",   "will",  "with",  "would", "you",   "your",  "are"};
  return kWords;
}

inline std::string make_filler_sentence(Rng& rng) {
  const auto& words = stop_words();
  const std::size_t length = 4 + rng.index(5);
  std::string s;
  for (std::size_t i = 0; i < length; ++i) {
    if (i > 0) s += ' ';
    s += words[rng.index(words.size())];
  }
  s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  s += '.';
  return s;
}

/// Random stop-word sentences, usable as contexts, probe inputs and the
/// random control concept.
inline std::vector<std::string> generate_filler_corpus(std::size_t n, std::uint64_t seed) {
  Rng rng(derive_seed(seed, "filler", 0));
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(make_filler_sentence(rng));
  return out;
}

inline LabeledCorpus generate_synthetic_corpus(const SynthSpec& spec,
                                               std::span<const WordSet> word_sets) {
  spec.validate();
  if (word_sets.empty()) throw EmptySetError("synthetic corpus needs word sets");
  for (const auto& ws : word_sets) {
    if (ws.words.empty()) {
      throw EmptySetError("word set for " + std::string(to_string(ws.bin)) + " is empty");
    }
  }

  std::vector<std::string> subjects = {std::string(kGenericSubject)};
  for (const auto& s : spec.identity_terms) {
    if (std::find(subjects.begin(), subjects.end(), s) == subjects.end()) subjects.push_back(s);
  }
  auto contains = [](const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
  };

  Rng rng(derive_seed(spec.seed, "synth", 0));
  LabeledCorpus corpus;
  corpus.classes = spec.classes;
  corpus.examples.reserve(spec.size);

  for (std::size_t n = 0; n < spec.size; ++n) {
    LabeledExample ex;
    double p_sentiment = 0.0, p_bias = 0.0, p_profane = 0.0;
    if (rng.uniform() < spec.filler_fraction) {
      ex.text = make_filler_sentence(rng);
      p_sentiment = spec.baseline_rate;
    } else {
      const std::string& subject = subjects[rng.index(subjects.size())];
      std::string word;
      bool profane = false;
      if (!spec.profane_words.empty() && rng.uniform() < spec.profane_rate) {
        word = spec.profane_words[rng.index(spec.profane_words.size())];
        profane = true;
      } else {
        const WordSet& ws = word_sets[rng.index(word_sets.size())];
        word = ws.words[rng.index(ws.words.size())];
        if (spec.bin_toxicity) {
          p_sentiment = (*spec.bin_toxicity)[static_cast<std::size_t>(ws.bin)];
        } else if (is_negative(ws.bin)) {
          p_sentiment = spec.sentiment_toxicity_strength;
        } else {
          p_sentiment = spec.baseline_rate;
        }
      }
      if (profane) p_profane = spec.profanity_strength;
      if (contains(spec.biased_terms, subject)) p_bias = spec.bias_strength;
      if (contains(spec.object_terms, subject)) {
        p_sentiment = spec.baseline_rate;
        p_bias = p_profane = 0.0;
      }
      ex.text = render_template(subject, word);
    }

    ex.labels.resize(spec.classes.size());
    for (std::size_t c = 0; c < spec.classes.size(); ++c) {
      const std::string& name = spec.classes[c];
      double p = 0.0;
      if (name == "Toxicity" || name == "Insult") {
        p = std::max({p_sentiment, p_bias, p_profane});
      } else if (name == "IdentityAttack") {
        p = p_bias;
      } else if (name == "Obscene") {
        p = p_profane;
      }
      bool label = rng.uniform() < p;
      if (rng.uniform() < spec.noise) label = !label;
      ex.labels[c] = label ? 1 : 0;
    }
    corpus.examples.push_back(std::move(ex));
  }
  return corpus;
}

/// JSONL: one {"text": ..., "labels": {"<class>": 0|1, ...}} object per line.
inline std::string corpus_to_jsonl(const LabeledCorpus& corpus) {
  std::string out;
  for (const auto& ex : corpus.examples) {
    nlohmann::ordered_json labels = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < corpus.classes.size(); ++c) {
      labels[corpus.classes[c]] = static_cast<int>(ex.labels[c]);
    }
    nlohmann::ordered_json rec;
    rec["text"] = ex.text;
    rec["labels"] = std::move(labels);
    out += rec.dump();
    out += '\n';
  }
  return out;
}

inline LabeledCorpus corpus_from_jsonl(std::istream& in, const std::string& source) {
  LabeledCorpus corpus;
  corpus.classes.clear();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    nlohmann::ordered_json rec;
    try {
      rec = nlohmann::ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(source, line_no, e.what());
    }
    if (!rec.is_object() || !rec.contains("text") || !rec["text"].is_string() ||
        !rec.contains("labels") || !rec["labels"].is_object()) {
      throw ParseError(source, line_no, "expected {\"text\": string, \"labels\": {...}}");
    }
    const auto& labels = rec["labels"];
    if (corpus.classes.empty()) {
      for (const auto& [name, _] : labels.items()) corpus.classes.push_back(name);
      if (corpus.classes.empty()) throw ParseError(source, line_no, "no labels");
    }
    LabeledExample ex;
    ex.text = rec["text"].get<std::string>();
    ex.labels.resize(corpus.classes.size());
    if (labels.size() != corpus.classes.size()) {
      throw ParseError(source, line_no, "label set differs from the first record");
    }
    for (std::size_t c = 0; c < corpus.classes.size(); ++c) {
      const auto it = labels.find(corpus.classes[c]);
      if (it == labels.end() || !it->is_number_integer() ||
          (it->get<int>() != 0 && it->get<int>() != 1)) {
        throw ParseError(source, line_no,
                         "label '" + corpus.classes[c] + "' must be 0 or 1");
      }
      ex.labels[c] = static_cast<std::uint8_t>(it->get<int>());
    }
    corpus.examples.push_back(std::move(ex));
  }
  if (corpus.classes.empty()) corpus.classes = default_classes();
  return corpus;
}

inline LabeledCorpus read_corpus(const std::filesystem::path& path) {
  auto in = text::open_input(path);
  return corpus_from_jsonl(in, path.string());
}

}  // namespace tcav
