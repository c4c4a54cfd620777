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

#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "support/planted.hpp"
#include "tcav/synth.hpp"

namespace tcav {
namespace {

std::array<WordSet, 5> tiny_sets() {
  return {WordSet{SentimentBin::kVeryNegative, {"vile"}, ""},
          WordSet{SentimentBin::kNegative, {"rude"}, ""},
          WordSet{SentimentBin::kNeutral, {"tall"}, ""},
          WordSet{SentimentBin::kPositive, {"kind"}, ""},
          WordSet{SentimentBin::kVeryPositive, {"wonderful"}, ""}};
}

std::size_t label(const LabeledCorpus& c, const LabeledExample& ex, std::string_view cls) {
  for (std::size_t i = 0; i < c.classes.size(); ++i) {
    if (c.classes[i] == cls) return ex.labels[i];
  }
  throw std::logic_error("no class");
}

TEST(SynthSpec, Validation) {
  SynthSpec spec;
  spec.identity_terms = {"Women"};
  EXPECT_NO_THROW(spec.validate());
  spec.biased_terms = {"Muslims"};
  EXPECT_THROW(spec.validate(), InvalidArgument);
  spec.biased_terms = {};
  spec.noise = 1.5;
  EXPECT_THROW(spec.validate(), RangeError);
  spec.noise = 0.0;
  spec.size = 10;
  EXPECT_THROW(spec.validate(), InvalidArgument);
  spec.size = 100;
  spec.bin_toxicity = std::array<double, 5>{0.9, 0.9, 0.0, 0.0, -0.1};
  EXPECT_THROW(spec.validate(), RangeError);
}

TEST(Synth, DeterministicAndSized) {
  SynthSpec spec;
  spec.identity_terms = {"Women", "Muslims"};
  spec.seed = 7;
  spec.size = 300;
  auto sets = tiny_sets();
  auto a = generate_synthetic_corpus(spec, sets);
  auto b = generate_synthetic_corpus(spec, sets);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.size(), 300u);
  spec.seed = 8;
  EXPECT_NE(generate_synthetic_corpus(spec, sets), a);
}

TEST(Synth, NoiselessSentimentRule) {
  SynthSpec spec;
  spec.identity_terms = {"Women"};
  spec.sentiment_toxicity_strength = 1.0;
  spec.size = 500;
  spec.seed = 1;
  auto sets = tiny_sets();
  auto c = generate_synthetic_corpus(spec, sets);
  for (const auto& ex : c.examples) {
    const bool negative = ex.text.find("vile") != std::string::npos ||
                          ex.text.find("rude") != std::string::npos;
    EXPECT_EQ(label(c, ex, "Toxicity"), negative ? 1u : 0u) << ex.text;
    EXPECT_EQ(label(c, ex, "Insult"), label(c, ex, "Toxicity"));
    EXPECT_EQ(label(c, ex, "IdentityAttack"), 0u);
  }
}

TEST(Synth, FullBiasLabelsEveryMentionToxic) {
  SynthSpec spec;
  spec.identity_terms = {"Women", "Muslims"};
  spec.biased_terms = {"Muslims"};
  spec.bias_strength = 1.0;
  spec.size = 500;
  spec.seed = 2;
  auto sets = tiny_sets();
  auto c = generate_synthetic_corpus(spec, sets);
  std::size_t mentions = 0;
  for (const auto& ex : c.examples) {
    if (ex.text.rfind("Muslims are", 0) == 0) {
      ++mentions;
      EXPECT_EQ(label(c, ex, "Toxicity"), 1u);
      EXPECT_EQ(label(c, ex, "IdentityAttack"), 1u);
    }
  }
  EXPECT_GT(mentions, 0u);
}

TEST(Synth, ObjectSubjectsNeverLabelled) {
  SynthSpec spec;
  spec.identity_terms = {"These things"};
  spec.sentiment_toxicity_strength = 1.0;
  spec.size = 400;
  auto sets = tiny_sets();
  auto c = generate_synthetic_corpus(spec, sets);
  for (const auto& ex : c.examples) {
    if (ex.text.rfind("These things", 0) == 0) {
      for (auto y : ex.labels) EXPECT_EQ(y, 0u) << ex.text;
    }
  }
}

TEST(Synth, FullNoiseFlipsEverything) {
  SynthSpec spec;
  spec.sentiment_toxicity_strength = 1.0;
  spec.noise = 1.0;
  spec.size = 200;
  auto sets = tiny_sets();
  auto c = generate_synthetic_corpus(spec, sets);
  for (const auto& ex : c.examples) {
    const bool negative = ex.text.find("vile") != std::string::npos ||
                          ex.text.find("rude") != std::string::npos;
    EXPECT_EQ(label(c, ex, "Toxicity"), negative ? 0u : 1u);
    EXPECT_EQ(label(c, ex, "Threat"), 1u);
  }
}

TEST(Synth, PerBinRatesAndFiller) {
  SynthSpec spec;
  spec.bin_toxicity = std::array<double, 5>{1.0, 0.0, 0.0, 0.0, 0.0};
  spec.filler_fraction = 0.5;
  spec.baseline_rate = 1.0;
  spec.size = 400;
  auto sets = tiny_sets();
  auto c = generate_synthetic_corpus(spec, sets);
  std::size_t filler = 0;
  for (const auto& ex : c.examples) {
    const bool is_template = ex.text.find(" are ") != std::string::npos &&
                             ex.text.back() == '.' && tokenize(ex.text).size() == 3;
    if (ex.text.find("vile") != std::string::npos) {
      EXPECT_EQ(label(c, ex, "Toxicity"), 1u);
    } else if (is_template) {
      EXPECT_EQ(label(c, ex, "Toxicity"), 0u) << ex.text;
    } else {
      ++filler;
      EXPECT_EQ(label(c, ex, "Toxicity"), 1u) << ex.text;
    }
  }
  EXPECT_GT(filler, 100u);
}

TEST(Synth, ProfanityDrivesObscene) {
  SynthSpec spec;
  spec.profane_words = testing::placeholder_profane_words();
  spec.profane_rate = 0.5;
  spec.profanity_strength = 1.0;
  spec.size = 300;
  auto sets = tiny_sets();
  auto c = generate_synthetic_corpus(spec, sets);
  for (const auto& ex : c.examples) {
    bool profane = false;
    for (const auto& w : spec.profane_words) profane |= tokenize(ex.text).back() == w;
    EXPECT_EQ(label(c, ex, "Obscene"), profane ? 1u : 0u) << ex.text;
  }
}

TEST(CorpusJsonl, RoundTrip) {
  SynthSpec spec;
  spec.size = 120;
  auto sets = tiny_sets();
  auto c = generate_synthetic_corpus(spec, sets);
  std::istringstream in(corpus_to_jsonl(c));
  EXPECT_EQ(corpus_from_jsonl(in, "mem"), c);
}

TEST(CorpusJsonl, BadRecordNamesLine) {
  std::istringstream in("{\"text\":\"a\",\"labels\":{\"Toxicity\":1}}\n{\"text\":\"b\"}\n");
  try {
    corpus_from_jsonl(in, "c.jsonl");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  std::istringstream bad_label("{\"text\":\"a\",\"labels\":{\"Toxicity\":2}}\n");
  EXPECT_THROW(corpus_from_jsonl(bad_label, "c"), ParseError);
}

TEST(FillerCorpus, StopWordsOnly) {
  auto filler = generate_filler_corpus(50, 3);
  EXPECT_EQ(filler, generate_filler_corpus(50, 3));
  std::set<std::string> stop(stop_words().begin(), stop_words().end());
  for (const auto& s : filler) {
    for (const auto& t : tokenize(s)) EXPECT_TRUE(stop.contains(t)) << t;
  }
}

TEST(PseudoWords, UniqueAcrossBins) {
  auto sets = testing::pseudo_word_sets(100, 1);
  std::set<std::string> all;
  for (const auto& ws : sets) {
    EXPECT_EQ(ws.words.size(), 100u);
    all.insert(ws.words.begin(), ws.words.end());
  }
  EXPECT_EQ(all.size(), 500u);
}

}  // namespace
}  // namespace tcav
