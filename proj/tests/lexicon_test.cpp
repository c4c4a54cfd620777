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

#include <sstream>

#include "tcav/lexicon.hpp"

namespace tcav {
namespace {

TEST(RescaleValence, MapsUnitIntervalOntoSymmetricRange) {
  EXPECT_DOUBLE_EQ(rescale_valence(0.0), -1.0);
  EXPECT_DOUBLE_EQ(rescale_valence(0.5), 0.0);
  EXPECT_DOUBLE_EQ(rescale_valence(1.0), 1.0);
  EXPECT_DOUBLE_EQ(rescale_valence(0.125), -0.75);
}

TEST(RescaleValence, RejectsOutOfRange) {
  EXPECT_THROW(rescale_valence(-0.01), RangeError);
  EXPECT_THROW(rescale_valence(1.5), RangeError);
  EXPECT_THROW(rescale_valence(std::nan("")), RangeError);
}

TEST(BinValence, ClosedAndOpenEndpoints) {
  EXPECT_EQ(bin_valence(-1.0), SentimentBin::kVeryNegative);
  EXPECT_EQ(bin_valence(-0.75), SentimentBin::kVeryNegative);
  EXPECT_EQ(bin_valence(-0.7499), SentimentBin::kNegative);
  EXPECT_EQ(bin_valence(-0.25), SentimentBin::kNeutral);
  EXPECT_EQ(bin_valence(-0.2499), SentimentBin::kNeutral);
  EXPECT_EQ(bin_valence(0.0), SentimentBin::kNeutral);
  EXPECT_EQ(bin_valence(0.25), SentimentBin::kNeutral);
  EXPECT_EQ(bin_valence(0.2501), SentimentBin::kPositive);
  EXPECT_EQ(bin_valence(0.75), SentimentBin::kVeryPositive);
  EXPECT_EQ(bin_valence(1.0), SentimentBin::kVeryPositive);
}

TEST(BinValence, RejectsOutsideRange) {
  EXPECT_THROW(bin_valence(1.0001), RangeError);
  EXPECT_THROW(bin_valence(-2.0), RangeError);
}

TEST(SentimentBinNames, RoundTrip) {
  for (auto bin : kAllBins) EXPECT_EQ(bin_from_string(to_string(bin)), bin);
  EXPECT_THROW(bin_from_string("Angry"), InvalidArgument);
  EXPECT_TRUE(is_negative(SentimentBin::kNegative));
  EXPECT_FALSE(is_negative(SentimentBin::kNeutral));
}

TEST(ParseVadLexicon, ReadsTabSeparatedRows) {
  std::istringstream in("Word\tValence\tArousal\tDominance\n"
                        "Awful\t0.05\t0.7\t0.4\n"
                        "calm\t0.6\t0.1\t0.5\n");
  auto lex = parse_vad_lexicon(in, "lex");
  ASSERT_EQ(lex.size(), 2u);
  EXPECT_EQ(lex[0].word, "awful");
  EXPECT_DOUBLE_EQ(lex[0].valence, -0.9);
  EXPECT_EQ(lex[0].pos, "unknown");
  EXPECT_DOUBLE_EQ(lex[1].valence, 0.2);
}

TEST(ParseVadLexicon, MalformedLineNamesLineNumber) {
  std::istringstream in("good\t0.9\nbad\tnope\n");
  try {
    parse_vad_lexicon(in, "lex.tsv");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("lex.tsv:2"), std::string::npos);
  }
}

TEST(ParseVadLexicon, RawValueOutsideUnitIntervalIsRangeError) {
  std::istringstream in("good\t1.2\n");
  EXPECT_THROW(parse_vad_lexicon(in, "lex"), RangeError);
}

TEST(ParseVadLexicon, SkipsMultiwordEntries) {
  std::istringstream in("good\t0.9\nvery good\t0.95\n");
  auto lex = parse_vad_lexicon(in, "lex");
  ASSERT_EQ(lex.size(), 1u);
  EXPECT_EQ(lex[0].word, "good");
}

TEST(ParseVadLexicon, FrequencyFileKeepsDominantTag) {
  std::istringstream in("fine\t0.8\nrun\t0.55\n");
  std::istringstream freq("fine adj 900\nfine noun 20\nrun verb 50\nrun adj 10\n");
  auto lex = parse_vad_lexicon(in, "lex", &freq, "freq");
  ASSERT_EQ(lex.size(), 2u);
  EXPECT_EQ(lex[0].pos, "adj");
  EXPECT_EQ(lex[0].frequency, 900u);
  EXPECT_EQ(lex[1].pos, "verb");
}

Lexicon small_lexicon() {
  return {{"nice", 0.5, "adj", 10}, {"kind", 0.6, "adj", 30},  {"sweet", 0.4, "adj", 30},
          {"joy", 0.5, "noun", 99}, {"awful", -0.9, "adj", 5}, {"nice", 0.5, "adj", 10}};
}

TEST(SelectWords, SortsByFrequencyThenWord) {
  auto ws = select_words(small_lexicon(), SentimentBin::kPositive, 10);
  EXPECT_EQ(ws.bin, SentimentBin::kPositive);
  EXPECT_EQ(ws.words, (std::vector<std::string>{"kind", "sweet", "nice"}));
}

TEST(SelectWords, TruncatesAndFilters) {
  auto ws = select_words(small_lexicon(), SentimentBin::kPositive, 2);
  EXPECT_EQ(ws.words.size(), 2u);
  auto allowed = select_words(small_lexicon(), SentimentBin::kPositive, 10,
                              std::vector<std::string>{"Nice"});
  EXPECT_EQ(allowed.words, std::vector<std::string>{"nice"});
}

TEST(SelectWords, EmptyBinNamesTheBin) {
  try {
    select_words(small_lexicon(), SentimentBin::kNeutral);
    FAIL() << "expected an empty-set error";
  } catch (const EmptySetError& e) {
    EXPECT_NE(std::string(e.what()).find("Neutral"), std::string::npos);
  }
  EXPECT_THROW(select_words(small_lexicon(), SentimentBin::kPositive, 0), InvalidArgument);
}

}  // namespace
}  // namespace tcav
