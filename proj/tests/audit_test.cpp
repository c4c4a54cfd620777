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

#include "support/small_audit.hpp"
#include "tcav/serialize.hpp"

namespace tcav {
namespace {

struct SmallAudit {
  std::array<WordSet, 5> sets = testing::pseudo_word_sets(8, 1);
  ModelBundle model = testing::small_audit_model(2, sets);
  std::vector<std::string> pool = generate_filler_corpus(400, 3);
};

TEST(SplitPool, DisjointAndSized) {
  SmallAudit f;
  auto cfg = testing::small_engine_config(4);
  auto split = split_pool(f.pool, cfg);
  EXPECT_EQ(split.x_texts.size(), cfg.random_input_count);
  EXPECT_EQ(split.random_concept.size(), cfg.random_concept_size);
  std::set<std::string> xs(split.x_texts.begin(), split.x_texts.end());
  for (const auto& e : split.random_concept.examples) EXPECT_FALSE(xs.contains(e));
  std::vector<std::string> tiny(f.pool.begin(), f.pool.begin() + 10);
  EXPECT_THROW(split_pool(tiny, cfg), EmptySetError);
}

TEST(IdentityAudit, GridIsComplete) {
  SmallAudit f;
  auto roster = SubjectRoster::defaults();
  auto grid = run_identity_audit(f.model, roster, f.sets, f.pool, testing::small_engine_config(5));
  EXPECT_EQ(grid.subjects, roster.all());
  EXPECT_EQ(grid.columns.size(), 5u);
  EXPECT_EQ(grid.cells.size(), roster.all().size() * f.model.classes.size() * 5);
  EXPECT_EQ(grid.baselines.size(), f.model.classes.size());
  for (std::size_t s = 0; s < grid.subjects.size(); ++s) {
    for (std::size_t c = 0; c < grid.classes.size(); ++c) {
      for (std::size_t col = 0; col < grid.columns.size(); ++col) {
        const auto& cell = grid.cells[grid.index_of(s, c, col)];
        EXPECT_EQ(cell.subject, grid.subjects[s]);
        EXPECT_EQ(cell.class_name, grid.classes[c]);
        EXPECT_EQ(cell.column, grid.columns[col]);
        EXPECT_EQ(cell.result.scores.size(), 12u);
        EXPECT_TRUE(cell.result.p_value.has_value());
      }
    }
  }
  EXPECT_NO_THROW(grid.cell("These things", "Toxicity", "VeryPositive"));
  EXPECT_THROW(grid.cell("Nobody", "Toxicity", "VeryPositive"), LookupError);
}

TEST(IdentityAudit, ByteIdenticalAcrossThreadCounts) {
  SmallAudit f;
  auto cfg = testing::small_engine_config(6);
  auto serial = run_identity_audit(f.model, SubjectRoster::defaults(), f.sets, f.pool, cfg);
  cfg.threads = 5;
  auto parallel = run_identity_audit(f.model, SubjectRoster::defaults(), f.sets, f.pool, cfg);
  EXPECT_EQ(to_json(serial).dump(), to_json(parallel).dump());
}

TEST(SentimentAudit, HasControlColumns) {
  SmallAudit f;
  auto grid = run_sentiment_audit(f.model, f.sets, testing::placeholder_profane_words(), f.pool,
                                  testing::small_engine_config(7));
  EXPECT_EQ(grid.subjects, std::vector<std::string>{"They"});
  EXPECT_EQ(grid.columns.back(), kRandomColumn);
  EXPECT_NE(std::find(grid.columns.begin(), grid.columns.end(), kExplicitColumn),
            grid.columns.end());
  const auto toxicity = f.model.class_index("Toxicity");
  const auto& random = grid.cell("They", "Toxicity", kRandomColumn).result;
  EXPECT_EQ(random.scores, grid.baselines[toxicity].scores);
}

AuditGrid handmade_grid() {
  AuditGrid g;
  g.name = "identity";
  g.subjects = {"Women", "These people"};
  g.classes = {"Toxicity"};
  for (auto bin : kAllBins) g.columns.emplace_back(to_string(bin));
  for (const auto& s : g.subjects) {
    for (const auto& col : g.columns) {
      AuditCell cell{s, "Toxicity", col, {}};
      cell.result.significant = col == "VeryNegative" || (s == "Women" && col == "Positive");
      g.cells.push_back(cell);
    }
  }
  return g;
}

TEST(PatternCheck, FlagsOverAndUnderSensitivity) {
  auto g = handmade_grid();
  auto flags = pattern_check(g);
  ASSERT_EQ(flags.over_sensitive.size(), 1u);
  EXPECT_EQ(flags.over_sensitive[0], (FlaggedCell{"Women", "Toxicity", SentimentBin::kPositive}));
  EXPECT_TRUE(flags.under_sensitive.empty());
  for (auto& cell : g.cells) {
    if (cell.subject == "Women" && cell.column == "VeryNegative") cell.result.significant = false;
  }
  flags = pattern_check(g);
  ASSERT_EQ(flags.under_sensitive.size(), 1u);
  EXPECT_EQ(flags.under_sensitive[0].bin, SentimentBin::kVeryNegative);
  EXPECT_THROW(pattern_check(g, "Nobody"), LookupError);
}

TEST(PatternCheck, BaselineSubjectIsNeverFlagged) {
  auto g = handmade_grid();
  for (auto& cell : g.cells) cell.result.significant = true;
  auto flags = pattern_check(g);
  for (const auto& f : flags.over_sensitive) EXPECT_NE(f.subject, "These people");
  EXPECT_EQ(flags.over_sensitive.size(), 3u);
}

}  // namespace
}  // namespace tcav
