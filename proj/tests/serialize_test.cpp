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

#include <filesystem>

#include "support/small_audit.hpp"
#include "tcav/serialize.hpp"

namespace tcav {
namespace {

TEST(ModelJson, RoundTripPreservesEveryBit) {
  auto model = testing::random_model(11, {"alpha", "beta", "gamma"});
  auto back = model_from_json(Json::parse(to_json(model).dump()));
  EXPECT_EQ(model_fingerprint(back), model_fingerprint(model));
  EXPECT_EQ(back.tokens(), model.tokens());
  EXPECT_EQ(back.classes, model.classes);
}

TEST(ModelJson, FileRoundTrip) {
  auto model = testing::random_model(12, {"alpha"});
  const auto path = std::filesystem::temp_directory_path() / "tcav_serialize_test_model.json";
  save_model(model, path);
  EXPECT_EQ(model_fingerprint(load_model(path)), model_fingerprint(model));
  std::filesystem::remove(path);
}

TEST(ModelJson, RejectsBrokenFiles) {
  auto j = to_json(testing::random_model(13, {"alpha"}));
  auto wrong_dim = j;
  wrong_dim["head"]["b1"].push_back(0.0);
  EXPECT_THROW(model_from_json(wrong_dim), Error);
  auto no_head = j;
  no_head.erase("head");
  EXPECT_THROW(model_from_json(no_head), FormatError);
  EXPECT_THROW(parse_json("{not json", "mem"), FormatError);
}

TEST(EngineConfigJson, RoundTripAndDefaults) {
  EngineConfig cfg;
  cfg.cav_count = 7;
  cfg.alpha = 0.05;
  cfg.correction = Correction::kNone;
  cfg.seed = 99;
  auto back = engine_config_from_json(to_json(cfg));
  EXPECT_EQ(back.cav_count, 7u);
  EXPECT_EQ(back.alpha, 0.05);
  EXPECT_EQ(back.correction, Correction::kNone);
  EXPECT_EQ(back.seed, 99u);
  EXPECT_EQ(engine_config_from_json(Json::object()).examples_per_cav, 50u);
}

TEST(AuditGridJson, RoundTrip) {
  auto sets = testing::pseudo_word_sets(6, 2);
  auto model = testing::small_audit_model(3, sets);
  auto pool = generate_filler_corpus(300, 4);
  auto grid = run_identity_audit(model, SubjectRoster::defaults(), sets, pool,
                                 testing::small_engine_config(5));
  auto back = audit_grid_from_json(Json::parse(to_json(grid).dump()));
  EXPECT_EQ(to_json(back).dump(), to_json(grid).dump());
  auto broken = to_json(grid);
  broken["cells"].erase(0);
  EXPECT_THROW(audit_grid_from_json(broken), FormatError);
}

TEST(WordSetJson, RoundTrip) {
  WordSet ws{SentimentBin::kNegative, {"rude", "mean"}, "lexicon"};
  auto back = word_set_from_json(to_json(ws));
  EXPECT_EQ(back.bin, ws.bin);
  EXPECT_EQ(back.words, ws.words);
}

}  // namespace
}  // namespace tcav
