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

#include "tcav/train.hpp"

namespace tcav {
namespace {

// "good"/"bad" decide class 0; "loud"/"soft" decide class 1.
LabeledCorpus separable_corpus() {
  LabeledCorpus c;
  c.classes = {"A", "B"};
  const char* fillers[] = {"one", "two", "three", "four"};
  for (int i = 0; i < 80; ++i) {
    const bool a = i % 2 == 0;
    const bool b = (i / 2) % 2 == 0;
    std::string text = std::string(a ? "bad " : "good ") + fillers[i % 4] + (b ? " loud" : " soft");
    c.examples.push_back({text, {static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)}});
  }
  return c;
}

TrainConfig small_config(Optimizer opt, double lr, std::size_t epochs) {
  TrainConfig cfg;
  cfg.dim = 8;
  cfg.hidden = 6;
  cfg.epochs = epochs;
  cfg.lr = lr;
  cfg.seed = 4;
  cfg.optimizer = opt;
  return cfg;
}

TEST(Train, SeparableCorpusReachesHighAccuracy) {
  auto corpus = separable_corpus();
  for (auto opt : {Optimizer::kAdam, Optimizer::kGradientDescent}) {
    auto result = train(corpus, small_config(opt, opt == Optimizer::kAdam ? 0.05 : 5.0, 500));
    EXPECT_GE(result.log.back().accuracy, 0.95) << to_string(opt);
    EXPECT_EQ(result.log.size(), 501u);
    EXPECT_LT(result.log.back().loss, result.log.front().loss);
    EXPECT_NEAR(train_accuracy(result.model, corpus), result.log.back().accuracy, 1e-12);
    EXPECT_NEAR(corpus_loss(result.model, corpus), result.log.back().loss, 1e-12);
  }
}

TEST(Train, SmallStepGradientDescentLowersLoss) {
  auto result = train(separable_corpus(), small_config(Optimizer::kGradientDescent, 0.01, 20));
  for (std::size_t e = 1; e < result.log.size(); ++e) {
    EXPECT_LE(result.log[e].loss, result.log[e - 1].loss + 1e-12);
  }
}

TEST(Train, ZeroLearningRateKeepsInitialization) {
  auto corpus = separable_corpus();
  auto zero = train(corpus, small_config(Optimizer::kAdam, 0.0, 5));
  auto init = train(corpus, small_config(Optimizer::kAdam, 0.0, 0));
  EXPECT_EQ(zero.model.embeddings, init.model.embeddings);
  EXPECT_EQ(zero.model.head, init.model.head);
  for (double v : init.model.head.w1.data) {
    EXPECT_GE(v, -0.1);
    EXPECT_LE(v, 0.1);
  }
}

TEST(Train, DeterministicPerSeed) {
  auto corpus = separable_corpus();
  auto a = train(corpus, small_config(Optimizer::kAdam, 0.05, 30));
  auto b = train(corpus, small_config(Optimizer::kAdam, 0.05, 30));
  EXPECT_EQ(model_fingerprint(a.model), model_fingerprint(b.model));
  auto cfg = small_config(Optimizer::kAdam, 0.05, 30);
  cfg.seed = 5;
  EXPECT_NE(model_fingerprint(train(corpus, cfg).model), model_fingerprint(a.model));
}

TEST(Train, VocabularyStartsWithUnknown) {
  auto result = train(separable_corpus(), small_config(Optimizer::kAdam, 0.05, 1));
  EXPECT_EQ(result.model.tokens().front(), kUnknownToken);
  EXPECT_NO_THROW(result.model.validate());
}

TEST(Train, DivergenceNamesEpoch) {
  auto cfg = small_config(Optimizer::kGradientDescent, 1e308, 5);
  try {
    train(separable_corpus(), cfg);
    FAIL() << "expected divergence";
  } catch (const TrainingDiverged& e) {
    EXPECT_EQ(e.category(), ErrorCategory::kRuntime);
    EXPECT_NE(std::string(e.what()).find("epoch"), std::string::npos);
  }
}

TEST(Train, RejectsBadInput) {
  LabeledCorpus empty;
  EXPECT_THROW(train(empty, TrainConfig{}), EmptySetError);
  auto corpus = separable_corpus();
  corpus.examples[0].labels.push_back(1);
  EXPECT_THROW(train(corpus, TrainConfig{}), ConsistencyError);
  TrainConfig bad;
  bad.dim = 1;
  EXPECT_THROW(train(separable_corpus(), bad), InvalidArgument);
}

}  // namespace
}  // namespace tcav
