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

#include <array>
#include <string>
#include <vector>

#include "support/heads.hpp"
#include "support/planted.hpp"

namespace tcav::testing {

inline EngineConfig small_engine_config(std::uint64_t seed) {
  EngineConfig cfg;
  cfg.cav_count = 12;
  cfg.examples_per_cav = 5;
  cfg.random_input_count = 40;
  cfg.random_concept_size = 30;
  cfg.seed = seed;
  return cfg;
}

// Vocabulary covering the word sets, the roster tokens and the stop words.
inline ModelBundle small_audit_model(std::uint64_t seed, const std::array<WordSet, 5>& sets) {
  std::vector<std::string> words(stop_words().begin(), stop_words().end());
  for (const auto& ws : sets) words.insert(words.end(), ws.words.begin(), ws.words.end());
  for (const auto& s : SubjectRoster::defaults().all()) {
    for (const auto& t : tokenize(s)) words.push_back(t);
  }
  words.push_back("they");
  return random_model(seed, detail::dedupe(words));
}

}  // namespace tcav::testing
