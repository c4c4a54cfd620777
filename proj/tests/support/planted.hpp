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

// Planted-truth fixtures shared by the integration and acceptance suites.

#include <array>
#include <set>
#include <string>
#include <vector>

#include "tcav/tcav.hpp"

namespace tcav::testing {

// Pronounceable pseudo-adjectives, unique across all bins and disjoint from
// the stop-word list and the roster tokens.
inline std::array<WordSet, 5> pseudo_word_sets(std::size_t per_bin, std::uint64_t seed) {
  static const char* kOnsets[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p",
                                  "r", "s", "t", "v", "z", "br", "tr", "gl", "sk"};
  static const char* kVowels[] = {"a", "e", "i", "o", "u", "ai", "ou"};
  static const char* kCodas[] = {"", "n", "l", "r", "sh", "x", "m"};
  Rng rng(derive_seed(seed, "pseudo-words", 0));
  std::set<std::string> used(stop_words().begin(), stop_words().end());
  for (const auto& s : SubjectRoster::defaults().all()) {
    for (const auto& t : tokenize(s)) used.insert(t);
  }
  used.insert("they");
  std::array<WordSet, 5> sets;
  for (std::size_t b = 0; b < kAllBins.size(); ++b) {
    sets[b].bin = kAllBins[b];
    sets[b].source = "pseudo-words";
    while (sets[b].words.size() < per_bin) {
      std::string w;
      const std::size_t syllables = 2 + rng.index(2);
      for (std::size_t s = 0; s < syllables; ++s) {
        w += kOnsets[rng.index(std::size(kOnsets))];
        w += kVowels[rng.index(std::size(kVowels))];
      }
      w += kCodas[rng.index(std::size(kCodas))];
      if (used.insert(w).second) sets[b].words.push_back(w);
    }
  }
  return sets;
}

inline std::vector<std::string> placeholder_profane_words() {
  return {"frak", "smeg", "gorram", "feck", "drokk", "frell", "shazbot", "belgium", "zarking",
          "grud"};
}

}  // namespace tcav::testing
