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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tcav/concepts.hpp"
#include "tcav/engine.hpp"
#include "tcav/error.hpp"
#include "tcav/model.hpp"
#include "tcav/parallel.hpp"
#include "tcav/random.hpp"

namespace tcav {

enum class Pairing {
  kSampledPerContext,  // one seeded concept example per context
  kCrossProduct        // every (context, example) pair
};

/// Mean change in predicted probability when a concept example is appended
/// to a context sentence.
struct ProbeResult {
  std::string concept_id;
  std::vector<std::string> classes;
  std::vector<double> deltas;  // per class, in [-1, 1]
  std::size_t sample_count = 0;
};

inline std::string append_sentence(std::string_view context, std::string_view example) {
  std::string out(context);
  out += ' ';
  out += example;
  return out;
}

inline ProbeResult probability_increase(const ModelBundle& model, const Concept& concept_,
                                        std::span<const std::string> contexts,
                                        std::uint64_t seed,
                                        Pairing pairing = Pairing::kSampledPerContext,
                                        unsigned threads = 1) {
  if (contexts.empty()) throw InvalidArgument("probability increase needs contexts");
  if (concept_.examples.empty()) {
    throw EmptySetError("concept '" + concept_.id + "' has no examples");
  }

  // (context, example) pairs are fixed before any parallel evaluation.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (pairing == Pairing::kSampledPerContext) {
    Rng rng(derive_seed(seed, "probe/" + concept_.id, 0));
    pairs.reserve(contexts.size());
    for (std::size_t i = 0; i < contexts.size(); ++i) {
      pairs.emplace_back(i, rng.index(concept_.examples.size()));
    }
  } else {
    pairs.reserve(contexts.size() * concept_.examples.size());
    for (std::size_t i = 0; i < contexts.size(); ++i) {
      for (std::size_t j = 0; j < concept_.examples.size(); ++j) pairs.emplace_back(i, j);
    }
  }

  const std::size_t C = model.classes.size();
  std::vector<Vector> base(contexts.size());
  parallel_for(contexts.size(), threads,
               [&](std::size_t i) { base[i] = predict_proba(model, contexts[i]); });

  std::vector<Vector> deltas(pairs.size());
  parallel_for(pairs.size(), threads, [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    Vector p = predict_proba(model, append_sentence(contexts[i], concept_.examples[j]));
    for (std::size_t c = 0; c < C; ++c) p[c] -= base[i][c];
    deltas[k] = std::move(p);
  });

  ProbeResult out;
  out.concept_id = concept_.id;
  out.classes = model.classes;
  out.deltas.assign(C, 0.0);
  for (const auto& d : deltas) {
    for (std::size_t c = 0; c < C; ++c) out.deltas[c] += d[c];
  }
  for (double& v : out.deltas) v /= static_cast<double>(pairs.size());
  out.sample_count = pairs.size();
  return out;
}

struct ContrastSide {
  std::string concept_id;
  double prob_delta = 0.0;
  double tcav_mean = 0.0;
  double tcav_std = 0.0;
  double p_value = 1.0;
  bool significant = false;
};

/// Probability increase vs TCAV for a coherent concept and a non-coherent
/// one, evaluated against the same model, probe inputs and random baseline.
struct ContrastReport {
  std::string class_name;
  ContrastSide coherent;
  ContrastSide non_coherent;
};

inline ContrastReport coherence_contrast(const ModelBundle& model, const Concept& coherent,
                                         const Concept& non_coherent,
                                         const Concept& random_control,
                                         std::span<const std::string> contexts,
                                         std::span<const std::string> x_texts,
                                         std::size_t class_index, const EngineConfig& cfg) {
  cfg.validate();
  const auto x_reps = text_reps(x_texts, model);
  const GradientTable table(model.head, x_reps, cfg.threads);
  const std::string& class_name = model.classes.at(class_index);

  const auto random_cavs = make_cavs(random_control, model, cfg);
  const auto random_scores =
      tcav_distribution(random_control.id, random_cavs, table, class_index, class_name).scores;

  auto side = [&](const Concept& concept_) {
    const auto cavs = make_cavs(concept_, model, cfg);
    auto dist = tcav_distribution(concept_.id, cavs, table, class_index, class_name);
    // Two concepts are compared against the baseline.
    apply_significance(dist, random_scores, cfg.alpha,
                       cfg.correction == Correction::kBonferroni ? 2 : 1);
    ContrastSide s;
    s.concept_id = concept_.id;
    s.prob_delta =
        probability_increase(model, concept_, contexts, cfg.seed, Pairing::kSampledPerContext,
                             cfg.threads)
            .deltas[class_index];
    s.tcav_mean = dist.mean;
    s.tcav_std = dist.std;
    s.p_value = *dist.p_value;
    s.significant = dist.significant;
    return s;
  };

  ContrastReport report;
  report.class_name = class_name;
  report.coherent = side(coherent);
  report.non_coherent = side(non_coherent);
  return report;
}

}  // namespace tcav
