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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tcav/concepts.hpp"
#include "tcav/error.hpp"
#include "tcav/model.hpp"
#include "tcav/parallel.hpp"
#include "tcav/random.hpp"
#include "tcav/rep_store.hpp"
#include "tcav/stats.hpp"

namespace tcav {

enum class Correction { kNone, kBonferroni };

inline constexpr std::string_view to_string(Correction c) noexcept {
  return c == Correction::kBonferroni ? "bonferroni" : "none";
}

inline Correction correction_from_string(std::string_view name) {
  if (name == "bonferroni") return Correction::kBonferroni;
  if (name == "none") return Correction::kNone;
  throw InvalidArgument("unknown correction '" + std::string(name) + "'");
}

struct EngineConfig {
  std::size_t cav_count = 100;          // P
  std::size_t examples_per_cav = 50;    // N_v
  std::size_t random_input_count = 1000;
  std::size_t random_concept_size = 500;
  double alpha = 0.01;
  Correction correction = Correction::kBonferroni;
  std::uint64_t seed = 0;
  // Only affects wall time; results are identical for any value.
  unsigned threads = 1;

  void validate() const {
    if (cav_count < 2) throw InvalidArgument("need at least 2 CAVs per concept");
    if (examples_per_cav < 1) throw InvalidArgument("need at least 1 example per CAV");
    if (random_input_count < 1) throw InvalidArgument("need at least 1 random input");
    if (random_concept_size < examples_per_cav) {
      throw InvalidArgument("random concept must have at least examples_per_cav examples");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must be in (0, 1)");
  }
};

/// Concept activation vector: the plain (unnormalized) mean of a sampled
/// subset of concept representations.
struct Cav {
  Vector vector;
  std::string concept_id;
  std::vector<std::size_t> member_indices;
  std::uint64_t seed = 0;
};

struct TcavResult {
  std::string concept_id;
  std::string class_name;
  std::vector<double> scores;
  double mean = 0.0;
  double std = 0.0;  // population
  std::optional<double> p_value;
  bool significant = false;
};

struct Significance {
  double p_value = 1.0;
  bool significant = false;
};

inline Vector representation(const ModelBundle& model, std::string_view text) {
  return encode(model, text);
}

inline Vector representation(const RepStore& store, std::string_view text) {
  return store.at(text);
}

template <class Source>
std::vector<Vector> text_reps(std::span<const std::string> texts, const Source& source) {
  std::vector<Vector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(representation(source, t));
  return out;
}

template <class Source>
std::vector<Vector> concept_reps(const Concept& concept_, const Source& source) {
  return text_reps(std::span<const std::string>(concept_.examples), source);
}

inline Cav sample_cav(std::span<const Vector> reps, std::size_t n_v, std::uint64_t seed) {
  if (n_v == 0) throw InvalidArgument("a CAV needs at least one example");
  if (n_v > reps.size()) {
    throw InvalidArgument("cannot average " + std::to_string(n_v) + " of " +
                          std::to_string(reps.size()) + " concept examples");
  }
  const std::size_t d = reps.front().size();
  Rng rng(seed);
  Cav cav;
  cav.seed = seed;
  cav.member_indices = sample_without_replacement(reps.size(), n_v, rng);
  cav.vector.assign(d, 0.0);
  for (std::size_t idx : cav.member_indices) {
    if (reps[idx].size() != d) throw DimensionError("concept representations differ in size");
    for (std::size_t i = 0; i < d; ++i) cav.vector[i] += reps[idx][i];
  }
  for (double& v : cav.vector) v /= static_cast<double>(n_v);
  return cav;
}

/// P CAVs; CAV p is seeded from (cfg.seed, concept_id, p) alone.
inline std::vector<Cav> make_cavs(std::string_view concept_id, std::span<const Vector> reps,
                                  const EngineConfig& cfg) {
  cfg.validate();
  if (reps.size() < cfg.examples_per_cav) {
    throw InvalidArgument("concept '" + std::string(concept_id) + "' has " +
                          std::to_string(reps.size()) + " examples, fewer than N_v = " +
                          std::to_string(cfg.examples_per_cav));
  }
  std::vector<Cav> cavs(cfg.cav_count);
  parallel_for(cfg.cav_count, cfg.threads, [&](std::size_t p) {
    cavs[p] = sample_cav(reps, cfg.examples_per_cav,
                         derive_seed(cfg.seed, concept_id, p));
    cavs[p].concept_id = std::string(concept_id);
  });
  return cavs;
}

template <class Source>
std::vector<Cav> make_cavs(const Concept& concept_, const Source& source,
                           const EngineConfig& cfg) {
  const auto reps = concept_reps(concept_, source);
  return make_cavs(concept_.id, reps, cfg);
}

/// Directional derivative of the class logit at x_rep along the CAV.
template <class Head = HeadParams>
double sensitivity(const Head& head, std::span<const double> x_rep, const Cav& cav,
                   std::size_t class_index) {
  if (cav.vector.size() != head.input_dim()) {
    throw DimensionError("CAV dimension does not match the head");
  }
  return dot(head_gradient(head, x_rep, class_index), cav.vector);
}

/// Fraction of inputs with strictly positive sensitivity.
template <class Head = HeadParams>
double tcav_score(const Head& head, std::span<const Vector> x_reps, const Cav& cav,
                  std::size_t class_index) {
  if (x_reps.empty()) throw InvalidArgument("TCAV score needs at least one input");
  std::size_t positive = 0;
  for (const auto& x : x_reps) {
    if (sensitivity(head, x, cav, class_index) > 0.0) ++positive;
  }
  return static_cast<double>(positive) / static_cast<double>(x_reps.size());
}

/// Class-logit gradients at every probe input, computed once and reused for
/// every CAV. Entries are exactly head_gradient(head, x, class).
class GradientTable {
 public:
  template <class Head = HeadParams>
  GradientTable(const Head& head, std::span<const Vector> x_reps, unsigned threads = 1)
      : inputs_(x_reps.size()), classes_(head.num_classes()), dim_(head.input_dim()) {
    if (x_reps.empty()) throw InvalidArgument("TCAV needs at least one probe input");
    grads_.resize(classes_ * inputs_ * dim_);
    parallel_for(inputs_, threads, [&](std::size_t x) {
      for (std::size_t c = 0; c < classes_; ++c) {
        const Vector g = head_gradient(head, x_reps[x], c);
        std::copy(g.begin(), g.end(), grads_.begin() + offset(c, x));
      }
    });
  }

  std::size_t inputs() const noexcept { return inputs_; }
  std::size_t classes() const noexcept { return classes_; }
  std::size_t dim() const noexcept { return dim_; }

  std::span<const double> at(std::size_t class_index, std::size_t x) const {
    return {grads_.data() + offset(class_index, x), dim_};
  }

  double score(const Cav& cav, std::size_t class_index) const {
    if (cav.vector.size() != dim_) throw DimensionError("CAV dimension does not match the head");
    if (class_index >= classes_) throw DimensionError("class index out of range");
    std::size_t positive = 0;
    for (std::size_t x = 0; x < inputs_; ++x) {
      if (dot(at(class_index, x), cav.vector) > 0.0) ++positive;
    }
    return static_cast<double>(positive) / static_cast<double>(inputs_);
  }

 private:
  std::size_t offset(std::size_t c, std::size_t x) const { return (c * inputs_ + x) * dim_; }

  std::size_t inputs_;
  std::size_t classes_;
  std::size_t dim_;
  std::vector<double> grads_;
};

inline void summarize(TcavResult& result) {
  result.mean = stats::mean(result.scores);
  result.std = stats::population_std(result.scores);
}

/// Score distribution of a concept's CAVs for one class; p-value left unset.
inline TcavResult tcav_distribution(std::string_view concept_id, std::span<const Cav> cavs,
                                    const GradientTable& table, std::size_t class_index,
                                    std::string_view class_name) {
  if (cavs.empty()) throw InvalidArgument("no CAVs for concept '" + std::string(concept_id) + "'");
  TcavResult r;
  r.concept_id = std::string(concept_id);
  r.class_name = std::string(class_name);
  r.scores.reserve(cavs.size());
  for (const auto& cav : cavs) r.scores.push_back(table.score(cav, class_index));
  summarize(r);
  return r;
}

inline TcavResult tcav_distribution(const Concept& concept_, const ModelBundle& model,
                                    std::span<const std::string> x_texts,
                                    std::size_t class_index, const EngineConfig& cfg) {
  const auto cavs = make_cavs(concept_, model, cfg);
  const auto x_reps = text_reps(x_texts, model);
  const GradientTable table(model.head, x_reps, cfg.threads);
  return tcav_distribution(concept_.id, cavs, table, class_index, model.classes.at(class_index));
}

/// Two-sided Welch test against the random-concept scores; significant when
/// p * correction_factor < alpha.
inline Significance significance(std::span<const double> concept_scores,
                                 std::span<const double> random_scores, double alpha,
                                 std::size_t correction_factor = 1) {
  if (concept_scores.size() < 2 || random_scores.size() < 2) {
    throw InvalidArgument("significance test needs at least two scores per side");
  }
  if (correction_factor == 0) throw InvalidArgument("correction factor must be at least 1");
  Significance s;
  s.p_value = stats::welch_t_test(concept_scores, random_scores).p_value;
  s.significant = s.p_value * static_cast<double>(correction_factor) < alpha;
  return s;
}

inline void apply_significance(TcavResult& result, std::span<const double> random_scores,
                               double alpha, std::size_t correction_factor) {
  const auto s = significance(result.scores, random_scores, alpha, correction_factor);
  result.p_value = s.p_value;
  result.significant = s.significant;
}

}  // namespace tcav
