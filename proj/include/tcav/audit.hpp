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
#include <cstdio>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tcav/concepts.hpp"
#include "tcav/engine.hpp"
#include "tcav/error.hpp"
#include "tcav/lexicon.hpp"
#include "tcav/model.hpp"
#include "tcav/parallel.hpp"
#include "tcav/probes.hpp"
#include "tcav/random.hpp"

namespace tcav {

inline constexpr std::string_view kExplicitColumn = "Explicit";
inline constexpr std::string_view kRandomColumn = "Random";
inline constexpr std::string_view kDefaultBaselineSubject = "These people";

struct AuditCell {
  std::string subject;
  std::string class_name;
  std::string column;  // a SentimentBin name or a control column
  TcavResult result;
};

/// TCAV results for every (subject, class, column) triple of one audit, all
/// tested against the same per-class random baseline.
struct AuditGrid {
  std::string name;
  std::vector<std::string> subjects;
  std::vector<std::string> classes;
  std::vector<std::string> columns;
  std::vector<AuditCell> cells;  // subject-major, then class, then column
  EngineConfig config;
  std::size_t correction_factor = 1;
  std::string model_fingerprint;
  std::vector<TcavResult> baselines;  // random concept, one per class
  std::string baseline_fingerprint;

  std::size_t index_of(std::size_t s, std::size_t c, std::size_t col) const {
    return (s * classes.size() + c) * columns.size() + col;
  }

  const AuditCell& cell(std::string_view subject, std::string_view class_name,
                        std::string_view column) const {
    for (const auto& cell : cells) {
      if (cell.subject == subject && cell.class_name == class_name && cell.column == column) {
        return cell;
      }
    }
    throw LookupError("grid '" + name + "' has no cell (" + std::string(subject) + ", " +
                      std::string(class_name) + ", " + std::string(column) + ")");
  }

  bool has_subject(std::string_view subject) const {
    return std::find(subjects.begin(), subjects.end(), subject) != subjects.end();
  }
};

/// Probe inputs X and the random control concept, carved out of one sentence
/// pool so that the two never share a sentence.
struct ProbePool {
  std::vector<std::string> x_texts;
  Concept random_concept;
};

inline ProbePool split_pool(std::span<const std::string> pool, const EngineConfig& cfg) {
  cfg.validate();
  auto unique = detail::dedupe(pool);
  Rng rng(derive_seed(cfg.seed, "pool", 0));
  shuffle(unique, rng);
  if (unique.size() < cfg.random_input_count + cfg.examples_per_cav) {
    throw EmptySetError("sentence pool has " + std::to_string(unique.size()) +
                        " distinct sentences; need at least " +
                        std::to_string(cfg.random_input_count + cfg.examples_per_cav));
  }
  ProbePool out;
  out.x_texts.assign(unique.begin(),
                     unique.begin() + static_cast<std::ptrdiff_t>(cfg.random_input_count));
  const std::span<const std::string> rest(unique.data() + cfg.random_input_count,
                                          unique.size() - cfg.random_input_count);
  const std::size_t n = std::min(rest.size(), cfg.random_concept_size);
  out.random_concept = build_control_random(rest, n, derive_seed(cfg.seed, "random-concept", 0));
  return out;
}

/// Everything shared by the cells of one audit: probe-input gradients and
/// the random baseline distribution of every class.
class AuditSession {
 public:
  AuditSession(const ModelBundle& model, std::span<const std::string> pool,
               const EngineConfig& cfg)
      : model_(&model), cfg_(cfg), pool_(split_pool(pool, cfg)),
        x_reps_(text_reps(std::span<const std::string>(pool_.x_texts), model)),
        table_(model.head, x_reps_, cfg.threads) {
    baselines_ = evaluate(pool_.random_concept, cfg.threads);
    for (auto& b : baselines_) {
      b.p_value = 1.0;
      b.significant = false;
    }
    std::uint64_t h = fnv1a(pool_.random_concept.id);
    for (const auto& x : pool_.x_texts) h = fnv1a(x + '\n', h);
    for (const auto& e : pool_.random_concept.examples) h = fnv1a(e + '\n', h);
    for (const auto& b : baselines_) {
      for (double s : b.scores) h = fnv1a(std::to_string(s) + ',', h);
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    baseline_fingerprint_ = buf;
  }

  const ModelBundle& model() const { return *model_; }
  const EngineConfig& config() const { return cfg_; }
  const ProbePool& pool() const { return pool_; }
  const GradientTable& gradients() const { return table_; }
  const std::vector<TcavResult>& baselines() const { return baselines_; }
  const std::string& baseline_fingerprint() const { return baseline_fingerprint_; }

  /// Score distributions of `concept` for every class (no significance).
  std::vector<TcavResult> evaluate(const Concept& concept_, unsigned threads = 1) const {
    EngineConfig cfg = cfg_;
    cfg.threads = threads;
    // The profane list is user supplied and may be shorter than N_v.
    if (concept_.kind == ConceptKind::kControlProfane) {
      cfg.examples_per_cav = std::min(cfg.examples_per_cav, concept_.size());
    }
    const auto cavs = make_cavs(concept_, *model_, cfg);
    std::vector<TcavResult> out;
    for (std::size_t c = 0; c < model_->classes.size(); ++c) {
      out.push_back(tcav_distribution(concept_.id, cavs, table_, c, model_->classes[c]));
    }
    return out;
  }

  /// evaluate() plus the Welch test against each class's random baseline.
  std::vector<TcavResult> evaluate_with_significance(const Concept& concept_,
                                                     std::size_t correction_factor,
                                                     unsigned threads = 1) const {
    auto results = evaluate(concept_, threads);
    for (std::size_t c = 0; c < results.size(); ++c) {
      apply_significance(results[c], baselines_[c].scores, cfg_.alpha, correction_factor);
    }
    return results;
  }

 private:
  const ModelBundle* model_;
  EngineConfig cfg_;
  ProbePool pool_;
  std::vector<Vector> x_reps_;
  GradientTable table_;
  std::vector<TcavResult> baselines_;
  std::string baseline_fingerprint_;
};

namespace detail {

struct GridConcept {
  std::size_t subject_index;
  std::size_t column_index;
  Concept concept_;
};

inline AuditGrid run_grid(const AuditSession& session, std::string name,
                          std::vector<std::string> subjects,
                          std::vector<std::string> columns,
                          const std::vector<GridConcept>& concepts) {
  const auto& model = session.model();
  const auto& cfg = session.config();

  AuditGrid grid;
  grid.name = std::move(name);
  grid.subjects = std::move(subjects);
  grid.classes = model.classes;
  grid.columns = std::move(columns);
  grid.config = cfg;
  grid.correction_factor =
      cfg.correction == Correction::kBonferroni ? grid.columns.size() * grid.subjects.size() : 1;
  grid.model_fingerprint = model_fingerprint(model);
  grid.baselines = session.baselines();
  grid.baseline_fingerprint = session.baseline_fingerprint();
  grid.cells.resize(grid.subjects.size() * grid.classes.size() * grid.columns.size());

  // Random-control columns reuse the baseline itself.
  std::vector<std::vector<TcavResult>> results(concepts.size());
  parallel_for(concepts.size(), cfg.threads, [&](std::size_t k) {
    const auto& gc = concepts[k];
    if (gc.concept_.kind == ConceptKind::kControlRandom) {
      results[k] = session.baselines();
    } else {
      results[k] = session.evaluate_with_significance(gc.concept_, grid.correction_factor);
    }
  });

  std::vector<bool> filled(grid.cells.size(), false);
  for (std::size_t k = 0; k < concepts.size(); ++k) {
    const auto& gc = concepts[k];
    for (std::size_t c = 0; c < grid.classes.size(); ++c) {
      const std::size_t idx = grid.index_of(gc.subject_index, c, gc.column_index);
      auto& cell = grid.cells[idx];
      cell.subject = grid.subjects[gc.subject_index];
      cell.class_name = grid.classes[c];
      cell.column = grid.columns[gc.column_index];
      cell.result = results[k][c];
      filled[idx] = true;
    }
  }
  if (std::find(filled.begin(), filled.end(), false) != filled.end()) {
    throw ConsistencyError("audit grid '" + grid.name + "' is incomplete");
  }
  return grid;
}

inline const WordSet& word_set_for(std::span<const WordSet> word_sets, SentimentBin bin) {
  for (const auto& ws : word_sets) {
    if (ws.bin == bin) return ws;
  }
  throw EmptySetError("no word set for bin " + std::string(to_string(bin)));
}

}  // namespace detail

/// Generic-subject audit: five sentiment levels plus the explicit-offence and
/// random controls for every class. The explicit column is omitted when no
/// profane words are given.
inline AuditGrid run_sentiment_audit(const AuditSession& session,
                                     std::span<const WordSet> word_sets,
                                     std::span<const std::string> profane_words) {
  std::vector<std::string> columns;
  std::vector<detail::GridConcept> concepts;
  for (auto bin : kAllBins) {
    concepts.push_back({0, columns.size(),
                        build_sentiment_concept(bin, detail::word_set_for(word_sets, bin),
                                                kGenericSubject)});
    columns.emplace_back(to_string(bin));
  }
  if (!profane_words.empty()) {
    concepts.push_back({0, columns.size(), build_control_profane(profane_words)});
    columns.emplace_back(kExplicitColumn);
  }
  concepts.push_back({0, columns.size(), session.pool().random_concept});
  columns.emplace_back(kRandomColumn);
  return detail::run_grid(session, "sentiment", {std::string(kGenericSubject)},
                          std::move(columns), concepts);
}

inline AuditGrid run_sentiment_audit(const ModelBundle& model,
                                     std::span<const WordSet> word_sets,
                                     std::span<const std::string> profane_words,
                                     std::span<const std::string> pool,
                                     const EngineConfig& cfg) {
  const AuditSession session(model, pool, cfg);
  return run_sentiment_audit(session, word_sets, profane_words);
}

/// Subject x class x sentiment-level grid over the roster.
inline AuditGrid run_identity_audit(const AuditSession& session, const SubjectRoster& roster,
                                    std::span<const WordSet> word_sets) {
  roster.validate();
  std::vector<std::string> columns;
  for (auto bin : kAllBins) columns.emplace_back(to_string(bin));
  const auto subjects = roster.all();
  std::vector<detail::GridConcept> concepts;
  for (std::size_t s = 0; s < subjects.size(); ++s) {
    for (std::size_t b = 0; b < kAllBins.size(); ++b) {
      concepts.push_back({s, b,
                          build_sentiment_concept(
                              kAllBins[b], detail::word_set_for(word_sets, kAllBins[b]),
                              subjects[s])});
    }
  }
  return detail::run_grid(session, "identity", subjects, std::move(columns), concepts);
}

inline AuditGrid run_identity_audit(const ModelBundle& model, const SubjectRoster& roster,
                                    std::span<const WordSet> word_sets,
                                    std::span<const std::string> pool,
                                    const EngineConfig& cfg) {
  const AuditSession session(model, pool, cfg);
  return run_identity_audit(session, roster, word_sets);
}

struct FlaggedCell {
  std::string subject;
  std::string class_name;
  SentimentBin bin;

  bool operator==(const FlaggedCell&) const = default;
};

/// Departures from the expected pattern (sensitive to negative sentiment,
/// insensitive to neutral and positive sentiment).
struct FairnessFlags {
  std::string baseline_subject;
  // Significant Neutral/Positive/VeryPositive cells of non-baseline subjects.
  std::vector<FlaggedCell> over_sensitive;
  // Non-significant Negative/VeryNegative cells where the baseline subject's
  // cell is significant.
  std::vector<FlaggedCell> under_sensitive;

  bool empty() const noexcept { return over_sensitive.empty() && under_sensitive.empty(); }
};

inline FairnessFlags pattern_check(const AuditGrid& grid,
                                   std::string_view baseline_subject = kDefaultBaselineSubject) {
  if (!grid.has_subject(baseline_subject)) {
    throw LookupError("baseline subject '" + std::string(baseline_subject) +
                      "' is not in grid '" + grid.name + "'");
  }
  FairnessFlags flags;
  flags.baseline_subject = std::string(baseline_subject);
  for (const auto& subject : grid.subjects) {
    if (subject == baseline_subject) continue;
    for (const auto& class_name : grid.classes) {
      for (auto bin : kAllBins) {
        const std::string column(to_string(bin));
        if (std::find(grid.columns.begin(), grid.columns.end(), column) == grid.columns.end()) {
          continue;
        }
        const bool significant = grid.cell(subject, class_name, column).result.significant;
        if (!is_negative(bin)) {
          if (significant) flags.over_sensitive.push_back({subject, class_name, bin});
        } else if (!significant &&
                   grid.cell(baseline_subject, class_name, column).result.significant) {
          flags.under_sensitive.push_back({subject, class_name, bin});
        }
      }
    }
  }
  return flags;
}

/// Sentiment-level concepts for the generic subject, keyed by bin order.
inline std::vector<Concept> sentiment_concepts(std::span<const WordSet> word_sets,
                                               std::string_view subject = kGenericSubject) {
  std::vector<Concept> out;
  for (auto bin : kAllBins) {
    out.push_back(build_sentiment_concept(bin, detail::word_set_for(word_sets, bin), subject));
  }
  return out;
}

}  // namespace tcav
