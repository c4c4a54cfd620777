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

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "tcav/tcav.hpp"

namespace tcav::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kInputError = 2, kRuntimeError = 3 };

/// Effective settings of one invocation: the JSON config file with command
/// line flags applied on top.
struct RunConfig {
  Json raw = Json::object();
  std::filesystem::path out = "out";
  unsigned threads = 1;

  std::uint64_t seed() const {
    if (!raw.contains("seed")) throw InvalidArgument("a seed is required (--seed or \"seed\")");
    return raw["seed"].get<std::uint64_t>();
  }

  bool has(const char* key) const { return raw.contains(key) && !raw[key].is_null(); }

  const Json& section(const char* key) const {
    static const Json empty = Json::object();
    return has(key) ? raw[key] : empty;
  }

  std::filesystem::path path(const char* key) const {
    if (!has(key)) throw InvalidArgument(std::string("missing \"") + key + "\" in config");
    return raw[key].get<std::string>();
  }

  // Snapshot copied next to every output; thread count does not affect results.
  std::string snapshot() const {
    Json j = raw;
    j.erase("threads");
    return j.dump(2) + "\n";
  }
};

inline RunConfig load_run_config(const std::optional<std::string>& config_path) {
  RunConfig rc;
  if (config_path) rc.raw = read_json(*config_path);
  if (!rc.raw.is_object()) throw FormatError("config must be a JSON object");
  if (rc.has("out")) rc.out = rc.raw["out"].get<std::string>();
  if (rc.has("threads")) rc.threads = rc.raw["threads"].get<unsigned>();
  return rc;
}

// --- Config sections ------------------------------------------------------

inline SubjectRoster roster_from(const RunConfig& rc) {
  auto roster = SubjectRoster::defaults();
  const auto& j = rc.section("roster");
  if (j.contains("identity_terms")) {
    roster.identity_terms = j["identity_terms"].get<std::vector<std::string>>();
  }
  if (j.contains("baselines")) roster.baselines = j["baselines"].get<std::vector<std::string>>();
  return roster;
}

inline std::vector<std::string> profane_words_from(const RunConfig& rc) {
  if (!rc.has("profane_list")) return {};
  return text::read_lines(rc.path("profane_list"));
}

inline SynthSpec synth_spec_from(const RunConfig& rc) {
  const auto& j = rc.section("synth");
  SynthSpec spec;
  spec.identity_terms = j.value("identity_terms", roster_from(rc).identity_terms);
  spec.biased_terms = j.value("biased_terms", spec.biased_terms);
  spec.object_terms = j.value("object_terms", spec.object_terms);
  spec.sentiment_toxicity_strength =
      j.value("sentiment_toxicity_strength", spec.sentiment_toxicity_strength);
  spec.bias_strength = j.value("bias_strength", spec.bias_strength);
  spec.size = j.value("size", spec.size);
  spec.noise = j.value("noise", spec.noise);
  spec.filler_fraction = j.value("filler_fraction", spec.filler_fraction);
  spec.profane_rate = j.value("profane_rate", spec.profane_rate);
  spec.profanity_strength = j.value("profanity_strength", spec.profanity_strength);
  spec.baseline_rate = j.value("baseline_rate", spec.baseline_rate);
  if (j.contains("bin_toxicity")) {
    spec.bin_toxicity = j["bin_toxicity"].get<std::array<double, 5>>();
  }
  spec.profane_words = profane_words_from(rc);
  spec.seed = rc.seed();
  return spec;
}

inline TrainConfig train_config_from(const RunConfig& rc) {
  const auto& j = rc.section("train");
  TrainConfig cfg;
  cfg.dim = j.value("dim", cfg.dim);
  cfg.hidden = j.value("hidden", cfg.hidden);
  cfg.epochs = j.value("epochs", cfg.epochs);
  cfg.lr = j.value("lr", cfg.lr);
  if (j.contains("optimizer")) cfg.optimizer = optimizer_from_string(j["optimizer"].get<std::string>());
  cfg.seed = rc.seed();
  return cfg;
}

inline EngineConfig engine_config_from(const RunConfig& rc) {
  auto cfg = engine_config_from_json(rc.section("engine"));
  cfg.seed = rc.seed();
  cfg.threads = rc.threads;
  cfg.validate();
  return cfg;
}

inline std::vector<WordSet> select_word_sets(const RunConfig& rc) {
  const auto& j = rc.section("lexicon");
  if (!j.contains("path")) throw InvalidArgument("missing \"lexicon.path\" in config");
  std::optional<std::filesystem::path> freq;
  if (j.contains("frequencies")) freq = j["frequencies"].get<std::string>();
  const auto lexicon = parse_vad_lexicon(j["path"].get<std::string>(), freq);
  std::optional<std::vector<std::string>> allow;
  if (j.contains("allow_list")) allow = text::read_lines(j["allow_list"].get<std::string>());
  const std::size_t n = j.value("words_per_bin", std::size_t{100});
  std::vector<WordSet> sets;
  for (auto bin : kAllBins) sets.push_back(select_words(lexicon, bin, n, allow));
  return sets;
}

inline std::filesystem::path word_set_file(const std::filesystem::path& dir, SentimentBin bin) {
  return dir / (std::string(to_string(bin)) + ".json");
}

// Word sets come from a directory written by `lexicon`, or straight from the
// lexicon section.
inline std::vector<WordSet> word_sets_from(const RunConfig& rc) {
  if (!rc.has("word_sets")) return select_word_sets(rc);
  std::vector<WordSet> sets;
  for (auto bin : kAllBins) {
    auto ws = word_set_from_json(read_json(word_set_file(rc.path("word_sets"), bin)));
    if (ws.bin != bin) throw ConsistencyError("word set file for " + std::string(to_string(bin)) +
                                              " holds bin " + std::string(to_string(ws.bin)));
    sets.push_back(std::move(ws));
  }
  return sets;
}

inline LabeledCorpus corpus_from(const RunConfig& rc, std::span<const WordSet> sets) {
  if (rc.has("corpus")) return read_corpus(rc.path("corpus"));
  if (rc.has("synth")) return generate_synthetic_corpus(synth_spec_from(rc), sets);
  throw InvalidArgument("need \"corpus\" or \"synth\" in config");
}

inline std::vector<std::string> pool_from(const RunConfig& rc) {
  if (rc.has("pool")) return text::read_lines(rc.path("pool"));
  const std::size_t n = rc.raw.value("pool_size", std::size_t{3000});
  return generate_filler_corpus(n, derive_seed(rc.seed(), "pool-sentences", 0));
}

inline void write_train_log(const std::vector<EpochStats>& log, const std::filesystem::path& path) {
  std::string csv = "epoch,loss,accuracy\n";
  for (const auto& e : log) {
    csv += std::to_string(e.epoch) + "," + report::format_number("%.17g", e.loss) + "," +
           report::format_number("%.17g", e.accuracy) + "\n";
  }
  text::write_file(path, csv);
}

// --- Commands -------------------------------------------------------------

inline int cmd_lexicon(const RunConfig& rc) {
  rc.seed();
  for (const auto& ws : select_word_sets(rc)) {
    text::write_file(word_set_file(rc.out, ws.bin), to_json(ws).dump(2) + "\n");
    std::cout << to_string(ws.bin) << ": " << ws.words.size() << " words\n";
  }
  return kOk;
}

inline int cmd_synth(const RunConfig& rc) {
  const auto sets = word_sets_from(rc);
  const auto corpus = generate_synthetic_corpus(synth_spec_from(rc), sets);
  text::write_file(rc.out / "corpus.jsonl", corpus_to_jsonl(corpus));
  std::cout << "wrote " << corpus.size() << " sentences\n";
  return kOk;
}

inline int cmd_train(const RunConfig& rc) {
  const auto cfg = train_config_from(rc);
  const auto corpus = rc.has("corpus") ? read_corpus(rc.path("corpus"))
                                       : corpus_from(rc, word_sets_from(rc));
  const auto result = train(corpus, cfg);
  save_model(result.model, rc.out / "model.json");
  write_train_log(result.log, rc.out / "train_log.csv");
  std::printf("trained %zu epochs: loss %.6f, accuracy %.4f, model %s\n", cfg.epochs,
              result.log.back().loss, result.log.back().accuracy,
              model_fingerprint(result.model).c_str());
  return kOk;
}

inline ModelBundle model_from(const RunConfig& rc, std::span<const WordSet> sets) {
  const bool has_model = rc.has("model");
  const bool has_training = rc.has("train") && (rc.has("corpus") || rc.has("synth"));
  if (has_model == has_training) {
    throw InvalidArgument("give exactly one of \"model\" or \"train\" with \"corpus\"/\"synth\"");
  }
  if (has_model) return load_model(rc.path("model"));
  auto result = train(corpus_from(rc, sets), train_config_from(rc));
  save_model(result.model, rc.out / "model.json");
  write_train_log(result.log, rc.out / "train_log.csv");
  return std::move(result.model);
}

inline int cmd_audit(const RunConfig& rc) {
  const auto sets = word_sets_from(rc);
  const auto model = model_from(rc, sets);
  const auto cfg = engine_config_from(rc);
  const auto roster = roster_from(rc);
  const auto profane = profane_words_from(rc);
  const auto pool = pool_from(rc);
  const AuditSession session(model, pool, cfg);

  report::AuditReport rep;
  rep.grids.push_back(run_sentiment_audit(session, sets, profane));
  rep.grids.push_back(run_identity_audit(session, roster, sets));
  const auto baseline = rc.raw.value("baseline_subject", std::string(kDefaultBaselineSubject));
  if (rep.grids.back().has_subject(baseline)) rep.flags = pattern_check(rep.grids.back(), baseline);

  const auto concepts = sentiment_concepts(sets);
  for (const auto& c : concepts) {
    rep.probes.push_back(probability_increase(model, c, session.pool().x_texts, cfg.seed,
                                              Pairing::kSampledPerContext, cfg.threads));
  }
  const auto union_concept = merge_concepts(concepts.front(), concepts.back(),
                                            "They/VeryNegative+VeryPositive");
  const auto class_name = rc.raw.value("contrast_class", std::string("Toxicity"));
  rep.contrasts.push_back(coherence_contrast(model, concepts[1], union_concept,
                                             session.pool().random_concept,
                                             session.pool().x_texts, session.pool().x_texts,
                                             model.class_index(class_name), cfg));
  report::write_bundle(rep, rc.out);
  std::cout << "audit written to " << rc.out.string() << " ("
            << (rep.flags ? std::to_string(rep.flags->over_sensitive.size()) : std::string("no"))
            << " over-sensitive flags)\n";
  return kOk;
}

inline int cmd_gradcheck(const RunConfig& rc, double tolerance, double eps, std::size_t points) {
  const auto model = load_model(rc.path("model"));
  Rng rng(derive_seed(rc.seed(), "gradcheck", 0));
  double worst = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    Vector r(model.dim());
    for (double& v : r) v = rng.uniform(-1.0, 1.0);
    const std::size_t cls = i % model.classes.size();
    const auto analytic = head_gradient(model.head, r, cls);
    const auto numeric = finite_diff_gradient(model.head, r, cls, eps);
    worst = std::max(worst, relative_l2_error(analytic, numeric));
  }
  const bool pass = worst < tolerance;
  std::printf("max relative error %.3e over %zu points (tolerance %.1e): %s\n", worst, points,
              tolerance, pass ? "PASS" : "FAIL");
  return pass ? kOk : kCheckFailed;
}

// --- Entry point ----------------------------------------------------------

inline int run_cli(int argc, const char* const* argv) {
  CLI::App app{"TCAV sentiment and fairness audit"};
  app.require_subcommand(1);
  app.fallthrough();
  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> threads;
  app.add_option("--config", config_path, "JSON run config");
  app.add_option("--seed", seed, "master seed (required here or in the config)");
  app.add_option("--out", out, "output directory");
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

  auto* lexicon = app.add_subcommand("lexicon", "select the five sentiment word sets");
  std::optional<std::string> lexicon_path, freq_path, allow_path;
  std::optional<std::size_t> words_per_bin;
  lexicon->add_option("--lexicon", lexicon_path, "word<TAB>valence file");
  lexicon->add_option("--frequencies", freq_path, "word<TAB>pos<TAB>count file");
  lexicon->add_option("--allow-list", allow_path, "one word per line");
  lexicon->add_option("-n,--words-per-bin", words_per_bin, "words per sentiment bin");

  auto* synth = app.add_subcommand("synth", "generate a labeled synthetic corpus");
  std::optional<std::size_t> size;
  synth->add_option("--size", size, "number of sentences");

  auto* train_cmd = app.add_subcommand("train", "train the classifier");
  std::optional<std::string> corpus_path;
  std::optional<std::size_t> epochs;
  train_cmd->add_option("--corpus", corpus_path, "JSONL corpus");
  train_cmd->add_option("--epochs", epochs, "training epochs");

  auto* audit = app.add_subcommand("audit", "run every audit and write the report bundle");
  std::optional<std::string> model_path;
  std::vector<std::string> subjects;
  audit->add_option("--model", model_path, "trained model JSON");
  audit->add_option("--subjects", subjects, "identity audit subjects (replaces the roster)");

  auto* gradcheck = app.add_subcommand("gradcheck", "compare analytic and numeric gradients");
  double tolerance = 1e-4;
  double eps = 1e-3;
  std::size_t points = 100;
  gradcheck->add_option("--model", model_path, "trained model JSON");
  gradcheck->add_option("--tolerance", tolerance, "maximum relative L2 error");
  gradcheck->add_option("--eps", eps, "central difference step")->check(CLI::PositiveNumber);
  gradcheck->add_option("--points", points, "random points checked");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    auto rc = load_run_config(config_path);
    if (seed) rc.raw["seed"] = *seed;
    if (out) rc.out = *out;
    if (threads) rc.threads = *threads;
    rc.raw["out"] = rc.out.string();
    if (lexicon_path) rc.raw["lexicon"]["path"] = *lexicon_path;
    if (freq_path) rc.raw["lexicon"]["frequencies"] = *freq_path;
    if (allow_path) rc.raw["lexicon"]["allow_list"] = *allow_path;
    if (words_per_bin) rc.raw["lexicon"]["words_per_bin"] = *words_per_bin;
    if (size) rc.raw["synth"]["size"] = *size;
    if (corpus_path) rc.raw["corpus"] = *corpus_path;
    if (epochs) rc.raw["train"]["epochs"] = *epochs;
    if (model_path) {
      rc.raw["model"] = *model_path;
      rc.raw.erase("train");
    }
    if (!subjects.empty()) {
      rc.raw["roster"]["identity_terms"] = subjects;
      rc.raw["roster"]["baselines"] = Json::array();
    }
    rc.seed();

    std::filesystem::create_directories(rc.out);
    text::write_file(rc.out / "config.json", rc.snapshot());
    if (*lexicon) return cmd_lexicon(rc);
    if (*synth) return cmd_synth(rc);
    if (*train_cmd) return cmd_train(rc);
    if (*audit) return cmd_audit(rc);
    return cmd_gradcheck(rc, tolerance, eps, points);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.category() == ErrorCategory::kInput ? kInputError : kRuntimeError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: bad config: " << e.what() << "\n";
    return kInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
}

}  // namespace tcav::cli
