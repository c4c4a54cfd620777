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
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tcav/error.hpp"
#include "tcav/model.hpp"
#include "tcav/random.hpp"
#include "tcav/synth.hpp"

namespace tcav {

enum class Optimizer { kGradientDescent, kAdam };

inline constexpr std::string_view to_string(Optimizer o) noexcept {
  return o == Optimizer::kAdam ? "adam" : "gd";
}

inline Optimizer optimizer_from_string(std::string_view name) {
  if (name == "adam") return Optimizer::kAdam;
  if (name == "gd") return Optimizer::kGradientDescent;
  throw InvalidArgument("unknown optimizer '" + std::string(name) + "' (expected gd or adam)");
}

struct TrainConfig {
  std::size_t dim = 64;
  std::size_t hidden = 32;
  std::size_t epochs = 300;
  double lr = 0.05;
  std::uint64_t seed = 0;
  Optimizer optimizer = Optimizer::kAdam;

  void validate() const {
    if (dim < 2) throw InvalidArgument("representation dimension must be at least 2");
    if (hidden < 1) throw InvalidArgument("hidden width must be at least 1");
    if (!(lr >= 0.0) || !std::isfinite(lr)) throw InvalidArgument("learning rate must be >= 0");
  }
};

struct EpochStats {
  std::size_t epoch = 0;  // 0 = before the first update
  double loss = 0.0;
  double accuracy = 0.0;
};

struct TrainResult {
  ModelBundle model;
  std::vector<EpochStats> log;  // epochs + 1 entries
};

namespace detail {

struct EncodedCorpus {
  std::vector<std::vector<std::size_t>> token_ids;
  std::vector<std::vector<std::uint8_t>> labels;
};

inline EncodedCorpus encode_corpus(const ModelBundle& model, const LabeledCorpus& corpus) {
  EncodedCorpus enc;
  enc.token_ids.reserve(corpus.size());
  for (const auto& ex : corpus.examples) {
    std::vector<std::size_t> ids;
    for (const auto& t : tokenize(ex.text)) ids.push_back(model.token_index(t));
    enc.token_ids.push_back(std::move(ids));
    enc.labels.push_back(ex.labels);
  }
  return enc;
}

// log(1 + exp(z)) without overflow.
inline double softplus(double z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

// Parameters laid out as one flat list of blocks for the optimizer.
inline std::vector<std::vector<double>*> parameter_blocks(ModelBundle& m) {
  return {&m.embeddings.data, &m.head.w1.data, &m.head.b1, &m.head.w2.data, &m.head.b2};
}

// Forward pass over the corpus. When `grads` is non-null, accumulates the
// gradient of the mean per-class binary cross-entropy into it.
inline EpochStats forward_backward(const ModelBundle& m, const EncodedCorpus& enc,
                                   std::vector<std::vector<double>>* grads) {
  const std::size_t d = m.dim();
  const std::size_t h = m.head.hidden_dim();
  const std::size_t C = m.head.num_classes();
  const std::size_t N = enc.token_ids.size();
  const double scale = 1.0 / static_cast<double>(N * C);

  Vector r(d), pre(h), a(h), dz(C), dpre(h), dr(d);
  double loss = 0.0;
  std::size_t correct = 0;

  for (std::size_t n = 0; n < N; ++n) {
    const auto& ids = enc.token_ids[n];
    std::fill(r.begin(), r.end(), 0.0);
    for (std::size_t id : ids) {
      const auto row = m.embeddings.row(id);
      for (std::size_t i = 0; i < d; ++i) r[i] += row[i];
    }
    const double inv_len = ids.empty() ? 0.0 : 1.0 / static_cast<double>(ids.size());
    for (double& v : r) v *= inv_len;

    for (std::size_t j = 0; j < h; ++j) {
      pre[j] = dot(m.head.w1.row(j), r) + m.head.b1[j];
      a[j] = std::tanh(pre[j]);
    }
    for (std::size_t c = 0; c < C; ++c) {
      const double z = dot(m.head.w2.row(c), a) + m.head.b2[c];
      const double y = enc.labels[n][c];
      loss += softplus(z) - y * z;
      const double p = sigmoid(z);
      if ((p >= 0.5) == (y > 0.5)) ++correct;
      dz[c] = (p - y) * scale;
    }
    if (grads == nullptr) continue;

    auto& g_emb = (*grads)[0];
    auto& g_w1 = (*grads)[1];
    auto& g_b1 = (*grads)[2];
    auto& g_w2 = (*grads)[3];
    auto& g_b2 = (*grads)[4];

    std::fill(dpre.begin(), dpre.end(), 0.0);
    for (std::size_t c = 0; c < C; ++c) {
      g_b2[c] += dz[c];
      const auto w2_row = m.head.w2.row(c);
      for (std::size_t j = 0; j < h; ++j) {
        g_w2[c * h + j] += dz[c] * a[j];
        dpre[j] += dz[c] * w2_row[j];
      }
    }
    std::fill(dr.begin(), dr.end(), 0.0);
    for (std::size_t j = 0; j < h; ++j) {
      dpre[j] *= 1.0 - a[j] * a[j];
      g_b1[j] += dpre[j];
      const auto w1_row = m.head.w1.row(j);
      for (std::size_t i = 0; i < d; ++i) {
        g_w1[j * d + i] += dpre[j] * r[i];
        dr[i] += dpre[j] * w1_row[i];
      }
    }
    for (std::size_t id : ids) {
      for (std::size_t i = 0; i < d; ++i) g_emb[id * d + i] += dr[i] * inv_len;
    }
  }

  EpochStats stats;
  stats.loss = loss * scale;
  stats.accuracy = static_cast<double>(correct) / static_cast<double>(N * C);
  return stats;
}

}  // namespace detail

inline double corpus_loss(const ModelBundle& model, const LabeledCorpus& corpus) {
  return detail::forward_backward(model, detail::encode_corpus(model, corpus), nullptr).loss;
}

// Fraction of (example, class) decisions at threshold 0.5 matching the labels.
inline double train_accuracy(const ModelBundle& model, const LabeledCorpus& corpus) {
  return detail::forward_backward(model, detail::encode_corpus(model, corpus), nullptr)
      .accuracy;
}

/// Fits a fresh model on `corpus`. Vocabulary is the sorted set of corpus
/// tokens after the UNK token; all parameters start from a seeded
/// uniform(-0.1, 0.1). Identical inputs give bitwise-identical models.
inline TrainResult train(const LabeledCorpus& corpus, const TrainConfig& config) {
  config.validate();
  if (corpus.examples.empty()) throw EmptySetError("training corpus is empty");
  for (const auto& ex : corpus.examples) {
    if (ex.labels.size() != corpus.classes.size()) {
      throw ConsistencyError("example '" + ex.text + "' has " +
                             std::to_string(ex.labels.size()) + " labels, expected " +
                             std::to_string(corpus.classes.size()));
    }
    for (auto y : ex.labels) {
      if (y > 1) throw ConsistencyError("labels must be 0 or 1");
    }
  }

  std::set<std::string> vocab;
  for (const auto& ex : corpus.examples) {
    for (auto& t : tokenize(ex.text)) vocab.insert(std::move(t));
  }
  vocab.erase(std::string(kUnknownToken));
  std::vector<std::string> tokens = {std::string(kUnknownToken)};
  tokens.insert(tokens.end(), vocab.begin(), vocab.end());

  TrainResult result;
  ModelBundle& m = result.model;
  m.classes = corpus.classes;
  m.set_vocabulary(std::move(tokens));
  const std::size_t C = m.classes.size();
  m.embeddings = Matrix(m.tokens().size(), config.dim);
  m.head.w1 = Matrix(config.hidden, config.dim);
  m.head.b1.assign(config.hidden, 0.0);
  m.head.w2 = Matrix(C, config.hidden);
  m.head.b2.assign(C, 0.0);

  Rng rng(derive_seed(config.seed, "train/init", 0));
  auto blocks = detail::parameter_blocks(m);
  for (auto* block : blocks) {
    for (double& v : *block) v = rng.uniform(-0.1, 0.1);
  }

  const auto enc = detail::encode_corpus(m, corpus);
  std::vector<std::vector<double>> grads(blocks.size());
  std::vector<std::vector<double>> first_moment(blocks.size());
  std::vector<std::vector<double>> second_moment(blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    first_moment[b].assign(blocks[b]->size(), 0.0);
    second_moment[b].assign(blocks[b]->size(), 0.0);
  }
  constexpr double kBeta1 = 0.9;
  constexpr double kBeta2 = 0.999;
  constexpr double kAdamEps = 1e-8;

  for (std::size_t epoch = 0; epoch <= config.epochs; ++epoch) {
    const bool update = epoch < config.epochs;
    for (std::size_t b = 0; b < blocks.size(); ++b) grads[b].assign(blocks[b]->size(), 0.0);
    EpochStats stats = detail::forward_backward(m, enc, update ? &grads : nullptr);
    stats.epoch = epoch;
    if (!std::isfinite(stats.loss)) throw TrainingDiverged(epoch);
    result.log.push_back(stats);
    if (!update || config.lr == 0.0) continue;

    if (config.optimizer == Optimizer::kGradientDescent) {
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        auto& p = *blocks[b];
        for (std::size_t i = 0; i < p.size(); ++i) p[i] -= config.lr * grads[b][i];
      }
    } else {
      const double t = static_cast<double>(epoch + 1);
      const double c1 = 1.0 - std::pow(kBeta1, t);
      const double c2 = 1.0 - std::pow(kBeta2, t);
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        auto& p = *blocks[b];
        auto& m1 = first_moment[b];
        auto& m2 = second_moment[b];
        for (std::size_t i = 0; i < p.size(); ++i) {
          const double g = grads[b][i];
          m1[i] = kBeta1 * m1[i] + (1.0 - kBeta1) * g;
          m2[i] = kBeta2 * m2[i] + (1.0 - kBeta2) * g * g;
          p[i] -= config.lr * (m1[i] / c1) / (std::sqrt(m2[i] / c2) + kAdamEps);
        }
      }
    }
    for (auto* block : blocks) {
      if (!all_finite(*block)) throw TrainingDiverged(epoch);
    }
  }
  return result;
}

}  // namespace tcav
