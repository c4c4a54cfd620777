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
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tcav/error.hpp"
#include "tcav/random.hpp"

namespace tcav {

using Vector = std::vector<double>;

inline const std::vector<std::string>& default_classes() {
  // Severe Toxicity is left out: too few positive training examples.
  static const std::vector<std::string> kClasses = {
      "Toxicity", "Obscene", "IdentityAttack", "Insult", "Threat", "SexualExplicit"};
  return kClasses;
}

inline constexpr std::string_view kUnknownToken = "<unk>";

/// Lowercases, drops punctuation (apostrophes survive only between two word
/// characters) and splits on whitespace.
inline std::vector<std::string> tokenize(std::string_view input) {
  auto is_word = [](unsigned char c) { return std::isalnum(c) || c >= 0x80; };
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (std::size_t i = 0; i < input.size(); ++i) {
    const auto c = static_cast<unsigned char>(input[i]);
    if (std::isspace(c)) {
      flush();
    } else if (is_word(c)) {
      current += static_cast<char>(std::tolower(c));
    } else if (c == '\'' && !current.empty() && i + 1 < input.size() &&
               is_word(static_cast<unsigned char>(input[i + 1]))) {
      current += '\'';
    }
  }
  flush();
  return tokens;
}

struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // row-major

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }

  bool operator==(const Matrix&) const = default;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionError("dot: size mismatch " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double l2_norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline bool all_finite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

/// Differentiable classification head: logits = W2 tanh(W1 r + b1) + b2.
struct HeadParams {
  Matrix w1;  // hidden x d
  Vector b1;  // hidden
  Matrix w2;  // classes x hidden
  Vector b2;  // classes

  std::size_t input_dim() const noexcept { return w1.cols; }
  std::size_t hidden_dim() const noexcept { return w1.rows; }
  std::size_t num_classes() const noexcept { return w2.rows; }

  void validate() const {
    if (b1.size() != w1.rows || w2.cols != w1.rows || b2.size() != w2.rows ||
        w1.data.size() != w1.rows * w1.cols || w2.data.size() != w2.rows * w2.cols) {
      throw DimensionError("head parameter shapes are inconsistent");
    }
    if (!all_finite(w1.data) || !all_finite(b1) || !all_finite(w2.data) ||
        !all_finite(b2)) {
      throw FormatError("head parameters contain non-finite values");
    }
  }

  bool operator==(const HeadParams&) const = default;
};

namespace detail {

inline void check_input(const HeadParams& head, std::span<const double> r) {
  if (r.size() != head.input_dim()) {
    throw DimensionError("representation has dimension " + std::to_string(r.size()) +
                         ", head expects " + std::to_string(head.input_dim()));
  }
}

inline void check_class(const HeadParams& head, std::size_t class_index) {
  if (class_index >= head.num_classes()) {
    throw DimensionError("class index " + std::to_string(class_index) +
                         " out of range for " + std::to_string(head.num_classes()) +
                         " classes");
  }
}

// tanh(W1 r + b1)
inline Vector hidden_activations(const HeadParams& head, std::span<const double> r) {
  Vector a(head.hidden_dim());
  for (std::size_t j = 0; j < head.hidden_dim(); ++j) {
    a[j] = std::tanh(dot(head.w1.row(j), r) + head.b1[j]);
  }
  return a;
}

}  // namespace detail

inline Vector head_logits(const HeadParams& head, std::span<const double> r) {
  detail::check_input(head, r);
  const Vector a = detail::hidden_activations(head, r);
  Vector logits(head.num_classes());
  for (std::size_t c = 0; c < head.num_classes(); ++c) {
    logits[c] = dot(head.w2.row(c), a) + head.b2[c];
  }
  return logits;
}

inline double head_logit(const HeadParams& head, std::span<const double> r,
                         std::size_t class_index) {
  detail::check_input(head, r);
  detail::check_class(head, class_index);
  const Vector a = detail::hidden_activations(head, r);
  return dot(head.w2.row(class_index), a) + head.b2[class_index];
}

/// Gradient of one class logit with respect to the representation:
/// W1^T diag(1 - tanh^2(W1 r + b1)) W2[class]^T.
inline Vector head_gradient(const HeadParams& head, std::span<const double> r,
                            std::size_t class_index) {
  detail::check_input(head, r);
  detail::check_class(head, class_index);
  const Vector a = detail::hidden_activations(head, r);
  Vector grad(head.input_dim(), 0.0);
  for (std::size_t j = 0; j < head.hidden_dim(); ++j) {
    const double delta = head.w2(class_index, j) * (1.0 - a[j] * a[j]);
    const auto w1_row = head.w1.row(j);
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += delta * w1_row[i];
  }
  return grad;
}

/// logits = W r + b. The gradient of class c is row c of W everywhere.
struct AffineHead {
  Matrix w;  // classes x d
  Vector b;  // classes

  std::size_t input_dim() const noexcept { return w.cols; }
  std::size_t num_classes() const noexcept { return w.rows; }
};

inline double head_logit(const AffineHead& head, std::span<const double> r,
                         std::size_t class_index) {
  if (class_index >= head.num_classes()) throw DimensionError("class index out of range");
  return dot(head.w.row(class_index), r) + head.b.at(class_index);
}

inline Vector head_gradient(const AffineHead& head, std::span<const double> r,
                            std::size_t class_index) {
  if (r.size() != head.input_dim()) throw DimensionError("representation size mismatch");
  if (class_index >= head.num_classes()) throw DimensionError("class index out of range");
  const auto row = head.w.row(class_index);
  return Vector(row.begin(), row.end());
}

/// Central-difference estimate of head_gradient, one coordinate at a time.
inline Vector finite_diff_gradient(const HeadParams& head, std::span<const double> r,
                                   std::size_t class_index, double eps) {
  if (!(eps > 0.0)) throw InvalidArgument("finite-difference step must be positive");
  detail::check_input(head, r);
  detail::check_class(head, class_index);
  Vector x(r.begin(), r.end());
  Vector grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + eps;
    const double up = head_logit(head, x, class_index);
    x[i] = saved - eps;
    const double down = head_logit(head, x, class_index);
    x[i] = saved;
    grad[i] = (up - down) / (2.0 * eps);
  }
  return grad;
}

// ||a - b|| / max(||a||, ||b||); zero when both vectors are zero.
inline double relative_l2_error(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("relative_l2_error: size mismatch");
  double diff = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) diff += (a[i] - b[i]) * (a[i] - b[i]);
  const double scale = std::max(l2_norm(a), l2_norm(b));
  if (scale == 0.0) return 0.0;
  return std::sqrt(diff) / scale;
}

inline double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

/// Mean-pooled word embeddings feeding a tanh head with one sigmoid per class.
class ModelBundle {
 public:
  Matrix embeddings;  // vocabulary size x d
  HeadParams head;
  std::vector<std::string> classes = default_classes();

  std::size_t dim() const noexcept { return embeddings.cols; }

  // tokens()[0] is the UNK token.
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

  void set_vocabulary(std::vector<std::string> tokens) {
    tokens_ = std::move(tokens);
    index_.clear();
    for (std::size_t i = 0; i < tokens_.size(); ++i) index_.emplace(tokens_[i], i);
  }

  // Out-of-vocabulary tokens map to the UNK row.
  std::size_t token_index(std::string_view token) const {
    auto it = index_.find(std::string(token));
    return it == index_.end() ? 0 : it->second;
  }

  std::size_t class_index(std::string_view name) const {
    for (std::size_t i = 0; i < classes.size(); ++i) {
      if (classes[i] == name) return i;
    }
    throw LookupError("model has no class '" + std::string(name) + "'");
  }

  void validate() const {
    if (tokens_.empty() || tokens_[0] != kUnknownToken) {
      throw FormatError("vocabulary must start with the " + std::string(kUnknownToken) +
                        " token");
    }
    if (embeddings.rows != tokens_.size() ||
        embeddings.data.size() != embeddings.rows * embeddings.cols) {
      throw DimensionError("embedding matrix does not match vocabulary size");
    }
    if (dim() < 2) throw DimensionError("representation dimension must be at least 2");
    if (!all_finite(embeddings.data)) {
      throw FormatError("embeddings contain non-finite values");
    }
    head.validate();
    if (head.input_dim() != dim()) {
      throw DimensionError("head input dimension does not match embeddings");
    }
    if (head.num_classes() != classes.size()) {
      throw DimensionError("head output dimension does not match class list");
    }
    std::unordered_set<std::string> seen;
    for (const auto& c : classes) {
      if (!seen.insert(c).second) throw FormatError("duplicate class '" + c + "'");
    }
    if (index_.size() != tokens_.size()) throw FormatError("duplicate tokens in vocabulary");
  }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline Vector encode(const ModelBundle& model, std::string_view text) {
  Vector r(model.dim(), 0.0);
  const auto toks = tokenize(text);
  if (toks.empty()) return r;
  for (const auto& t : toks) {
    const auto row = model.embeddings.row(model.token_index(t));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += row[i];
  }
  const double inv = 1.0 / static_cast<double>(toks.size());
  for (double& v : r) v *= inv;
  return r;
}

inline Vector predict_proba(const ModelBundle& model, std::string_view text) {
  Vector p = head_logits(model.head, encode(model, text));
  for (double& v : p) v = sigmoid(v);
  return p;
}

/// Hash of every parameter bit pattern plus vocabulary and class names.
inline std::string model_fingerprint(const ModelBundle& model) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix_doubles = [&](std::span<const double> values) {
    for (double v : values) {
      const auto bits = std::bit_cast<std::uint64_t>(v);
      for (int b = 0; b < 8; ++b) {
        h ^= (bits >> (8 * b)) & 0xffU;
        h *= 0x100000001b3ULL;
      }
    }
  };
  for (const auto& t : model.tokens()) h = fnv1a(t + '\n', h);
  for (const auto& c : model.classes) h = fnv1a(c + '\n', h);
  mix_doubles(model.embeddings.data);
  mix_doubles(model.head.w1.data);
  mix_doubles(model.head.b1);
  mix_doubles(model.head.w2.data);
  mix_doubles(model.head.b2);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace tcav
