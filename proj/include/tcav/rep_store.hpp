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

#include <cmath>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <unordered_map>

#include "json.hpp"
#include "tcav/error.hpp"
#include "tcav/model.hpp"
#include "tcav/text.hpp"

namespace tcav {

/// Precomputed sentence representations, for auditing encoders that live
/// outside this toolkit.
class RepStore {
 public:
  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return reps_.size(); }
  bool contains(std::string_view text) const { return reps_.contains(std::string(text)); }

  // Returns true when an existing entry was replaced.
  bool insert(std::string text, Vector rep) {
    if (rep.empty()) throw FormatError("empty representation for '" + text + "'");
    if (dim_ == 0) dim_ = rep.size();
    if (rep.size() != dim_) {
      throw FormatError("representation for '" + text + "' has dimension " +
                        std::to_string(rep.size()) + ", expected " + std::to_string(dim_));
    }
    if (!all_finite(rep)) {
      throw FormatError("representation for '" + text + "' has a non-finite component");
    }
    auto [it, inserted] = reps_.insert_or_assign(std::move(text), std::move(rep));
    return !inserted;
  }

  const Vector& at(std::string_view text) const {
    auto it = reps_.find(std::string(text));
    if (it == reps_.end()) {
      throw LookupError("no representation stored for '" + std::string(text) + "'");
    }
    return it->second;
  }

 private:
  std::size_t dim_ = 0;
  std::unordered_map<std::string, Vector> reps_;
};

struct EmbeddingImport {
  RepStore store;
  std::size_t duplicate_count = 0;  // records overwritten by a later duplicate
};

/// Reads JSONL records of the form {"text": ..., "vector": [...]}.
/// Duplicate texts keep the last record.
inline EmbeddingImport import_embeddings(std::istream& in, const std::string& source) {
  EmbeddingImport out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(source, line_no, e.what());
    }
    if (!record.is_object() || !record.contains("text") || !record["text"].is_string() ||
        !record.contains("vector") || !record["vector"].is_array()) {
      throw ParseError(source, line_no, "expected {\"text\": string, \"vector\": [numbers]}");
    }
    Vector rep;
    for (const auto& v : record["vector"]) {
      if (!v.is_number()) {
        throw FormatError(source + ":" + std::to_string(line_no) +
                          ": non-numeric vector component");
      }
      rep.push_back(v.get<double>());
    }
    try {
      if (out.store.insert(record["text"].get<std::string>(), std::move(rep))) {
        ++out.duplicate_count;
      }
    } catch (const FormatError& e) {
      throw FormatError(source + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

inline EmbeddingImport import_embeddings(const std::filesystem::path& path) {
  auto in = text::open_input(path);
  return import_embeddings(in, path.string());
}

}  // namespace tcav
