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

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "tcav/audit.hpp"
#include "tcav/concepts.hpp"
#include "tcav/engine.hpp"
#include "tcav/error.hpp"
#include "tcav/lexicon.hpp"
#include "tcav/model.hpp"
#include "tcav/probes.hpp"
#include "tcav/text.hpp"

namespace tcav {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kModelFormat = "tcav-model/1";

// nlohmann::json serializes doubles in shortest round-trip form, so parsing
// a dump restores every parameter bit for bit.

inline Json parse_json(const std::string& contents, const std::string& source) {
  try {
    return Json::parse(contents);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(source + ": " + e.what());
  }
}

inline Json read_json(const std::filesystem::path& path) {
  auto in = text::open_input(path);
  std::string contents((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_json(contents, path.string());
}

// --- WordSet -------------------------------------------------------------

inline Json to_json(const WordSet& ws) {
  Json j;
  j["bin"] = std::string(to_string(ws.bin));
  j["source"] = ws.source;
  j["words"] = ws.words;
  return j;
}

inline WordSet word_set_from_json(const Json& j) {
  try {
    WordSet ws;
    ws.bin = bin_from_string(j.at("bin").get<std::string>());
    ws.words = j.at("words").get<std::vector<std::string>>();
    ws.source = j.value("source", "");
    return ws;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad word set: ") + e.what());
  }
}

// --- Concept -------------------------------------------------------------

inline Json to_json(const Concept& c) {
  Json j;
  j["id"] = c.id;
  j["kind"] = std::string(to_string(c.kind));
  j["subject"] = c.subject ? Json(*c.subject) : Json(nullptr);
  j["bin"] = c.bin ? Json(std::string(to_string(*c.bin))) : Json(nullptr);
  j["examples"] = c.examples;
  return j;
}

inline Concept concept_from_json(const Json& j) {
  try {
    Concept c;
    c.id = j.at("id").get<std::string>();
    c.kind = concept_kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("subject") && !j["subject"].is_null()) {
      c.subject = j["subject"].get<std::string>();
    }
    if (j.contains("bin") && !j["bin"].is_null()) {
      c.bin = bin_from_string(j["bin"].get<std::string>());
    }
    c.examples = j.at("examples").get<std::vector<std::string>>();
    if (c.examples.empty()) throw EmptySetError("concept '" + c.id + "' has no examples");
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad concept: ") + e.what());
  }
}

// --- Model ---------------------------------------------------------------

inline Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows; ++r) {
    auto row = m.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return rows;
}

namespace detail {

inline double finite_number(const Json& v, const std::string& what) {
  if (!v.is_number()) throw FormatError(what + " contains a non-numeric or non-finite value");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw FormatError(what + " contains a non-finite value");
  return d;
}

inline Vector vector_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) throw FormatError(what + " must be an array");
  Vector out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(finite_number(v, what));
  return out;
}

inline Matrix matrix_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) throw FormatError(what + " must be an array of rows");
  Matrix m;
  m.rows = j.size();
  for (const auto& row : j) {
    auto values = vector_from_json(row, what);
    if (m.data.empty()) m.cols = values.size();
    if (values.size() != m.cols) throw FormatError(what + " has ragged rows");
    m.data.insert(m.data.end(), values.begin(), values.end());
  }
  return m;
}

}  // namespace detail

inline Json to_json(const ModelBundle& m) {
  Json j;
  j["format"] = std::string(kModelFormat);
  j["classes"] = m.classes;
  j["dim"] = m.dim();
  j["hidden"] = m.head.hidden_dim();
  j["tokens"] = m.tokens();
  j["embeddings"] = matrix_to_json(m.embeddings);
  Json head;
  head["w1"] = matrix_to_json(m.head.w1);
  head["b1"] = m.head.b1;
  head["w2"] = matrix_to_json(m.head.w2);
  head["b2"] = m.head.b2;
  j["head"] = std::move(head);
  return j;
}

inline ModelBundle model_from_json(const Json& j) {
  try {
    if (j.value("format", "") != kModelFormat) {
      throw FormatError("not a " + std::string(kModelFormat) + " model file");
    }
    ModelBundle m;
    m.classes = j.at("classes").get<std::vector<std::string>>();
    m.set_vocabulary(j.at("tokens").get<std::vector<std::string>>());
    m.embeddings = detail::matrix_from_json(j.at("embeddings"), "embeddings");
    const auto& head = j.at("head");
    m.head.w1 = detail::matrix_from_json(head.at("w1"), "head.w1");
    m.head.b1 = detail::vector_from_json(head.at("b1"), "head.b1");
    m.head.w2 = detail::matrix_from_json(head.at("w2"), "head.w2");
    m.head.b2 = detail::vector_from_json(head.at("b2"), "head.b2");
    m.validate();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad model file: ") + e.what());
  }
}

inline void save_model(const ModelBundle& m, const std::filesystem::path& path) {
  text::write_file(path, to_json(m).dump() + "\n");
}

inline ModelBundle load_model(const std::filesystem::path& path) {
  return model_from_json(read_json(path));
}

// --- Engine and audit ----------------------------------------------------

inline Json to_json(const EngineConfig& cfg) {
  Json j;
  j["cav_count"] = cfg.cav_count;
  j["examples_per_cav"] = cfg.examples_per_cav;
  j["random_input_count"] = cfg.random_input_count;
  j["random_concept_size"] = cfg.random_concept_size;
  j["alpha"] = cfg.alpha;
  j["correction"] = std::string(to_string(cfg.correction));
  j["seed"] = cfg.seed;
  return j;
}

inline EngineConfig engine_config_from_json(const Json& j, EngineConfig cfg = {}) {
  try {
    cfg.cav_count = j.value("cav_count", cfg.cav_count);
    cfg.examples_per_cav = j.value("examples_per_cav", cfg.examples_per_cav);
    cfg.random_input_count = j.value("random_input_count", cfg.random_input_count);
    cfg.random_concept_size = j.value("random_concept_size", cfg.random_concept_size);
    cfg.alpha = j.value("alpha", cfg.alpha);
    if (j.contains("correction")) {
      cfg.correction = correction_from_string(j["correction"].get<std::string>());
    }
    cfg.seed = j.value("seed", cfg.seed);
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad engine config: ") + e.what());
  }
}

inline Json to_json(const TcavResult& r) {
  Json j;
  j["concept_id"] = r.concept_id;
  j["class"] = r.class_name;
  j["scores"] = r.scores;
  j["mean"] = r.mean;
  j["std"] = r.std;
  j["p_value"] = r.p_value ? Json(*r.p_value) : Json(nullptr);
  j["significant"] = r.significant;
  return j;
}

inline TcavResult tcav_result_from_json(const Json& j) {
  TcavResult r;
  r.concept_id = j.at("concept_id").get<std::string>();
  r.class_name = j.at("class").get<std::string>();
  r.scores = j.at("scores").get<std::vector<double>>();
  r.mean = j.at("mean").get<double>();
  r.std = j.at("std").get<double>();
  if (!j.at("p_value").is_null()) r.p_value = j["p_value"].get<double>();
  r.significant = j.at("significant").get<bool>();
  return r;
}

inline Json to_json(const AuditGrid& g) {
  Json j;
  j["audit"] = g.name;
  j["model_fingerprint"] = g.model_fingerprint;
  j["config"] = to_json(g.config);
  j["correction_factor"] = g.correction_factor;
  j["subjects"] = g.subjects;
  j["classes"] = g.classes;
  j["columns"] = g.columns;
  j["baseline_fingerprint"] = g.baseline_fingerprint;
  Json baselines = Json::array();
  for (const auto& b : g.baselines) baselines.push_back(to_json(b));
  j["baselines"] = std::move(baselines);
  Json cells = Json::array();
  for (const auto& c : g.cells) {
    Json cell;
    cell["subject"] = c.subject;
    cell["column"] = c.column;
    const Json result = to_json(c.result);
    for (const auto& [k, v] : result.items()) cell[k] = v;
    cells.push_back(std::move(cell));
  }
  j["cells"] = std::move(cells);
  return j;
}

inline AuditGrid audit_grid_from_json(const Json& j) {
  try {
    AuditGrid g;
    g.name = j.at("audit").get<std::string>();
    g.model_fingerprint = j.at("model_fingerprint").get<std::string>();
    g.config = engine_config_from_json(j.at("config"));
    g.correction_factor = j.at("correction_factor").get<std::size_t>();
    g.subjects = j.at("subjects").get<std::vector<std::string>>();
    g.classes = j.at("classes").get<std::vector<std::string>>();
    g.columns = j.at("columns").get<std::vector<std::string>>();
    g.baseline_fingerprint = j.at("baseline_fingerprint").get<std::string>();
    for (const auto& b : j.at("baselines")) g.baselines.push_back(tcav_result_from_json(b));
    for (const auto& c : j.at("cells")) {
      AuditCell cell;
      cell.subject = c.at("subject").get<std::string>();
      cell.column = c.at("column").get<std::string>();
      cell.result = tcav_result_from_json(c);
      cell.class_name = cell.result.class_name;
      g.cells.push_back(std::move(cell));
    }
    if (g.cells.size() != g.subjects.size() * g.classes.size() * g.columns.size()) {
      throw FormatError("grid '" + g.name + "' is incomplete");
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad audit grid: ") + e.what());
  }
}

inline Json to_json(const FairnessFlags& flags) {
  auto list = [](const std::vector<FlaggedCell>& cells) {
    Json a = Json::array();
    for (const auto& c : cells) {
      Json j;
      j["subject"] = c.subject;
      j["class"] = c.class_name;
      j["bin"] = std::string(to_string(c.bin));
      a.push_back(std::move(j));
    }
    return a;
  };
  Json j;
  j["baseline_subject"] = flags.baseline_subject;
  j["over_sensitive"] = list(flags.over_sensitive);
  j["under_sensitive"] = list(flags.under_sensitive);
  return j;
}

inline Json to_json(const ProbeResult& p) {
  Json j;
  j["concept_id"] = p.concept_id;
  Json deltas;
  for (std::size_t c = 0; c < p.classes.size(); ++c) deltas[p.classes[c]] = p.deltas[c];
  j["deltas"] = std::move(deltas);
  j["sample_count"] = p.sample_count;
  return j;
}

inline Json to_json(const ContrastSide& s) {
  Json j;
  j["concept_id"] = s.concept_id;
  j["prob_delta"] = s.prob_delta;
  j["tcav_mean"] = s.tcav_mean;
  j["tcav_std"] = s.tcav_std;
  j["p_value"] = s.p_value;
  j["significant"] = s.significant;
  return j;
}

inline Json to_json(const ContrastReport& r) {
  Json j;
  j["class"] = r.class_name;
  j["coherent"] = to_json(r.coherent);
  j["non_coherent"] = to_json(r.non_coherent);
  return j;
}

}  // namespace tcav
