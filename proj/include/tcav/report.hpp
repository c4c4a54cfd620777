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

#include <cstdio>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tcav/audit.hpp"
#include "tcav/probes.hpp"
#include "tcav/serialize.hpp"
#include "tcav/text.hpp"

namespace tcav::report {

inline std::string format_number(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

// "mean (std)", bold when significant.
inline std::string format_cell(const TcavResult& r) {
  std::string cell = format_number("%.2f", r.mean) + " (" + format_number("%.2f", r.std) + ")";
  return r.significant ? "**" + cell + "**" : cell;
}

inline std::string grid_markdown(const AuditGrid& grid) {
  std::string out = "## " + grid.name + " audit\n\n";
  out += "Mean (std) of TCAV scores over " + std::to_string(grid.config.cav_count) +
         " CAVs. Bold: significantly different from the random concept (Welch, alpha " +
         format_number("%g", grid.config.alpha) + ", correction factor " +
         std::to_string(grid.correction_factor) + ").\n";
  out += "Model " + grid.model_fingerprint + ", baseline " + grid.baseline_fingerprint + ".\n\n";
  out += "| Subject | Class |";
  for (const auto& col : grid.columns) out += " " + col + " |";
  out += "\n|---|---|";
  for (std::size_t i = 0; i < grid.columns.size(); ++i) out += "---|";
  out += "\n";
  for (std::size_t s = 0; s < grid.subjects.size(); ++s) {
    for (std::size_t c = 0; c < grid.classes.size(); ++c) {
      out += "| " + grid.subjects[s] + " | " + grid.classes[c] + " |";
      for (std::size_t col = 0; col < grid.columns.size(); ++col) {
        out += " " + format_cell(grid.cells[grid.index_of(s, c, col)].result) + " |";
      }
      out += "\n";
    }
  }
  return out;
}

inline std::string grid_csv(std::span<const AuditGrid> grids) {
  std::string out = "audit,subject,class,column,concept_id,mean,std,p_value,significant\n";
  for (const auto& g : grids) {
    for (const auto& cell : g.cells) {
      const auto& r = cell.result;
      out += g.name + "," + cell.subject + "," + cell.class_name + "," + cell.column + "," +
             r.concept_id + "," + format_number("%.6f", r.mean) + "," +
             format_number("%.6f", r.std) + "," +
             (r.p_value ? format_number("%.6g", *r.p_value) : std::string()) + "," +
             (r.significant ? "1" : "0") + "\n";
    }
  }
  return out;
}

inline std::string flags_markdown(const FairnessFlags& flags) {
  auto section = [](const std::string& title, const std::vector<FlaggedCell>& cells) {
    std::string s = "## " + title + "\n\n";
    if (cells.empty()) return s + "no flags\n\n";
    s += "| Subject | Class | Sentiment |\n|---|---|---|\n";
    for (const auto& c : cells) {
      s += "| " + c.subject + " | " + c.class_name + " | " + std::string(to_string(c.bin)) +
           " |\n";
    }
    return s + "\n";
  };
  std::string out = "# Fairness flags\n\nBaseline subject: " + flags.baseline_subject + "\n\n";
  out += section("Over-sensitive (significant for neutral or positive sentiment)",
                 flags.over_sensitive);
  out += section("Under-sensitive (not significant where the baseline is)",
                 flags.under_sensitive);
  return out;
}

inline std::string probes_csv(std::span<const ProbeResult> probes) {
  std::string out = "concept_id,class,prob_delta,sample_count\n";
  for (const auto& p : probes) {
    for (std::size_t c = 0; c < p.classes.size(); ++c) {
      out += p.concept_id + "," + p.classes[c] + "," + format_number("%.6f", p.deltas[c]) + "," +
             std::to_string(p.sample_count) + "\n";
    }
  }
  return out;
}

inline std::string contrast_csv(std::span<const ContrastReport> reports) {
  std::string out =
      "class,side,concept_id,prob_delta,tcav_mean,tcav_std,p_value,significant\n";
  for (const auto& r : reports) {
    for (const auto* side : {&r.coherent, &r.non_coherent}) {
      out += r.class_name + "," + (side == &r.coherent ? "coherent" : "non_coherent") + "," +
             side->concept_id + "," + format_number("%.6f", side->prob_delta) + "," +
             format_number("%.6f", side->tcav_mean) + "," +
             format_number("%.6f", side->tcav_std) + "," +
             format_number("%.6g", side->p_value) + "," + (side->significant ? "1" : "0") +
             "\n";
    }
  }
  return out;
}

/// Everything one audit run produces.
struct AuditReport {
  std::vector<AuditGrid> grids;
  std::optional<FairnessFlags> flags;
  std::vector<ProbeResult> probes;
  std::vector<ContrastReport> contrasts;
};

inline Json grids_json(std::span<const AuditGrid> grids) {
  Json j = Json::object();
  for (const auto& g : grids) j[g.name] = to_json(g);
  return j;
}

/// Writes grid.json, grid.csv, grid.md, flags.md, probe.csv, contrast.csv and
/// contrast.json into `dir`. Output bytes depend only on the report contents.
inline void write_bundle(const AuditReport& report, const std::filesystem::path& dir) {
  text::write_file(dir / "grid.json", grids_json(report.grids).dump(2) + "\n");
  text::write_file(dir / "grid.csv", grid_csv(report.grids));
  std::string md;
  for (const auto& g : report.grids) md += grid_markdown(g) + "\n";
  text::write_file(dir / "grid.md", md);
  if (report.flags) {
    text::write_file(dir / "flags.md", flags_markdown(*report.flags));
  } else {
    text::write_file(dir / "flags.md",
                     "# Fairness flags\n\nnot computed (no identity grid with the baseline subject)\n");
  }
  text::write_file(dir / "probe.csv", probes_csv(report.probes));
  text::write_file(dir / "contrast.csv", contrast_csv(report.contrasts));
  Json contrasts = Json::array();
  for (const auto& c : report.contrasts) contrasts.push_back(to_json(c));
  text::write_file(dir / "contrast.json", contrasts.dump(2) + "\n");
}

}  // namespace tcav::report
