#pragma once

#include <string>
#include <vector>

#include "editbench/store/records.hpp"

namespace editbench {

struct ReportRow {
  std::string model;  // editor id + strategy (+ best-of suffix)
  int level = 1;
  double mean_if = 0.0;
  double mean_ip = 0.0;
  double mean_pq = 0.0;
  double mean_overall = 0.0;
  int count = 0;
};

struct ReportDelta {
  std::string model;
  int level_lo = 1;
  int level_hi = 1;
  double d_if = 0.0;
  double d_ip = 0.0;
  double d_pq = 0.0;
  double d_overall = 0.0;
};

struct ReportTable {
  std::vector<ReportRow> rows;      // sorted by (model, level)
  std::vector<ReportDelta> deltas;  // C_max minus C_min per model
};

std::string report_model_label(const ScoreRecord& record);

// Per-model, per-level means over the given level range, plus the delta
// between the highest and lowest level present for each model.
ReportTable build_report(const std::vector<ScoreRecord>& scores,
                         int level_min, int level_max);

// Two-decimal aligned table; internal arithmetic stays full precision.
std::string render_report_text(const ReportTable& table);

// Full-precision JSON, including per-level curve data per model.
Json report_json(const ReportTable& table);

}  // namespace editbench
