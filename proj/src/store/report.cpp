#include "editbench/store/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "editbench/core/error.hpp"

namespace editbench {

std::string report_model_label(const ScoreRecord& record) {
  std::string label = record.editor_id + "/" + record.strategy;
  if (record.n > 1) label += "+bo" + std::to_string(record.n);
  return label;
}

ReportTable build_report(const std::vector<ScoreRecord>& scores,
                         int level_min, int level_max) {
  if (scores.empty()) throw validation_error("report: empty score store");
  if (level_min > level_max)
    throw validation_error("report: invalid level range");

  struct Sums {
    double s_if = 0, s_ip = 0, s_pq = 0, s_o = 0;
    int count = 0;
  };
  std::map<std::pair<std::string, int>, Sums> groups;
  for (const auto& record : scores) {
    if (record.level < level_min || record.level > level_max) continue;
    Sums& sums = groups[{report_model_label(record), record.level}];
    sums.s_if += record.grade.triple.if_score;
    sums.s_ip += record.grade.triple.ip_score;
    sums.s_pq += record.grade.triple.pq_score;
    sums.s_o += record.grade.overall;
    sums.count += 1;
  }
  if (groups.empty())
    throw validation_error("report: no scores within the level range");

  ReportTable table;
  for (const auto& [key, sums] : groups) {
    ReportRow row;
    row.model = key.first;
    row.level = key.second;
    double n = static_cast<double>(sums.count);
    row.mean_if = sums.s_if / n;
    row.mean_ip = sums.s_ip / n;
    row.mean_pq = sums.s_pq / n;
    row.mean_overall = sums.s_o / n;
    row.count = sums.count;
    table.rows.push_back(std::move(row));
  }
  std::sort(table.rows.begin(), table.rows.end(),
            [](const ReportRow& a, const ReportRow& b) {
              return std::tie(a.model, a.level) < std::tie(b.model, b.level);
            });

  std::map<std::string, std::pair<const ReportRow*, const ReportRow*>> ends;
  for (const auto& row : table.rows) {
    auto& [lo, hi] = ends[row.model];
    if (lo == nullptr || row.level < lo->level) lo = &row;
    if (hi == nullptr || row.level > hi->level) hi = &row;
  }
  for (const auto& [model, pair] : ends) {
    const auto& [lo, hi] = pair;
    if (lo->level == hi->level) continue;
    ReportDelta d;
    d.model = model;
    d.level_lo = lo->level;
    d.level_hi = hi->level;
    d.d_if = hi->mean_if - lo->mean_if;
    d.d_ip = hi->mean_ip - lo->mean_ip;
    d.d_pq = hi->mean_pq - lo->mean_pq;
    d.d_overall = hi->mean_overall - lo->mean_overall;
    table.deltas.push_back(std::move(d));
  }
  return table;
}

namespace {

std::string two_decimals(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string signed_two_decimals(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%+.2f", v);
  return buf;
}

void pad(std::string& line, std::size_t width) {
  while (line.size() < width) line.push_back(' ');
}

}  // namespace

std::string render_report_text(const ReportTable& table) {
  std::size_t model_width = 5;
  for (const auto& row : table.rows)
    model_width = std::max(model_width, row.model.size());
  for (const auto& d : table.deltas)
    model_width = std::max(model_width, d.model.size());

  std::string out;
  {
    std::string header = "Model";
    pad(header, model_width);
    header += "  Level       IF      IP      PQ       O   Count\n";
    out += header;
  }
  auto cell = [](const std::string& s) {
    std::string c = s;
    while (c.size() < 7) c.insert(c.begin(), ' ');
    return "  " + c;
  };
  for (const auto& row : table.rows) {
    std::string line = row.model;
    pad(line, model_width);
    line += cell("C" + std::to_string(row.level));
    line += cell(two_decimals(row.mean_if));
    line += cell(two_decimals(row.mean_ip));
    line += cell(two_decimals(row.mean_pq));
    line += cell(two_decimals(row.mean_overall));
    line += cell(std::to_string(row.count));
    out += line + "\n";
  }
  for (const auto& d : table.deltas) {
    std::string line = d.model;
    pad(line, model_width);
    line += cell("dC" + std::to_string(d.level_hi) + "-C" +
                 std::to_string(d.level_lo));
    line += cell(signed_two_decimals(d.d_if));
    line += cell(signed_two_decimals(d.d_ip));
    line += cell(signed_two_decimals(d.d_pq));
    line += cell(signed_two_decimals(d.d_overall));
    line += cell("-");
    out += line + "\n";
  }
  return out;
}

Json report_json(const ReportTable& table) {
  Json rows = Json::array();
  Json curves = Json::object();
  for (const auto& row : table.rows) {
    Json r{{"model", row.model},
           {"level", row.level},
           {"if", row.mean_if},
           {"ip", row.mean_ip},
           {"pq", row.mean_pq},
           {"overall", row.mean_overall},
           {"count", row.count}};
    rows.push_back(r);
    curves[row.model].push_back(
        Json{{"level", row.level}, {"overall", row.mean_overall}});
  }
  Json deltas = Json::array();
  for (const auto& d : table.deltas)
    deltas.push_back(Json{{"model", d.model},
                          {"level_lo", d.level_lo},
                          {"level_hi", d.level_hi},
                          {"if", d.d_if},
                          {"ip", d.d_ip},
                          {"pq", d.d_pq},
                          {"overall", d.d_overall}});
  return Json{{"rows", rows}, {"deltas", deltas}, {"curves", curves}};
}

}  // namespace editbench
