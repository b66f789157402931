#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "editbench/core/types.hpp"
#include "editbench/meta/ingest.hpp"

namespace editbench {

enum class CorrelationStat { pearson, spearman };

// Pearson r via a single-pass co-moment update (Welford style).
double pearson(const std::vector<double>& xs, const std::vector<double>& ys);

// Pearson over average ranks (ties averaged).
double spearman(const std::vector<double>& xs, const std::vector<double>& ys);

double correlate(const std::vector<double>& xs, const std::vector<double>& ys,
                 CorrelationStat stat);

// A metric column: score for one sample id.
using ScoreColumn = std::function<double(const std::string& sample_id)>;

enum class PreferenceChannel { if_pref, ip_pref, pq_pref, overall_pref };

// Correlation between per-pair human preference (mean over raters, B minus
// A polarity) and the metric score difference score(B) - score(A). Every
// pair needs at least two raters.
double metric_human_correlation(
    const std::vector<PairwiseAnnotation>& annotations,
    const ScoreColumn& column, PreferenceChannel channel,
    CorrelationStat stat = CorrelationStat::pearson);

// Convenience overload matching the stored-score layout.
double metric_human_correlation(
    const std::vector<PairwiseAnnotation>& annotations,
    const std::map<std::string, GradeSummary>& scores, Metric metric,
    CorrelationStat stat = CorrelationStat::pearson);

struct AggregatorComparison {
  double r_arithmetic = 0.0;
  double r_geometric = 0.0;
};

AggregatorComparison compare_aggregators(
    const std::vector<PairwiseAnnotation>& annotations,
    const std::map<std::string, GradeSummary>& scores,
    CorrelationStat stat = CorrelationStat::pearson);

// --- Per-sample variance protocol ------------------------------------------

struct VarianceEntry {
  int k = 0;
  double mean_variation = 0.0;
  std::vector<double> per_sample;  // mean variation per sample across trials
};

struct VarianceReport {
  std::vector<int> ks;
  int trials = 1;
  std::map<Metric, std::vector<VarianceEntry>> per_metric;
};

// One measurement draw covers all three metrics, as one grading pass does.
using MeasurementStream = std::function<ScoreTriple()>;
using SampleMeasurer =
    std::function<MeasurementStream(const std::string& sample_id)>;

// Index ranges of the four disjoint groups for a given K: group g holds
// measurements [g*k, (g+1)*k).
std::array<std::pair<int, int>, 4> variance_groups(int k);

// For each trial and sample, draws 4*max(ks) fresh measurements; for each K
// the first 4*K of the trial's block are split into four disjoint groups
// whose means S1..S4 give variation = (max - min) / 2. The measurer must
// supply trials * 4 * max(ks) measurements per sample.
VarianceReport variance_study(const SampleMeasurer& measurer,
                              const std::vector<std::string>& samples,
                              std::vector<int> ks, int trials);

}  // namespace editbench
