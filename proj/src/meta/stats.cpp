#include "editbench/meta/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "editbench/core/error.hpp"
#include "editbench/core/score.hpp"

namespace editbench {

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size())
    throw validation_error("pearson: length mismatch");
  if (xs.size() < 2)
    throw validation_error("pearson: need at least two observations");

  // Single-pass co-moment updates.
  double mean_x = 0.0;
  double mean_y = 0.0;
  double m2x = 0.0;
  double m2y = 0.0;
  double cxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double n = static_cast<double>(i + 1);
    double dx = xs[i] - mean_x;
    double dy = ys[i] - mean_y;
    mean_x += dx / n;
    mean_y += dy / n;
    m2x += dx * (xs[i] - mean_x);
    m2y += dy * (ys[i] - mean_y);
    cxy += dx * (ys[i] - mean_y);
  }
  if (m2x <= 0.0 || m2y <= 0.0)
    throw validation_error("pearson: zero variance input");
  return cxy / std::sqrt(m2x * m2y);
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(xs.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size())
    throw validation_error("spearman: length mismatch");
  return pearson(average_ranks(xs), average_ranks(ys));
}

double correlate(const std::vector<double>& xs, const std::vector<double>& ys,
                 CorrelationStat stat) {
  return stat == CorrelationStat::pearson ? pearson(xs, ys)
                                          : spearman(xs, ys);
}

namespace {

int preference_of(const PairwiseAnnotation& a, PreferenceChannel channel) {
  switch (channel) {
    case PreferenceChannel::if_pref:
      return a.pref_if;
    case PreferenceChannel::ip_pref:
      return a.pref_ip;
    case PreferenceChannel::pq_pref:
      return a.pref_pq;
    case PreferenceChannel::overall_pref:
      return a.pref_overall;
  }
  return 0;
}

struct PairKey {
  std::string key;
  std::string a;
  std::string b;
};

}  // namespace

double metric_human_correlation(
    const std::vector<PairwiseAnnotation>& annotations,
    const ScoreColumn& column, PreferenceChannel channel,
    CorrelationStat stat) {
  if (annotations.empty())
    throw validation_error("metric_human_correlation: no annotations");

  // Rater duplicates collapse into one observation per pair.
  std::map<std::string, std::pair<PairwiseAnnotation, std::vector<int>>>
      pairs;
  for (const auto& a : annotations) {
    a.validate();
    std::string key = a.input_id + '\x1f' + a.instruction_id + '\x1f' +
                      a.output_a_id + '\x1f' + a.output_b_id;
    auto [it, inserted] = pairs.try_emplace(key, a, std::vector<int>{});
    (void)inserted;
    it->second.second.push_back(preference_of(a, channel));
  }

  std::vector<double> diffs;
  std::vector<double> prefs;
  for (const auto& [key, entry] : pairs) {
    (void)key;
    const auto& [first, votes] = entry;
    if (votes.size() < 2)
      throw validation_error(
          "metric_human_correlation: pair " + first.output_a_id + "/" +
          first.output_b_id + " has fewer than two raters");
    diffs.push_back(column(first.output_b_id) - column(first.output_a_id));
    double sum = 0.0;
    for (int v : votes) sum += static_cast<double>(v);
    prefs.push_back(sum / static_cast<double>(votes.size()));
  }
  return correlate(diffs, prefs, stat);
}

namespace {

ScoreColumn column_for(const std::map<std::string, GradeSummary>& scores,
                       Metric metric) {
  return [&scores, metric](const std::string& sample_id) {
    auto it = scores.find(sample_id);
    if (it == scores.end())
      throw validation_error("missing score for sample " + sample_id);
    return it->second.triple.get(metric);
  };
}

PreferenceChannel channel_for(Metric metric) {
  switch (metric) {
    case Metric::IF:
      return PreferenceChannel::if_pref;
    case Metric::IP:
      return PreferenceChannel::ip_pref;
    case Metric::PQ:
      return PreferenceChannel::pq_pref;
  }
  return PreferenceChannel::overall_pref;
}

}  // namespace

double metric_human_correlation(
    const std::vector<PairwiseAnnotation>& annotations,
    const std::map<std::string, GradeSummary>& scores, Metric metric,
    CorrelationStat stat) {
  return metric_human_correlation(annotations, column_for(scores, metric),
                                  channel_for(metric), stat);
}

AggregatorComparison compare_aggregators(
    const std::vector<PairwiseAnnotation>& annotations,
    const std::map<std::string, GradeSummary>& scores, CorrelationStat stat) {
  auto lookup = [&scores](const std::string& sample_id) -> const GradeSummary& {
    auto it = scores.find(sample_id);
    if (it == scores.end())
      throw validation_error("missing score for sample " + sample_id);
    return it->second;
  };
  AggregatorComparison out;
  out.r_arithmetic = metric_human_correlation(
      annotations,
      [&](const std::string& id) { return overall_score(lookup(id).triple); },
      PreferenceChannel::overall_pref, stat);
  out.r_geometric = metric_human_correlation(
      annotations,
      [&](const std::string& id) {
        return geometric_overall(lookup(id).triple);
      },
      PreferenceChannel::overall_pref, stat);
  return out;
}

std::array<std::pair<int, int>, 4> variance_groups(int k) {
  std::array<std::pair<int, int>, 4> groups;
  for (int g = 0; g < 4; ++g) groups[static_cast<std::size_t>(g)] = {g * k, (g + 1) * k};
  return groups;
}

VarianceReport variance_study(const SampleMeasurer& measurer,
                              const std::vector<std::string>& samples,
                              std::vector<int> ks, int trials) {
  if (samples.empty())
    throw validation_error("variance_study: no samples");
  if (ks.empty()) throw validation_error("variance_study: no K values");
  for (std::size_t i = 0; i + 1 < ks.size(); ++i)
    if (ks[i] >= ks[i + 1])
      throw validation_error("variance_study: K values must be strictly increasing");
  if (ks.front() < 1)
    throw validation_error("variance_study: K values must be >= 1");
  if (trials < 1) throw validation_error("variance_study: trials must be >= 1");

  const int max_k = ks.back();
  const int block = 4 * max_k;

  // accum[metric][k_index][sample] summed over trials.
  std::map<Metric, std::vector<std::vector<double>>> accum;
  for (Metric m : kAllMetrics)
    accum[m].assign(ks.size(), std::vector<double>(samples.size(), 0.0));

  for (std::size_t s = 0; s < samples.size(); ++s) {
    MeasurementStream stream = measurer(samples[s]);
    if (!stream)
      throw validation_error("variance_study: measurer returned no stream");
    for (int trial = 0; trial < trials; ++trial) {
      std::vector<ScoreTriple> draws;
      draws.reserve(static_cast<std::size_t>(block));
      for (int i = 0; i < block; ++i) draws.push_back(stream());
      for (std::size_t ki = 0; ki < ks.size(); ++ki) {
        int k = ks[ki];
        for (Metric m : kAllMetrics) {
          double lo = 0.0;
          double hi = 0.0;
          bool first = true;
          for (const auto& [begin, end] : variance_groups(k)) {
            double sum = 0.0;
            for (int i = begin; i < end; ++i)
              sum += draws[static_cast<std::size_t>(i)].get(m);
            double mean = sum / static_cast<double>(k);
            if (first) {
              lo = hi = mean;
              first = false;
            } else {
              lo = std::min(lo, mean);
              hi = std::max(hi, mean);
            }
          }
          accum[m][ki][s] += (hi - lo) / 2.0;
        }
      }
    }
  }

  VarianceReport report;
  report.ks = ks;
  report.trials = trials;
  for (Metric m : kAllMetrics) {
    std::vector<VarianceEntry> entries;
    for (std::size_t ki = 0; ki < ks.size(); ++ki) {
      VarianceEntry entry;
      entry.k = ks[ki];
      entry.per_sample.resize(samples.size());
      double total = 0.0;
      for (std::size_t s = 0; s < samples.size(); ++s) {
        entry.per_sample[s] = accum[m][ki][s] / static_cast<double>(trials);
        total += entry.per_sample[s];
      }
      entry.mean_variation = total / static_cast<double>(samples.size());
      entries.push_back(std::move(entry));
    }
    report.per_metric[m] = std::move(entries);
  }
  return report;
}

}  // namespace editbench
