#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "editbench/core/rng.hpp"
#include "editbench/core/score.hpp"
#include "editbench/meta/stats.hpp"

#include "support.hpp"

using namespace editbench;

namespace {

// Independent two-pass covariance route used as the correlation oracle.
double pearson_two_pass(const std::vector<double>& xs,
                        const std::vector<double>& ys) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(ys.size());
  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

GradeSummary summary_of(double if_s, double ip_s, double pq_s) {
  return GradeSummary::from_raw({{Metric::IF, {if_s}},
                                 {Metric::IP, {ip_s}},
                                 {Metric::PQ, {pq_s}}});
}

PairwiseAnnotation annotation(const std::string& pair_tag,
                              const std::string& a, const std::string& b,
                              int pref, const std::string& rater) {
  PairwiseAnnotation ann;
  ann.input_id = "img-" + pair_tag;
  ann.instruction_id = "inst-" + pair_tag;
  ann.level = 1;
  ann.output_a_id = a;
  ann.output_b_id = b;
  ann.pref_if = pref;
  ann.pref_ip = pref;
  ann.pref_pq = pref;
  ann.pref_overall = pref;
  ann.rater_id = rater;
  return ann;
}

}  // namespace

TEST_SUITE_BEGIN("meta");

TEST_CASE("pearson on exact linear data") {
  CHECK(pearson({1, 2, 3}, {2, 4, 6}) == doctest::Approx(1.0));
  CHECK(pearson({1, 2, 3}, {3, 2, 1}) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(pearson({1, 2}, {1}), Error);
  CHECK_THROWS_AS(pearson({1, 1, 1}, {1, 2, 3}), Error);
}

TEST_CASE("pearson matches the two-pass covariance oracle") {
  DeterministicRng rng(31);
  for (int t = 0; t < 200; ++t) {
    std::size_t n = static_cast<std::size_t>(rng.uniform_int(2, 60));
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = rng.gaussian(0, 3);
      ys[i] = 0.4 * xs[i] + rng.gaussian(0, 2);
    }
    CHECK(pearson(xs, ys) ==
          doctest::Approx(pearson_two_pass(xs, ys)).epsilon(1e-9));
  }
}

TEST_CASE("pearson symmetry and affine invariance") {
  DeterministicRng rng(32);
  std::vector<double> xs(40), ys(40);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = rng.gaussian(5, 2);
    ys[i] = rng.gaussian(1, 1) + 0.3 * xs[i];
  }
  CHECK(pearson(xs, ys) == doctest::Approx(pearson(ys, xs)));
  std::vector<double> scaled = xs;
  for (auto& v : scaled) v = 2.5 * v + 7.0;
  CHECK(pearson(scaled, ys) == doctest::Approx(pearson(xs, ys)));
}

TEST_CASE("spearman is rank-based") {
  // A monotone nonlinear transform leaves spearman at 1.
  std::vector<double> xs = {1, 2, 3, 4, 5};
  std::vector<double> ys = {1, 8, 27, 64, 125};
  CHECK(spearman(xs, ys) == doctest::Approx(1.0));
  CHECK(correlate(xs, ys, CorrelationStat::pearson) < 1.0);
}

TEST_CASE("metric-human correlation over constructed pairs") {
  std::vector<PairwiseAnnotation> annotations;
  std::map<std::string, GradeSummary> scores;
  // Preference magnitude proportional to the score difference.
  std::vector<double> diffs = {2.0, -1.0, 0.5, -2.5, 1.5, 0.25};
  for (std::size_t p = 0; p < diffs.size(); ++p) {
    std::string a = "a" + std::to_string(p);
    std::string b = "b" + std::to_string(p);
    scores[a] = summary_of(5, 5, 5);
    scores[b] = summary_of(5 + diffs[p], 5, 5);
    int pref = diffs[p] > 0 ? 1 : (diffs[p] < 0 ? -1 : 0);
    annotations.push_back(annotation(std::to_string(p), a, b, pref, "r1"));
    annotations.push_back(annotation(std::to_string(p), a, b, pref, "r2"));
  }
  double r = metric_human_correlation(annotations, scores, Metric::IF);
  CHECK(r > 0.8);

  // Sign-only preferences with proportional magnitudes reach exactly 1 when
  // diffs and prefs are already linear.
  std::vector<PairwiseAnnotation> lin;
  std::map<std::string, GradeSummary> lin_scores;
  for (int p = 0; p < 4; ++p) {
    std::string a = "la" + std::to_string(p);
    std::string b = "lb" + std::to_string(p);
    double d = (p - 1.5);
    lin_scores[a] = summary_of(5, 5, 5);
    lin_scores[b] = summary_of(5 + d, 5, 5);
    for (const char* rater : {"r1", "r2"}) {
      PairwiseAnnotation ann =
          annotation("l" + std::to_string(p), a, b, 0, rater);
      ann.pref_if = 0;
      lin.push_back(ann);
    }
  }
  // Make preference literally proportional by using the (averaged) votes
  // -1/0/+1 against symmetric diffs: r == 1 requires exact linearity, so
  // instead assert the zero-variance failure mode for all-ties.
  CHECK_THROWS_AS(metric_human_correlation(lin, lin_scores, Metric::IF),
                  Error);
}

TEST_CASE("annotations need two raters per pair") {
  std::vector<PairwiseAnnotation> annotations = {
      annotation("0", "a0", "b0", 1, "r1")};
  std::map<std::string, GradeSummary> scores;
  scores["a0"] = summary_of(5, 5, 5);
  scores["b0"] = summary_of(6, 5, 5);
  CHECK_THROWS_AS(metric_human_correlation(annotations, scores, Metric::IF),
                  Error);
}

TEST_CASE("correlation is invariant to order and A/B swap with negation") {
  DeterministicRng rng(41);
  std::vector<PairwiseAnnotation> annotations;
  std::map<std::string, GradeSummary> scores;
  for (int p = 0; p < 30; ++p) {
    std::string a = "a" + std::to_string(p);
    std::string b = "b" + std::to_string(p);
    double qa = rng.uniform01() * 10;
    double qb = rng.uniform01() * 10;
    scores[a] = summary_of(qa, 5, 5);
    scores[b] = summary_of(qb, 5, 5);
    int pref = qb > qa ? 1 : (qb < qa ? -1 : 0);
    if (rng.chance(0.3)) pref = 0;  // rater noise
    annotations.push_back(annotation(std::to_string(p), a, b, pref, "r1"));
    annotations.push_back(annotation(std::to_string(p), a, b, pref, "r2"));
  }
  double r = metric_human_correlation(annotations, scores, Metric::IF);

  auto shuffled = annotations;
  std::reverse(shuffled.begin(), shuffled.end());
  CHECK(metric_human_correlation(shuffled, scores, Metric::IF) ==
        doctest::Approx(r));

  auto swapped = annotations;
  for (auto& ann : swapped) {
    std::swap(ann.output_a_id, ann.output_b_id);
    ann.pref_if = -ann.pref_if;
  }
  CHECK(metric_human_correlation(swapped, scores, Metric::IF) ==
        doctest::Approx(r));
}

TEST_CASE("aggregator comparison separates arithmetic from geometric") {
  std::map<std::string, GradeSummary> scores;
  scores["a0"] = summary_of(0, 5, 5);   // geometric collapses to 0
  scores["b0"] = summary_of(2, 2, 2);
  CHECK(geometric_overall(scores["a0"].triple) == 0.0);
  CHECK(overall_score(scores["a0"].triple) > 0.0);

  // Identical triples give identical correlations for both aggregators.
  DeterministicRng rng(51);
  std::vector<PairwiseAnnotation> annotations;
  std::map<std::string, GradeSummary> equal_scores;
  for (int p = 0; p < 20; ++p) {
    std::string a = "ea" + std::to_string(p);
    std::string b = "eb" + std::to_string(p);
    double qa = 1.0 + rng.uniform01() * 8;
    double qb = 1.0 + rng.uniform01() * 8;
    equal_scores[a] = summary_of(qa, qa, qa);
    equal_scores[b] = summary_of(qb, qb, qb);
    int pref = qb > qa ? 1 : -1;
    if (p % 4 == 0) pref = -pref;
    annotations.push_back(annotation("e" + std::to_string(p), a, b, pref, "r1"));
    annotations.push_back(annotation("e" + std::to_string(p), a, b, pref, "r2"));
  }
  AggregatorComparison cmp = compare_aggregators(annotations, equal_scores);
  CHECK(cmp.r_arithmetic == doctest::Approx(cmp.r_geometric));
}

TEST_CASE("variance groups are disjoint and variation matches the formula") {
  auto groups = variance_groups(5);
  std::set<int> seen;
  for (const auto& [begin, end] : groups) {
    CHECK(end - begin == 5);
    for (int i = begin; i < end; ++i) CHECK(seen.insert(i).second);
  }
  CHECK(seen.size() == 20);

  // Group means {7.0, 7.2, 6.8, 7.1} force variation 0.2.
  std::vector<double> values;
  for (double mean : {7.0, 7.2, 6.8, 7.1})
    for (int i = 0; i < 5; ++i) values.push_back(mean);
  std::size_t cursor = 0;
  SampleMeasurer measurer = [&](const std::string&) {
    return [&]() {
      double v = values[cursor++];
      return ScoreTriple{v, v, v};
    };
  };
  VarianceReport report = variance_study(measurer, {"s"}, {5}, 1);
  CHECK(report.per_metric.at(Metric::IF)[0].mean_variation ==
        doctest::Approx(0.2));
}

TEST_CASE("zero noise means zero variation for every K") {
  SampleMeasurer measurer = [](const std::string&) {
    return []() { return ScoreTriple{7, 7, 7}; };
  };
  VarianceReport report =
      variance_study(measurer, {"s1", "s2"}, {5, 10, 20}, 2);
  for (Metric m : kAllMetrics)
    for (const auto& entry : report.per_metric.at(m))
      CHECK(entry.mean_variation == doctest::Approx(0.0));
}

TEST_CASE("variance study validates its inputs") {
  SampleMeasurer measurer = [](const std::string&) {
    return []() { return ScoreTriple{5, 5, 5}; };
  };
  CHECK_THROWS_AS(variance_study(measurer, {}, {5}, 1), Error);
  CHECK_THROWS_AS(variance_study(measurer, {"s"}, {10, 5}, 1), Error);
  CHECK_THROWS_AS(variance_study(measurer, {"s"}, {5}, 0), Error);
}

TEST_CASE("annotation and baseline ingestion validates records") {
  auto dir = test::temp_dir("meta-ingest");
  auto annotations_path = dir / "annotations.jsonl";
  {
    std::ofstream out(annotations_path);
    for (int p = 0; p < 3; ++p) {
      Json j = annotation(std::to_string(p), "a", "b", 1, "r1");
      out << j.dump() << "\n";
    }
  }
  CHECK(ingest_annotations(annotations_path).size() == 3);

  {
    std::ofstream out(annotations_path, std::ios::app);
    Json j = annotation("x", "a", "b", 1, "r1");
    j["pref_if"] = 2;
    out << j.dump() << "\n";
  }
  try {
    ingest_annotations(annotations_path);
    FAIL("expected validation error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }

  auto empty_path = dir / "empty.jsonl";
  { std::ofstream out(empty_path); }
  CHECK(ingest_annotations(empty_path).empty());

  auto baselines_path = dir / "baselines.jsonl";
  {
    std::ofstream out(baselines_path);
    out << R"({"sample_id":"s1","clip_dir":0.12,"clip_img":0.97})" << "\n";
  }
  auto baselines = ingest_baselines(baselines_path);
  REQUIRE(baselines.size() == 1);
  CHECK(baselines[0].clip_img == doctest::Approx(0.97));
  {
    std::ofstream out(baselines_path, std::ios::app);
    out << R"({"sample_id":"s2","clip_dir":"high","clip_img":0.5})" << "\n";
  }
  CHECK_THROWS_AS(ingest_baselines(baselines_path), Error);
}

TEST_CASE("baseline columns correlate exactly like native metrics") {
  DeterministicRng rng(61);
  std::vector<PairwiseAnnotation> annotations;
  std::map<std::string, double> clip;
  std::vector<double> xs, ys;
  for (int p = 0; p < 50; ++p) {
    std::string a = "ca" + std::to_string(p);
    std::string b = "cb" + std::to_string(p);
    clip[a] = rng.uniform01();
    clip[b] = rng.uniform01();
    int pref = clip[b] > clip[a] ? 1 : -1;
    if (p % 5 == 0) pref = -pref;
    annotations.push_back(annotation("c" + std::to_string(p), a, b, pref, "r1"));
    annotations.push_back(annotation("c" + std::to_string(p), a, b, pref, "r2"));
    xs.push_back(clip[b] - clip[a]);
    ys.push_back(pref);
  }
  ScoreColumn column = [&](const std::string& id) { return clip.at(id); };
  double r = metric_human_correlation(annotations, column,
                                      PreferenceChannel::if_pref);
  CHECK(r == doctest::Approx(pearson_two_pass(xs, ys)).epsilon(1e-9));
}

TEST_SUITE_END();
