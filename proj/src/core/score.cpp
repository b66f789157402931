#include "editbench/core/score.hpp"

#include <cmath>
#include <string>

#include "editbench/core/error.hpp"

namespace editbench {

namespace {

void check_range(const ScoreTriple& t) {
  for (Metric m : kAllMetrics) {
    double v = t.get(m);
    if (!(v >= 0.0 && v <= 10.0))
      throw validation_error("score component out of [0,10]: " +
                             std::to_string(v));
  }
}

}  // namespace

double overall_score(const ScoreTriple& t) {
  check_range(t);
  return (t.if_score + t.ip_score + t.pq_score) / 3.0;
}

double geometric_overall(const ScoreTriple& t) {
  check_range(t);
  return std::cbrt(t.if_score * t.ip_score * t.pq_score);
}

}  // namespace editbench
