#pragma once

#include "editbench/core/types.hpp"

namespace editbench {

// Arithmetic mean of the three metrics. Components must lie in [0, 10].
double overall_score(const ScoreTriple& t);

// Geometric mean alternative, kept for the aggregator-comparison study.
double geometric_overall(const ScoreTriple& t);

}  // namespace editbench
