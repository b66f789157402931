#pragma once

#include <string>
#include <vector>

#include "editbench/core/edit_grammar.hpp"
#include "editbench/core/types.hpp"

namespace editbench {

struct ApplyOutcome {
  SceneState scene;
  bool no_op = false;  // referent missing; scene returned unchanged
};

// Deterministic structural transform for one parsed command.
ApplyOutcome apply_command(const SceneState& scene, const EditCommand& cmd);

// One atomic instruction against a scene. Unknown referents leave the scene
// unchanged and flag the step as a no-op.
ApplyOutcome simulated_apply(const SceneState& scene,
                             const AtomicInstruction& atom);

// True when the command's structural effect is visible in `output`,
// relative to `input`.
bool effect_applied(const SceneState& input, const SceneState& output,
                    const EditCommand& cmd);

// Brute-force ground truth for the simulated stack:
//   IF: fraction of atoms whose effect is present in the output.
//   IP: fraction of untouched input elements and global keys left unchanged.
//   PQ: 10 minus penalties for artifact elements and blemished attributes.
ScoreTriple oracle_scores(const SceneState& input, const SceneState& output,
                          const std::vector<AtomicInstruction>& atoms);

// Same oracle over raw clause texts (how a compound instruction arrives).
ScoreTriple oracle_scores_clauses(const SceneState& input,
                                  const SceneState& output,
                                  const std::vector<std::string>& clauses);

double oracle_pq(const SceneState& output);

}  // namespace editbench
