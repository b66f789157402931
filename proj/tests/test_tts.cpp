#include <doctest.h>

#include <mutex>

#include "editbench/core/rng.hpp"
#include "editbench/gateway/markers.hpp"
#include "editbench/pipeline/pipeline.hpp"
#include "editbench/tts/editor.hpp"
#include "editbench/tts/scene_ops.hpp"
#include "editbench/tts/sim_latents.hpp"
#include "editbench/tts/strategies.hpp"

#include "support.hpp"

using namespace editbench;

namespace {

AtomicInstruction atom_of(const std::string& text,
                          AtomicOperationType type,
                          const std::string& id = "") {
  AtomicInstruction atom;
  atom.id = id.empty() ? ("atom-" + text) : id;
  atom.text = text;
  atom.op_type = type;
  atom.simplified = true;
  return atom;
}

CompoundInstruction compound_of(const std::vector<AtomicInstruction>& atoms,
                                int level) {
  CompoundInstruction c;
  c.level = level;
  std::vector<std::string> clauses;
  for (int i = 0; i < level; ++i) {
    c.source_atom_ids.push_back(atoms[static_cast<std::size_t>(i)].id);
    clauses.push_back(atoms[static_cast<std::size_t>(i)].text);
  }
  c.text = join_clauses(clauses);
  return c;
}

Grader oracle_grader(int repeats = 1, std::uint64_t seed = 5,
                     double noise = 0.0) {
  GraderConfig cfg;
  cfg.repeats = repeats;
  return Grader(test::sim_gateway(scene_oracle_latents(noise)), cfg,
                test::templates(), seed);
}

// Generates a random, position-consistent instruction load for a scene by
// running the simulated pipeline end to end.
struct GeneratedCase {
  ImageRef image;
  std::vector<AtomicInstruction> atoms;
  std::vector<CompoundInstruction> compounds;
};

GeneratedCase generated_case(std::uint64_t seed, int n) {
  DeterministicRng rng(seed);
  ImageRef image = ImageRef::from_scene(random_scene(rng));
  PipelineConfig cfg;
  cfg.sequence_length = n;
  InstructionPipeline pipeline(test::sim_gateway(), cfg, test::templates(),
                               seed);
  InstructionSequence seq =
      pipeline.simplify_all(pipeline.generate_sequence(image));
  GeneratedCase gen;
  gen.image = image;
  gen.atoms = seq.atoms;
  gen.compounds = pipeline.compound_all(seq);
  return gen;
}

}  // namespace

TEST_SUITE_BEGIN("tts");

TEST_CASE("simulated_apply covers add, remove, and no-op cases") {
  SceneState empty;
  auto added = simulated_apply(
      empty, atom_of("add a ball of yarn", AtomicOperationType::add_object));
  CHECK_FALSE(added.no_op);
  REQUIRE(added.scene.elements.size() == 1);
  CHECK(added.scene.elements[0].noun == "ball of yarn");

  auto removed_missing = simulated_apply(
      empty, atom_of("remove the hat", AtomicOperationType::remove_object));
  CHECK(removed_missing.no_op);
  CHECK(removed_missing.scene == empty);
}

TEST_CASE("merged attribute semantics equal the sequential application") {
  SceneState start;
  auto step1 = simulated_apply(
      start, atom_of("add a ball of yarn", AtomicOperationType::add_object));
  auto step2 = simulated_apply(
      step1.scene, atom_of("change the color of the yarn to red",
                           AtomicOperationType::change_color));

  auto merged = simulated_apply(
      start, atom_of("add a red ball of yarn", AtomicOperationType::add_object));
  CHECK(step2.scene == merged.scene);
}

TEST_CASE("direct_edit leaves identity instructions as no-ops") {
  DeterministicRng rng(4);
  ImageRef image = ImageRef::from_scene(random_scene(rng));
  SimulatedEditor editor;
  CompoundInstruction keep;
  keep.text = "keep everything exactly as it is";
  keep.level = 1;
  keep.source_atom_ids = {"a"};
  EditResult result = direct_edit(editor, image, keep);
  CHECK(result.output == image);
  REQUIRE(result.trace.steps.size() == 1);
  CHECK(result.trace.steps[0].no_op);
}

TEST_CASE("direct_edit applies compound clauses against the scene oracle") {
  SceneState start;
  start.elements.push_back({"e1", "cat", {}});
  ImageRef image = ImageRef::from_scene(start);
  SimulatedEditor editor;

  auto atoms = std::vector<AtomicInstruction>{
      atom_of("add a ball of yarn", AtomicOperationType::add_object, "a1"),
      atom_of("change the color of the yarn to red",
              AtomicOperationType::change_color, "a2")};
  CompoundInstruction compound = compound_of(atoms, 2);
  EditResult result = direct_edit(editor, image, compound);

  SceneState expected = start;
  for (const auto& atom : atoms)
    expected = simulated_apply(expected, atom).scene;
  CHECK(result.output.scene.value() == expected);

  const SceneElement* yarn = nullptr;
  for (const auto& e : result.output.scene->elements)
    if (e.noun == "ball of yarn") yarn = &e;
  REQUIRE(yarn != nullptr);
  CHECK(yarn->attrs.at("color") == "red");
}

TEST_CASE("editors reject unsupported image kinds") {
  SimulatedEditor editor;
  CompoundInstruction c;
  c.text = "add a hat";
  c.level = 1;
  c.source_atom_ids = {"a"};
  CHECK_THROWS_AS(direct_edit(editor, ImageRef::from_path("x.png"), c),
                  Error);
}

TEST_CASE("sequential_edit equals the left fold of simulated_apply") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    GeneratedCase gen = generated_case(seed + 100, 1 + (seed % 8));
    SimulatedEditor editor;
    EditResult result = sequential_edit(editor, gen.image, gen.atoms);

    SceneState fold = gen.image.scene.value();
    for (const auto& atom : gen.atoms)
      fold = simulated_apply(fold, atom).scene;
    CHECK(result.output.scene.value() == fold);
    CHECK(result.trace.steps.size() == gen.atoms.size());
  }
}

TEST_CASE("sequential_edit with a single atom equals direct_edit") {
  GeneratedCase gen = generated_case(55, 1);
  SimulatedEditor editor;
  EditResult seq = sequential_edit(editor, gen.image, gen.atoms);
  EditResult direct = direct_edit(editor, gen.image, gen.compounds[0]);
  CHECK(seq.output == direct.output);

  CHECK_THROWS_AS(sequential_edit(editor, gen.image, {}), Error);
}

TEST_CASE("oracle scores: perfect application, no-edit, and fractions") {
  SceneState input;
  input.elements.push_back({"e1", "cat", {}});
  input.elements.push_back({"e2", "car", {{"color", "red"}}});
  input.global["background"] = "park";
  auto atoms = std::vector<AtomicInstruction>{
      atom_of("remove the car", AtomicOperationType::remove_object, "a1"),
      atom_of("add a kite", AtomicOperationType::add_object, "a2")};

  SceneState perfect = input;
  for (const auto& atom : atoms)
    perfect = simulated_apply(perfect, atom).scene;
  ScoreTriple full = oracle_scores(input, perfect, atoms);
  CHECK(full.if_score == doctest::Approx(10.0));
  CHECK(full.ip_score == doctest::Approx(10.0));

  // Output identical to the input: nothing followed, everything preserved.
  ScoreTriple none = oracle_scores(input, input, atoms);
  CHECK(none.if_score == doctest::Approx(0.0));
  CHECK(none.ip_score == doctest::Approx(10.0));

  SceneState half = simulated_apply(input, atoms[0]).scene;
  CHECK(oracle_scores(input, half, atoms).if_score == doctest::Approx(5.0));
}

TEST_CASE("oracle penalizes artifacts and blemishes in PQ") {
  SceneState clean;
  clean.elements.push_back({"e1", "cat", {}});
  CHECK(oracle_pq(clean) == doctest::Approx(10.0));
  SceneState dirty = clean;
  dirty.elements.push_back({"e2", "artifact", {{"kind", "smudge"}}});
  dirty.elements.push_back({"e3", "dog", {{"blemish", "warped"}}});
  CHECK(oracle_pq(dirty) == doctest::Approx(6.0));
}

TEST_CASE("best_of_n_direct selects the argmax with low-index ties") {
  GeneratedCase gen = generated_case(77, 3);
  SimulatedEditorConfig config;
  config.fidelity = 0.55;
  config.collateral_rate = 0.1;
  config.artifact_rate = 0.3;
  SimulatedEditor editor(config);
  Grader grader = oracle_grader();

  BestOfNResult result = best_of_n_direct(editor, grader, gen.image,
                                          gen.compounds.back(), 6);
  REQUIRE(result.candidates.size() == 6);
  for (std::size_t j = 0; j < result.candidates.size(); ++j)
    CHECK(result.candidates[j].index == static_cast<int>(j));
  CHECK(result.trace.steps[0].candidates_considered == 6);
  // Independent re-scan: argmax with lowest-index tie-break.
  int best = 0;
  for (int j = 1; j < 6; ++j)
    if (result.candidates[static_cast<std::size_t>(j)].grade.overall >
        result.candidates[static_cast<std::size_t>(best)].grade.overall)
      best = j;
  CHECK(result.output ==
        result.candidates[static_cast<std::size_t>(best)].image);

  CHECK_THROWS_AS(
      best_of_n_direct(editor, grader, gen.image, gen.compounds.back(), 0),
      Error);
}

TEST_CASE("best_of_n with n=1 reproduces the plain strategies") {
  GeneratedCase gen = generated_case(88, 4);
  SimulatedEditorConfig config;
  config.fidelity = 0.6;
  config.artifact_rate = 0.25;
  config.run_seed = 88;
  SimulatedEditor editor(config);
  Grader grader = oracle_grader();

  BestOfNResult bo_direct =
      best_of_n_direct(editor, grader, gen.image, gen.compounds.back(), 1);
  EditResult direct = direct_edit(editor, gen.image, gen.compounds.back());
  CHECK(Json(bo_direct.output).dump() == Json(direct.output).dump());

  EditResult bo_seq = best_of_n_sequential(editor, grader, gen.image,
                                           gen.atoms, gen.compounds, 1);
  EditResult seq = sequential_edit(editor, gen.image, gen.atoms);
  CHECK(Json(bo_seq.output).dump() == Json(seq.output).dump());
}

TEST_CASE("best_of_n_sequential grades against the original input") {
  GeneratedCase gen = generated_case(99, 4);
  SimulatedEditorConfig config;
  config.fidelity = 0.5;
  SimulatedEditor editor(config);

  std::vector<ChatRequest> seen;
  std::mutex mu;
  GatewayOptions options;
  options.observer = [&](const ChatRequest& req, bool) {
    std::lock_guard<std::mutex> lock(mu);
    seen.push_back(req);
  };
  GraderConfig gcfg;
  gcfg.repeats = 1;
  Grader grader(test::sim_gateway(scene_oracle_latents(0.0), {},
                                  std::move(options)),
                gcfg, test::templates(), 99);

  EditResult result = best_of_n_sequential(editor, grader, gen.image,
                                           gen.atoms, gen.compounds, 2);
  (void)result;
  REQUIRE_FALSE(seen.empty());
  for (const auto& req : seen) {
    std::string text = prompt_text(req);
    auto output_block = find_image_block(text, "output");
    REQUIRE(output_block.has_value());
    auto input_block = find_image_block(text, "input");
    if (input_block.has_value()) {
      // Graded as an edit of the original input, never of an intermediate.
      CHECK(input_block->id == gen.image.id);
      CHECK(input_block->id != output_block->id);
    }
  }

  // Mismatched compounds are rejected.
  auto wrong = gen.compounds;
  std::swap(wrong[0], wrong[1]);
  CHECK_THROWS_AS(best_of_n_sequential(editor, grader, gen.image, gen.atoms,
                                       wrong, 2),
                  Error);
}

TEST_CASE("larger candidate pools never lower the selected grade") {
  int n1_not_worse = 0;
  const int trials = 40;
  for (int t = 0; t < trials; ++t) {
    GeneratedCase gen = generated_case(static_cast<std::uint64_t>(500 + t), 3);
    SimulatedEditorConfig config;
    config.fidelity = 0.55;
    config.collateral_rate = 0.15;
    config.artifact_rate = 0.3;
    config.run_seed = static_cast<std::uint64_t>(t);
    SimulatedEditor editor(config);
    Grader grader = oracle_grader(1, static_cast<std::uint64_t>(t));

    auto n1 = best_of_n_direct(editor, grader, gen.image, gen.compounds.back(),
                               1);
    auto n4 = best_of_n_direct(editor, grader, gen.image, gen.compounds.back(),
                               4);
    // Candidate 0 is shared, so the argmax over the superset cannot be
    // worse.
    CHECK(n4.candidates[0].grade.overall ==
          doctest::Approx(n1.candidates[0].grade.overall));
    double best1 = n1.candidates[0].grade.overall;
    double best4 = best1;
    for (const auto& c : n4.candidates)
      best4 = std::max(best4, c.grade.overall);
    if (best4 >= best1) ++n1_not_worse;
  }
  CHECK(n1_not_worse == trials);
}

TEST_SUITE_END();
