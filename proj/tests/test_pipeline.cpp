#include <doctest.h>

#include "editbench/core/rng.hpp"
#include "editbench/core/taxonomy.hpp"
#include "editbench/pipeline/pipeline.hpp"

#include "support.hpp"

using namespace editbench;

namespace {

InstructionPipeline make_pipeline(std::uint64_t seed, PipelineConfig cfg = {},
                                  SimulatedBackendConfig backend = {}) {
  return InstructionPipeline(test::sim_gateway(nullptr, std::move(backend)),
                             cfg, test::templates(), seed);
}

ImageRef seeded_image(std::uint64_t seed) {
  DeterministicRng rng(seed);
  return ImageRef::from_scene(random_scene(rng));
}

}  // namespace

TEST_SUITE_BEGIN("pipeline");

TEST_CASE("filter passes ordinary instructions") {
  CHECK(filter_check("Remove the car.", PipelineStage::sequence_generation)
            .pass);
}

TEST_CASE("filter flags garbled text") {
  std::string garbled = "add a nice";
  for (int i = 0; i < 5; ++i) garbled += '\x01';
  garbled += " lamp";
  auto verdict =
      filter_check(garbled, PipelineStage::sequence_generation);
  CHECK_FALSE(verdict.pass);
  CHECK(std::find(verdict.reasons.begin(), verdict.reasons.end(), "garbled") !=
        verdict.reasons.end());
}

TEST_CASE("filter flags out-of-bounds word counts") {
  std::string longtext;
  for (int i = 0; i < 500; ++i) longtext += "word" + std::to_string(i) + " ";
  auto verdict =
      filter_check(longtext, PipelineStage::sequence_generation);
  CHECK_FALSE(verdict.pass);
  CHECK(std::find(verdict.reasons.begin(), verdict.reasons.end(), "length") !=
        verdict.reasons.end());

  CHECK_FALSE(
      filter_check("too short", PipelineStage::sequence_generation).pass);

  // Compound bounds scale with the level.
  std::string compound;
  for (int i = 0; i < 100; ++i) compound += "word ";
  CHECK_FALSE(filter_check(compound, PipelineStage::compounding, {}, 1).pass);
  CHECK(filter_check(compound, PipelineStage::compounding, {}, 4).pass);
}

TEST_CASE("filter flags repetition and empty text") {
  std::string repeated;
  for (int i = 0; i < 5; ++i) repeated += "over and over again ";
  auto verdict = filter_check(repeated, PipelineStage::sequence_generation);
  CHECK_FALSE(verdict.pass);
  CHECK(std::find(verdict.reasons.begin(), verdict.reasons.end(),
                  "repetition") != verdict.reasons.end());

  auto empty = filter_check("   ", PipelineStage::sequence_generation);
  CHECK_FALSE(empty.pass);
  CHECK(empty.reasons == std::vector<std::string>{"empty"});
  CHECK(empty.pass == empty.reasons.empty());
}

TEST_CASE("sequence generation yields N taxonomy-tagged atoms") {
  PipelineConfig cfg;
  cfg.sequence_length = 8;
  auto pipeline = make_pipeline(42, cfg);
  InstructionSequence seq = pipeline.generate_sequence(seeded_image(42));
  REQUIRE(seq.atoms.size() == 8);
  for (const auto& atom : seq.atoms) {
    CHECK_FALSE(atom.text.empty());
    CHECK(operation_from_name(operation_info(atom.op_type).name) ==
          atom.op_type);
    CHECK(filter_check(atom.text, PipelineStage::sequence_generation, cfg)
              .pass);
    CHECK(atom.provenance.stage == 1);
    CHECK(atom.provenance.attempts == 0);
  }
  int counted = 0;
  for (const auto& [op, count] : seq.op_type_counts()) {
    (void)op;
    counted += count;
  }
  CHECK(counted == 8);
}

TEST_CASE("invalid sequence length is rejected up front") {
  PipelineConfig cfg;
  cfg.sequence_length = 0;
  CHECK_THROWS_AS(make_pipeline(1, cfg), Error);
}

TEST_CASE("garbled lines are regenerated with attempt counts") {
  PipelineConfig cfg;
  cfg.sequence_length = 4;
  SimulatedBackendConfig backend;
  backend.garble_lines_first_attempt = {2};
  auto pipeline = make_pipeline(7, cfg, backend);
  InstructionSequence seq = pipeline.generate_sequence(seeded_image(7));
  REQUIRE(seq.atoms.size() == 4);
  CHECK(seq.atoms[1].provenance.attempts > 0);
  CHECK(seq.atoms[0].provenance.attempts == 0);
  for (const auto& atom : seq.atoms)
    CHECK(filter_check(atom.text, PipelineStage::sequence_generation, cfg)
              .pass);
}

TEST_CASE("simplification strips intent clauses and flips the flag") {
  auto pipeline = make_pipeline(3);
  AtomicInstruction atom;
  atom.id = "a1";
  atom.text = "add a cozy ball of yarn to make the scene feel playful";
  atom.op_type = AtomicOperationType::add_object;

  AtomicInstruction simplified = pipeline.simplify(atom);
  CHECK(simplified.simplified);
  CHECK(simplified.text == "add a cozy ball of yarn");
  CHECK(simplified.id == atom.id);
  CHECK(simplified.op_type == atom.op_type);
  CHECK(simplified.provenance.stage == 2);

  // No-op branch: already minimal text comes back unchanged.
  AtomicInstruction minimal;
  minimal.id = "a2";
  minimal.text = "remove the car";
  minimal.op_type = AtomicOperationType::remove_object;
  AtomicInstruction untouched = pipeline.simplify(minimal);
  CHECK(untouched.text == "remove the car");
  CHECK(untouched.simplified);

  CHECK_THROWS_AS(pipeline.simplify(untouched), Error);
}

TEST_CASE("compound level 1 is the first atom byte for byte") {
  auto pipeline = make_pipeline(11);
  InstructionSequence seq =
      pipeline.simplify_all(pipeline.generate_sequence(seeded_image(11)));
  CompoundInstruction c1 = pipeline.compound(seq, 1);
  CHECK(c1.text == seq.atoms[0].text);
  CHECK(c1.level == 1);
  CHECK(c1.source_atom_ids == std::vector<std::string>{seq.atoms[0].id});
}

TEST_CASE("compound range and precondition errors") {
  auto pipeline = make_pipeline(12);
  InstructionSequence seq = pipeline.generate_sequence(seeded_image(12));
  // Atoms not yet simplified.
  CHECK_THROWS_AS(pipeline.compound(seq, 1), Error);
  seq = pipeline.simplify_all(std::move(seq));
  CHECK_THROWS_AS(pipeline.compound(seq, 0), Error);
  CHECK_THROWS_AS(
      pipeline.compound(seq, static_cast<int>(seq.atoms.size()) + 1), Error);

  InstructionSequence empty;
  empty.image = seq.image;
  CHECK_THROWS_AS(pipeline.compound_all(empty), Error);
}

TEST_CASE("compound_all yields nested source ids at every level") {
  PipelineConfig cfg;
  cfg.sequence_length = 8;
  auto pipeline = make_pipeline(13, cfg);
  InstructionSequence seq =
      pipeline.simplify_all(pipeline.generate_sequence(seeded_image(13)));
  auto compounds = pipeline.compound_all(seq);
  REQUIRE(compounds.size() == 8);
  for (std::size_t i = 0; i < compounds.size(); ++i) {
    CHECK(compounds[i].level == static_cast<int>(i) + 1);
    CHECK(compounds[i].source_atom_ids.size() == i + 1);
    if (i > 0) {
      // Strict prefix extension of the previous level.
      for (std::size_t k = 0; k < i; ++k)
        CHECK(compounds[i].source_atom_ids[k] ==
              compounds[i - 1].source_atom_ids[k]);
    }
    CHECK(filter_check(compounds[i].text, PipelineStage::compounding, cfg,
                       compounds[i].level)
              .pass);
  }
  // Single-atom sequence collapses to the atom.
  InstructionSequence one;
  one.image = seq.image;
  one.atoms = {seq.atoms[0]};
  auto single = pipeline.compound_all(one);
  REQUIRE(single.size() == 1);
  CHECK(single[0].text == seq.atoms[0].text);
}

TEST_CASE("pipeline output is a pure function of image, config, and seed") {
  PipelineConfig cfg;
  cfg.sequence_length = 6;
  auto run = [&](std::uint64_t seed) {
    auto pipeline = make_pipeline(seed, cfg);
    InstructionSequence seq =
        pipeline.simplify_all(pipeline.generate_sequence(seeded_image(99)));
    auto compounds = pipeline.compound_all(seq);
    Json j = Json{{"seq", seq}, {"compounds", compounds}};
    return canonical_dump(j);
  };
  CHECK(run(5) == run(5));
  CHECK(run(5) != run(6));
}

TEST_SUITE_END();
