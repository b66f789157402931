#pragma once

#include <string>

#include <json.hpp>

#include "editbench/core/types.hpp"

namespace editbench {

using Json = nlohmann::json;

// Canonical serialization: nlohmann objects keep keys sorted and doubles
// round-trip, so dump() of the same value is byte-stable. All ids, cache
// keys, and config hashes are built from this.
std::string canonical_dump(const Json& j);

void to_json(Json& j, const SceneElement& e);
void from_json(const Json& j, SceneElement& e);
void to_json(Json& j, const SceneState& s);
void from_json(const Json& j, SceneState& s);

void to_json(Json& j, const ImageRef& ref);
void from_json(const Json& j, ImageRef& ref);

void to_json(Json& j, const Provenance& p);
void from_json(const Json& j, Provenance& p);
void to_json(Json& j, const AtomicInstruction& a);
void from_json(const Json& j, AtomicInstruction& a);
void to_json(Json& j, const InstructionSequence& s);
void from_json(const Json& j, InstructionSequence& s);
void to_json(Json& j, const CompoundInstruction& c);
void from_json(const Json& j, CompoundInstruction& c);

void to_json(Json& j, const ScoreTriple& t);
void from_json(const Json& j, ScoreTriple& t);
void to_json(Json& j, const GradeSummary& g);
void from_json(const Json& j, GradeSummary& g);

std::string op_type_name(AtomicOperationType type);
AtomicOperationType op_type_from_json_name(const std::string& name);

}  // namespace editbench
