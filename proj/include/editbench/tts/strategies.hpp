#pragma once

#include <optional>
#include <string>
#include <vector>

#include "editbench/grader/grader.hpp"
#include "editbench/tts/editor.hpp"

namespace editbench {

struct EditStep {
  std::string instruction;
  ImageRef before;
  ImageRef after;
  std::optional<GradeSummary> grade;
  int candidates_considered = 1;
  bool no_op = false;  // output identical to input
};

struct EditTrace {
  std::vector<EditStep> steps;
};

struct Candidate {
  ImageRef image;
  GradeSummary grade;
  int index = 0;
};

struct EditResult {
  ImageRef output;
  EditTrace trace;
};

struct BestOfNResult {
  ImageRef output;
  std::vector<Candidate> candidates;
  EditTrace trace;
};

// Sequential failure carrying the trace of the steps that did complete.
class SequentialEditError : public Error {
 public:
  SequentialEditError(std::string message, EditTrace partial)
      : Error(ErrorKind::backend, std::move(message)),
        partial_trace(std::move(partial)) {}
  EditTrace partial_trace;
};

// One editor call with the full compound instruction.
EditResult direct_edit(EditorBackend& editor, const ImageRef& x,
                       const CompoundInstruction& T);

// Applies the atoms left to right, each output feeding the next.
EditResult sequential_edit(EditorBackend& editor, const ImageRef& x,
                           const std::vector<AtomicInstruction>& atoms);

// n candidates from distinct attempt indices; the argmax-overall candidate
// wins, ties to the lowest index.
BestOfNResult best_of_n_direct(EditorBackend& editor, const Grader& grader,
                               const ImageRef& x, const CompoundInstruction& T,
                               int n);

// Best-of-N inside the sequential loop. Candidates at step i are graded as
// outputs of the ORIGINAL input x under the cumulative compound
// compounds[i], never as one-step edits of the intermediate.
EditResult best_of_n_sequential(EditorBackend& editor, const Grader& grader,
                                const ImageRef& x,
                                const std::vector<AtomicInstruction>& atoms,
                                const std::vector<CompoundInstruction>& compounds,
                                int n);

void to_json(Json& j, const EditStep& s);
void from_json(const Json& j, EditStep& s);
void to_json(Json& j, const EditTrace& t);
void from_json(const Json& j, EditTrace& t);
void to_json(Json& j, const Candidate& c);
void from_json(const Json& j, Candidate& c);

}  // namespace editbench
