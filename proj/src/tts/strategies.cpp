#include "editbench/tts/strategies.hpp"

#include "editbench/core/concurrency.hpp"

namespace editbench {

namespace {

void check_capabilities(EditorBackend& editor, const ImageRef& x,
                        const std::string& instruction) {
  auto caps = editor.capabilities();
  if (caps.supported_kinds.find(x.kind) == caps.supported_kinds.end())
    throw validation_error("editor " + editor.id() +
                           " does not accept this image kind");
  if (instruction.size() > caps.max_instruction_length)
    throw validation_error("instruction exceeds editor limit of " +
                           std::to_string(caps.max_instruction_length) +
                           " characters");
}

std::size_t argmax_candidate(const std::vector<Candidate>& candidates) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < candidates.size(); ++j)
    if (candidates[j].grade.overall > candidates[best].grade.overall) best = j;
  return best;
}

}  // namespace

EditResult direct_edit(EditorBackend& editor, const ImageRef& x,
                       const CompoundInstruction& T) {
  x.validate();
  check_capabilities(editor, x, T.text);
  ImageRef output = editor.apply(x, T.text, 0);
  EditResult result;
  result.output = output;
  result.trace.steps.push_back(EditStep{T.text, x, output, std::nullopt, 1,
                                        output.id == x.id});
  return result;
}

EditResult sequential_edit(EditorBackend& editor, const ImageRef& x,
                           const std::vector<AtomicInstruction>& atoms) {
  x.validate();
  if (atoms.empty())
    throw validation_error("sequential_edit: atoms must be nonempty");
  EditTrace trace;
  ImageRef current = x;
  for (const auto& atom : atoms) {
    check_capabilities(editor, current, atom.text);
    ImageRef next;
    try {
      next = editor.apply(current, atom.text, 0);
    } catch (const Error& e) {
      throw SequentialEditError(
          "sequential_edit failed at step " +
              std::to_string(trace.steps.size() + 1) + ": " + e.what(),
          std::move(trace));
    }
    trace.steps.push_back(EditStep{atom.text, current, next, std::nullopt, 1,
                                   next.id == current.id});
    current = next;
  }
  return EditResult{current, std::move(trace)};
}

BestOfNResult best_of_n_direct(EditorBackend& editor, const Grader& grader,
                               const ImageRef& x, const CompoundInstruction& T,
                               int n) {
  x.validate();
  if (n < 1) throw validation_error("best_of_n_direct: n must be >= 1");
  check_capabilities(editor, x, T.text);

  std::vector<Candidate> candidates(static_cast<std::size_t>(n));
  parallel_for_indexed(static_cast<std::size_t>(n), 4, [&](std::size_t j) {
    ImageRef image = editor.apply(x, T.text, static_cast<int>(j));
    GradeSummary grade = grader.grade_all(x, image, T);
    candidates[j] = Candidate{std::move(image), std::move(grade),
                              static_cast<int>(j)};
  });

  std::size_t best = argmax_candidate(candidates);
  BestOfNResult result;
  result.output = candidates[best].image;
  result.trace.steps.push_back(EditStep{T.text, x, result.output,
                                        candidates[best].grade, n,
                                        result.output.id == x.id});
  result.candidates = std::move(candidates);
  return result;
}

EditResult best_of_n_sequential(
    EditorBackend& editor, const Grader& grader, const ImageRef& x,
    const std::vector<AtomicInstruction>& atoms,
    const std::vector<CompoundInstruction>& compounds, int n) {
  x.validate();
  if (n < 1) throw validation_error("best_of_n_sequential: n must be >= 1");
  if (atoms.empty())
    throw validation_error("best_of_n_sequential: atoms must be nonempty");
  if (compounds.size() != atoms.size())
    throw validation_error(
        "best_of_n_sequential: compounds must match atoms one per level");
  for (std::size_t i = 0; i < compounds.size(); ++i) {
    if (compounds[i].level != static_cast<int>(i) + 1)
      throw validation_error("best_of_n_sequential: compound level mismatch");
    if (compounds[i].source_atom_ids.size() != i + 1)
      throw validation_error(
          "best_of_n_sequential: compound source ids mismatch");
    for (std::size_t k = 0; k <= i; ++k)
      if (compounds[i].source_atom_ids[k] != atoms[k].id)
        throw validation_error(
            "best_of_n_sequential: compounds built over different atoms");
  }

  EditTrace trace;
  ImageRef current = x;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    check_capabilities(editor, current, atoms[i].text);
    std::vector<Candidate> candidates(static_cast<std::size_t>(n));
    parallel_for_indexed(static_cast<std::size_t>(n), 4, [&](std::size_t j) {
      ImageRef image =
          editor.apply(current, atoms[i].text, static_cast<int>(j));
      // The candidate is judged as the output of the original input under
      // the cumulative compound, not as a one-step edit.
      GradeSummary grade = grader.grade_all(x, image, compounds[i]);
      candidates[j] = Candidate{std::move(image), std::move(grade),
                                static_cast<int>(j)};
    });
    std::size_t best = argmax_candidate(candidates);
    trace.steps.push_back(EditStep{atoms[i].text, current,
                                   candidates[best].image,
                                   candidates[best].grade, n,
                                   candidates[best].image.id == current.id});
    current = candidates[best].image;
  }
  return EditResult{current, std::move(trace)};
}

void to_json(Json& j, const EditStep& s) {
  j = Json{{"instruction", s.instruction},
           {"before", s.before},
           {"after", s.after},
           {"candidates_considered", s.candidates_considered},
           {"no_op", s.no_op}};
  if (s.grade.has_value())
    j["grade"] = *s.grade;
  else
    j["grade"] = nullptr;
}

void from_json(const Json& j, EditStep& s) {
  s = EditStep{};
  j.at("instruction").get_to(s.instruction);
  j.at("before").get_to(s.before);
  j.at("after").get_to(s.after);
  j.at("candidates_considered").get_to(s.candidates_considered);
  j.at("no_op").get_to(s.no_op);
  if (!j.at("grade").is_null()) s.grade = j.at("grade").get<GradeSummary>();
}

void to_json(Json& j, const EditTrace& t) { j = Json{{"steps", t.steps}}; }

void from_json(const Json& j, EditTrace& t) { j.at("steps").get_to(t.steps); }

void to_json(Json& j, const Candidate& c) {
  j = Json{{"image", c.image}, {"grade", c.grade}, {"index", c.index}};
}

void from_json(const Json& j, Candidate& c) {
  j.at("image").get_to(c.image);
  j.at("grade").get_to(c.grade);
  j.at("index").get_to(c.index);
}

}  // namespace editbench
