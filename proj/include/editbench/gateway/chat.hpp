#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "editbench/core/json_io.hpp"
#include "editbench/core/types.hpp"

namespace editbench {

enum class ChatRole { system, user, assistant };

// One piece of a chat message: plain text or an image attachment. Scene
// images are inlined as text blocks by the prompt builders, so attachments
// only occur for file/url images headed to remote backends.
struct ContentPart {
  enum class Kind { text, image };
  Kind kind = Kind::text;
  std::string text;
  std::optional<ImageRef> image;

  static ContentPart make_text(std::string t);
  static ContentPart make_image(ImageRef ref);
};

struct ChatMessage {
  ChatRole role = ChatRole::user;
  std::vector<ContentPart> content;

  static ChatMessage text_message(ChatRole role, std::string text);
};

struct ChatRequest {
  std::string system_prompt;
  std::vector<ChatMessage> messages;
  double temperature = 1.0;
  double probability_mass = 1.0;  // nucleus cutoff; 1e-7 = near-deterministic
  bool want_logprobs = false;
  int max_tokens = 1024;
  std::uint64_t run_seed = 0;
  int attempt = 0;

  void validate() const;
};

struct ChatResponse {
  std::string text;
  std::optional<std::map<std::string, double>> first_token_logprobs;
  std::string backend_id;
  bool cached = false;
};

struct TokenProbPair {
  double prob_yes = 0.0;
  double prob_no = 0.0;
};

// Sums exp(logprob) over first-position tokens whose case-folded, trimmed,
// punctuation-stripped form is "yes" / "no".
TokenProbPair extract_yes_no(const ChatResponse& resp);

void to_json(Json& j, const ChatRequest& req);
void from_json(const Json& j, ChatRequest& req);
void to_json(Json& j, const ChatResponse& resp);
void from_json(const Json& j, ChatResponse& resp);

std::string canonical_request_json(const ChatRequest& req);

// Concatenation of the system prompt and every text part, in order. This is
// what prompt-structure checks and the simulated backend inspect.
std::string prompt_text(const ChatRequest& req);

}  // namespace editbench
