#include "editbench/gateway/chat.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "editbench/core/error.hpp"
#include "editbench/gateway/markers.hpp"

namespace editbench {

ContentPart ContentPart::make_text(std::string t) {
  ContentPart p;
  p.kind = Kind::text;
  p.text = std::move(t);
  return p;
}

ContentPart ContentPart::make_image(ImageRef ref) {
  ContentPart p;
  p.kind = Kind::image;
  p.image = std::move(ref);
  return p;
}

ChatMessage ChatMessage::text_message(ChatRole role, std::string text) {
  ChatMessage m;
  m.role = role;
  m.content.push_back(ContentPart::make_text(std::move(text)));
  return m;
}

void ChatRequest::validate() const {
  if (temperature < 0.0)
    throw validation_error("ChatRequest: temperature must be >= 0");
  if (!(probability_mass > 0.0 && probability_mass <= 1.0))
    throw validation_error("ChatRequest: probability_mass must be in (0,1]");
  if (messages.empty())
    throw validation_error("ChatRequest: messages must be nonempty");
  if (max_tokens <= 0)
    throw validation_error("ChatRequest: max_tokens must be positive");
  if (attempt < 0) throw validation_error("ChatRequest: attempt must be >= 0");
}

namespace {

std::string role_name(ChatRole role) {
  switch (role) {
    case ChatRole::system:
      return "system";
    case ChatRole::user:
      return "user";
    case ChatRole::assistant:
      return "assistant";
  }
  return "user";
}

ChatRole role_from_name(const std::string& name) {
  if (name == "system") return ChatRole::system;
  if (name == "user") return ChatRole::user;
  if (name == "assistant") return ChatRole::assistant;
  throw validation_error("unknown chat role: " + name);
}

}  // namespace

void to_json(Json& j, const ChatRequest& req) {
  Json messages = Json::array();
  for (const auto& m : req.messages) {
    Json parts = Json::array();
    for (const auto& p : m.content) {
      if (p.kind == ContentPart::Kind::text)
        parts.push_back({{"type", "text"}, {"text", p.text}});
      else
        parts.push_back({{"type", "image"}, {"image", p.image.value()}});
    }
    messages.push_back({{"role", role_name(m.role)}, {"content", parts}});
  }
  j = Json{{"system_prompt", req.system_prompt},
           {"messages", messages},
           {"temperature", req.temperature},
           {"probability_mass", req.probability_mass},
           {"want_logprobs", req.want_logprobs},
           {"max_tokens", req.max_tokens},
           {"run_seed", req.run_seed},
           {"attempt", req.attempt}};
}

void from_json(const Json& j, ChatRequest& req) {
  req = ChatRequest{};
  j.at("system_prompt").get_to(req.system_prompt);
  for (const auto& jm : j.at("messages")) {
    ChatMessage m;
    m.role = role_from_name(jm.at("role").get<std::string>());
    for (const auto& jp : jm.at("content")) {
      std::string type = jp.at("type").get<std::string>();
      if (type == "text")
        m.content.push_back(
            ContentPart::make_text(jp.at("text").get<std::string>()));
      else if (type == "image")
        m.content.push_back(
            ContentPart::make_image(jp.at("image").get<ImageRef>()));
      else
        throw validation_error("unknown content part type: " + type);
    }
    req.messages.push_back(std::move(m));
  }
  j.at("temperature").get_to(req.temperature);
  j.at("probability_mass").get_to(req.probability_mass);
  j.at("want_logprobs").get_to(req.want_logprobs);
  j.at("max_tokens").get_to(req.max_tokens);
  j.at("run_seed").get_to(req.run_seed);
  j.at("attempt").get_to(req.attempt);
}

void to_json(Json& j, const ChatResponse& resp) {
  j = Json{{"text", resp.text},
           {"backend_id", resp.backend_id},
           {"cached", resp.cached}};
  if (resp.first_token_logprobs.has_value())
    j["first_token_logprobs"] = *resp.first_token_logprobs;
  else
    j["first_token_logprobs"] = nullptr;
}

void from_json(const Json& j, ChatResponse& resp) {
  resp = ChatResponse{};
  j.at("text").get_to(resp.text);
  j.at("backend_id").get_to(resp.backend_id);
  j.at("cached").get_to(resp.cached);
  const auto& lp = j.at("first_token_logprobs");
  if (!lp.is_null())
    resp.first_token_logprobs = lp.get<std::map<std::string, double>>();
}

std::string canonical_request_json(const ChatRequest& req) {
  Json j = req;
  return canonical_dump(j);
}

std::string prompt_text(const ChatRequest& req) {
  std::string out = req.system_prompt;
  for (const auto& m : req.messages) {
    for (const auto& p : m.content) {
      if (p.kind == ContentPart::Kind::text) {
        if (!out.empty()) out += '\n';
        out += p.text;
      } else if (p.image.has_value()) {
        if (!out.empty()) out += '\n';
        out += image_block("attachment", *p.image);
      }
    }
  }
  return out;
}

TokenProbPair extract_yes_no(const ChatResponse& resp) {
  if (!resp.first_token_logprobs.has_value())
    throw validation_error("extract_yes_no: logprobs not present");
  auto normalize = [](std::string token) {
    auto issp = [](char c) {
      return std::isspace(static_cast<unsigned char>(c)) != 0;
    };
    while (!token.empty() && issp(token.front())) token.erase(token.begin());
    while (!token.empty() && issp(token.back())) token.pop_back();
    while (!token.empty() &&
           std::string(".,!?;:").find(token.back()) != std::string::npos)
      token.pop_back();
    std::transform(token.begin(), token.end(), token.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return token;
  };
  TokenProbPair pair;
  bool saw_variant = false;
  for (const auto& [token, logprob] : *resp.first_token_logprobs) {
    std::string norm = normalize(token);
    if (norm == "yes") {
      pair.prob_yes += std::exp(logprob);
      saw_variant = true;
    } else if (norm == "no") {
      pair.prob_no += std::exp(logprob);
      saw_variant = true;
    }
  }
  if (!saw_variant)
    throw parse_error("extract_yes_no: neither yes nor no among tokens");
  return pair;
}

// --- markers -------------------------------------------------------------

std::string stage1_count_line(int n) {
  return std::string(kStage1CountPrefix) + std::to_string(n) +
         " atomic editing instructions for this image.";
}

std::string image_block(std::string_view role, const ImageRef& ref) {
  std::string head = "[IMAGE role=" + std::string(role);
  if (ref.kind == ImageKind::scene) {
    Json j = ref.scene.value();
    return head + " kind=scene id=" + ref.id + "]\n" + canonical_dump(j) +
           "\n[/IMAGE]";
  }
  std::string kind = ref.kind == ImageKind::file_path ? "file-path" : "url";
  return head + " kind=" + kind + " id=" + ref.id +
         " location=" + ref.location + "]";
}

std::optional<ParsedImageBlock> find_image_block(std::string_view text,
                                                 std::string_view role) {
  std::string marker = "[IMAGE role=" + std::string(role) + " ";
  auto start = text.find(marker);
  if (start == std::string_view::npos) return std::nullopt;
  auto header_end = text.find(']', start);
  if (header_end == std::string_view::npos) return std::nullopt;
  std::string header(text.substr(start, header_end - start));

  ParsedImageBlock block;
  block.role = std::string(role);
  auto id_pos = header.find("id=");
  if (id_pos == std::string::npos) return std::nullopt;
  auto id_end = header.find(' ', id_pos);
  block.id = header.substr(id_pos + 3, id_end == std::string::npos
                                           ? std::string::npos
                                           : id_end - id_pos - 3);

  if (header.find("kind=scene") != std::string::npos) {
    auto body_start = header_end + 2;  // skip "]\n"
    auto body_end = text.find("\n[/IMAGE]", header_end);
    if (body_start >= text.size() || body_end == std::string_view::npos)
      return std::nullopt;
    auto body = text.substr(body_start, body_end - body_start);
    try {
      block.scene = Json::parse(body).get<SceneState>();
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  return block;
}

std::optional<int> parse_stage1_count(std::string_view text) {
  auto pos = text.find(kStage1CountPrefix);
  if (pos == std::string_view::npos) return std::nullopt;
  pos += kStage1CountPrefix.size();
  int value = 0;
  bool any = false;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    value = value * 10 + (text[pos] - '0');
    any = true;
    ++pos;
  }
  if (!any) return std::nullopt;
  return value;
}

}  // namespace editbench
