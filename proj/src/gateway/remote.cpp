#include "editbench/gateway/remote.hpp"

#include <cstdlib>
#include <fstream>

#include <httplib.h>

#include "editbench/core/json_io.hpp"
#include "editbench/gateway/markers.hpp"

namespace editbench {

namespace {

std::string base64_encode(const std::string& bytes) {
  static const char table[] =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  while (i + 2 < bytes.size()) {
    unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                 (static_cast<unsigned char>(bytes[i + 1]) << 8) |
                 static_cast<unsigned char>(bytes[i + 2]);
    out.push_back(table[(v >> 18) & 63]);
    out.push_back(table[(v >> 12) & 63]);
    out.push_back(table[(v >> 6) & 63]);
    out.push_back(table[v & 63]);
    i += 3;
  }
  if (i + 1 == bytes.size()) {
    unsigned v = static_cast<unsigned char>(bytes[i]) << 16;
    out.push_back(table[(v >> 18) & 63]);
    out.push_back(table[(v >> 12) & 63]);
    out += "==";
  } else if (i + 2 == bytes.size()) {
    unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                 (static_cast<unsigned char>(bytes[i + 1]) << 8);
    out.push_back(table[(v >> 18) & 63]);
    out.push_back(table[(v >> 12) & 63]);
    out.push_back(table[(v >> 6) & 63]);
    out += "=";
  }
  return out;
}

std::string mime_for(const std::string& path) {
  auto dot = path.rfind('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  if (ext == "jpg" || ext == "jpeg") return "image/jpeg";
  if (ext == "webp") return "image/webp";
  return "image/png";
}

Json image_part_json(const ImageRef& ref) {
  if (ref.kind == ImageKind::url)
    return Json{{"type", "image_url"}, {"image_url", {{"url", ref.location}}}};
  if (ref.kind == ImageKind::file_path) {
    std::ifstream file(ref.location, std::ios::binary);
    if (!file) throw io_error("cannot read image file " + ref.location);
    std::string bytes((std::istreambuf_iterator<char>(file)),
                      std::istreambuf_iterator<char>());
    std::string url = "data:" + mime_for(ref.location) + ";base64," +
                      base64_encode(bytes);
    return Json{{"type", "image_url"}, {"image_url", {{"url", url}}}};
  }
  // Scene payloads are text-only by construction; keep remote calls working
  // if one slips through.
  return Json{{"type", "text"}, {"text", image_block("attachment", ref)}};
}

std::string role_string(ChatRole role) {
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

}  // namespace

RemoteChatBackend::RemoteChatBackend(RemoteChatConfig config)
    : config_(std::move(config)) {
  if (config_.endpoint.empty())
    throw validation_error("remote chat backend: endpoint not configured");
}

ChatResponse RemoteChatBackend::complete(const ChatRequest& req) {
  Json messages = Json::array();
  if (!req.system_prompt.empty())
    messages.push_back({{"role", "system"}, {"content", req.system_prompt}});
  for (const auto& m : req.messages) {
    Json parts = Json::array();
    for (const auto& p : m.content) {
      if (p.kind == ContentPart::Kind::text)
        parts.push_back({{"type", "text"}, {"text", p.text}});
      else
        parts.push_back(image_part_json(p.image.value()));
    }
    messages.push_back({{"role", role_string(m.role)}, {"content", parts}});
  }
  Json body = {
      {"model", config_.model},
      {"messages", messages},
      {"temperature", req.temperature},
      {"top_p", req.probability_mass},
      {"max_tokens", req.max_tokens},
  };
  if (req.want_logprobs) {
    body["logprobs"] = true;
    body["top_logprobs"] = config_.top_logprobs;
  }

  httplib::Client client(config_.endpoint);
  client.set_connection_timeout(config_.timeout_seconds);
  client.set_read_timeout(config_.timeout_seconds);
  httplib::Headers headers;
  if (!config_.api_key_env.empty()) {
    const char* key = std::getenv(config_.api_key_env.c_str());
    if (key == nullptr || *key == '\0')
      throw AuthError("environment variable " + config_.api_key_env +
                      " is not set");
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  auto res = client.Post(config_.path, headers, body.dump(),
                         "application/json");
  if (!res)
    throw TransportError("transport failure: " +
                         httplib::to_string(res.error()));
  if (res->status == 429 || res->status >= 500)
    throw TransportError("retryable http status " +
                         std::to_string(res->status));
  if (res->status == 401 || res->status == 403)
    throw AuthError("authentication rejected (http " +
                    std::to_string(res->status) + ")");
  if (res->status != 200)
    throw backend_error("http status " + std::to_string(res->status) + ": " +
                        res->body);

  ChatResponse out;
  out.backend_id = config_.id;
  try {
    Json j = Json::parse(res->body);
    const Json& choice = j.at("choices").at(0);
    out.text = choice.at("message").at("content").get<std::string>();
    if (req.want_logprobs) {
      std::map<std::string, double> probs;
      const Json& top =
          choice.at("logprobs").at("content").at(0).at("top_logprobs");
      for (const auto& entry : top)
        probs[entry.at("token").get<std::string>()] =
            entry.at("logprob").get<double>();
      out.first_token_logprobs = std::move(probs);
    }
  } catch (const Json::exception& e) {
    throw parse_error(std::string("malformed backend payload: ") + e.what());
  }
  return out;
}

}  // namespace editbench
