#include <doctest.h>

#include <atomic>
#include <cctype>
#include <cmath>
#include <sstream>
#include <thread>

#include "editbench/core/concurrency.hpp"
#include "editbench/gateway/markers.hpp"

#include "support.hpp"

using namespace editbench;

namespace {

ChatRequest score_request(std::uint64_t seed, int attempt,
                          const std::string& extra = "") {
  ChatRequest req;
  req.system_prompt = "You grade things." + extra;
  req.messages.push_back(ChatMessage::text_message(
      ChatRole::user, std::string(kScoreDirective)));
  req.run_seed = seed;
  req.attempt = attempt;
  return req;
}

class FlakyBackend : public ChatBackend {
 public:
  FlakyBackend(int failures_before_success)
      : remaining_(failures_before_success) {}
  std::string id() const override { return "flaky"; }
  bool supports_logprobs() const override { return false; }
  ChatResponse complete(const ChatRequest&) override {
    ++calls;
    if (remaining_-- > 0) throw TransportError("transient");
    ChatResponse resp;
    resp.text = "Score: 5";
    resp.backend_id = id();
    return resp;
  }
  int calls = 0;

 private:
  int remaining_;
};

}  // namespace

TEST_SUITE_BEGIN("gateway");

TEST_CASE("simulated backend is deterministic across instances") {
  auto latents = constant_latent_provider({7.0, 1.3});
  ChatRequest req = score_request(42, 0);
  ChatResponse a = SimulatedChatBackend({}, latents).complete(req);
  ChatResponse b = SimulatedChatBackend({}, latents).complete(req);
  CHECK(a.text == b.text);

  // Distinct attempts generally differ once noise is on.
  ChatResponse c =
      SimulatedChatBackend({}, latents).complete(score_request(42, 1));
  CHECK(a.text != c.text);
}

TEST_CASE("zero-noise grading emits the exact latent") {
  auto resp = simulate(score_request(1, 0), {7.0, 0.0});
  CHECK(resp.text.find("Score: 7") != std::string::npos);
}

TEST_CASE("logistic midpoint at quality 5") {
  ChatRequest req = score_request(9, 0);
  req.want_logprobs = true;
  auto resp = simulate(req, {5.0, 0.0});
  auto pair = extract_yes_no(resp);
  CHECK(pair.prob_yes / (pair.prob_yes + pair.prob_no) ==
        doctest::Approx(0.5));
}

TEST_CASE("cache returns identical text and marks hits") {
  auto dir = test::temp_dir("cache");
  GatewayOptions options;
  options.cache_dir = dir;
  auto gw = test::sim_gateway(constant_latent_provider({6.0, 2.0}), {},
                              std::move(options));
  ChatRequest req = score_request(7, 3);
  ChatResponse first = gw->complete(req);
  CHECK_FALSE(first.cached);
  ChatResponse second = gw->complete(req);
  CHECK(second.cached);
  CHECK(second.text == first.text);

  // A fresh gateway over the same directory replays from disk.
  GatewayOptions options2;
  options2.cache_dir = dir;
  auto gw2 = test::sim_gateway(constant_latent_provider({6.0, 2.0}), {},
                               std::move(options2));
  ChatResponse third = gw2->complete(req);
  CHECK(third.cached);
  CHECK(third.text == first.text);
}

TEST_CASE("cache keys separate backends and attempts") {
  auto gw = test::sim_gateway();
  ChatRequest a = score_request(7, 0);
  ChatRequest b = score_request(7, 1);
  CHECK(gw->cache_key(a) != gw->cache_key(b));

  SimulatedBackendConfig other;
  other.id = "sim-llm-2";
  auto gw2 = test::sim_gateway(nullptr, other);
  CHECK(gw->cache_key(a) != gw2->cache_key(a));
}

TEST_CASE("logprobs request against unsupporting backend fails") {
  auto backend = std::make_shared<FlakyBackend>(0);
  Gateway gw(backend, {});
  ChatRequest req = score_request(1, 0);
  req.want_logprobs = true;
  CHECK_THROWS_AS(gw.complete(req), Error);
}

TEST_CASE("request validation") {
  auto gw = test::sim_gateway();
  ChatRequest req = score_request(1, 0);
  req.temperature = -0.5;
  CHECK_THROWS_AS(gw->complete(req), Error);
  req = score_request(1, 0);
  req.probability_mass = 0.0;
  CHECK_THROWS_AS(gw->complete(req), Error);
  req = score_request(1, 0);
  req.messages.clear();
  CHECK_THROWS_AS(gw->complete(req), Error);
}

TEST_CASE("transport failures retry with exponential backoff") {
  auto backend = std::make_shared<FlakyBackend>(3);
  GatewayOptions options;
  std::vector<std::chrono::milliseconds> delays;
  options.retry.sleeper = [&](std::chrono::milliseconds d) {
    delays.push_back(d);
  };
  options.retry.base_delay = std::chrono::milliseconds(1000);
  Gateway gw(backend, std::move(options));
  ChatResponse resp = gw.complete(score_request(1, 0));
  CHECK(resp.text == "Score: 5");
  CHECK(backend->calls == 4);
  REQUIRE(delays.size() == 3);
  for (std::size_t k = 0; k < delays.size(); ++k) {
    double base = 1000.0 * static_cast<double>(1 << k);
    CHECK(static_cast<double>(delays[k].count()) >= base * 0.8 - 1);
    CHECK(static_cast<double>(delays[k].count()) <= base * 1.2 + 1);
  }
}

TEST_CASE("retries are exhausted after the attempt budget") {
  auto backend = std::make_shared<FlakyBackend>(100);
  GatewayOptions options;
  options.retry.sleeper = [](std::chrono::milliseconds) {};
  Gateway gw(backend, std::move(options));
  CHECK_THROWS_AS(gw.complete(score_request(1, 0)), TransportError);
  CHECK(backend->calls == 5);
}

TEST_CASE("extract_yes_no folds case and trims") {
  ChatResponse resp;
  resp.first_token_logprobs = std::map<std::string, double>{
      {"Yes", std::log(0.6)}, {" no", std::log(0.2)}, {"Maybe", std::log(0.1)}};
  auto pair = extract_yes_no(resp);
  CHECK(pair.prob_yes == doctest::Approx(0.6));
  CHECK(pair.prob_no == doctest::Approx(0.2));

  resp.first_token_logprobs =
      std::map<std::string, double>{{"maybe", std::log(0.9)}};
  CHECK_THROWS_AS(extract_yes_no(resp), Error);

  resp.first_token_logprobs = std::map<std::string, double>{
      {"yes", std::log(0.03)}, {"No", std::log(0.01)}};
  pair = extract_yes_no(resp);
  CHECK(pair.prob_yes == doctest::Approx(0.03));
  CHECK(pair.prob_no == doctest::Approx(0.01));

  resp.first_token_logprobs =
      std::map<std::string, double>{{"Yes,", std::log(0.5)}};
  CHECK(extract_yes_no(resp).prob_yes == doctest::Approx(0.5));
}

TEST_CASE("responses are independent of concurrent interleaving") {
  auto latents = constant_latent_provider({6.0, 1.5});
  auto gw = test::sim_gateway(latents);

  std::vector<std::string> sequential(24);
  for (int i = 0; i < 24; ++i)
    sequential[static_cast<std::size_t>(i)] =
        gw->complete(score_request(11, i)).text;

  std::vector<std::string> threaded(24);
  parallel_for_indexed(24, 8, [&](std::size_t i) {
    threaded[i] =
        gw->complete(score_request(11, static_cast<int>(i))).text;
  });
  CHECK(threaded == sequential);
}

TEST_CASE("stage-1 simulation emits parseable numbered lines") {
  SceneState scene;
  scene.elements.push_back({"e1", "cat", {}});
  ImageRef image = ImageRef::from_scene(scene);

  ChatRequest req;
  req.system_prompt = "gen";
  req.messages.push_back(ChatMessage::text_message(
      ChatRole::user, image_block("input", image) + "\n" +
                          stage1_count_line(5) + "\n" +
                          std::string(kStage1Directive)));
  req.run_seed = 5;
  auto resp = simulate(req, {});
  int lines = 0;
  std::istringstream in(resp.text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && std::isdigit(static_cast<unsigned char>(line[0])))
      ++lines;
  CHECK(lines == 5);
}

TEST_SUITE_END();
