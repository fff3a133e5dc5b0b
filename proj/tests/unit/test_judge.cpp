#include <doctest.h>

#include <atomic>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mocr/common/error.hpp"
#include "mocr/judge/judge.hpp"

using namespace mocr;
using namespace mocr::judge;

namespace {

JudgeRequest sample_request() {
  JudgeRequest request;
  request.image_png = {0x89, 0x50, 0x4E, 0x47};
  request.first = "ALPHA transcription";
  request.second = "BETA transcription";
  return request;
}

std::string chat_body(const std::string& content) {
  // Minimal chat-completion response shape; content is the judge's text.
  nlohmann::json message{{"role", "assistant"}, {"content", content}};
  nlohmann::json body{{"choices", nlohmann::json::array({{{"message", message}}})}};
  return body.dump();
}

JudgeEndpointConfig fast_config() {
  JudgeEndpointConfig config;
  config.base_url = "http://judge.test";
  config.model = "judge-model";
  config.max_retries = 2;
  config.backoff_base_seconds = 0.0;  // tests must not sleep
  return config;
}

}  // namespace

TEST_SUITE("judge.prompt") {
  TEST_CASE("verdict names round-trip; parsing folds case and rejects junk") {
    for (auto verdict : {TrialVerdict::kFirst, TrialVerdict::kSecond, TrialVerdict::kTie})
      CHECK(verdict_from(verdict_name(verdict)) == verdict);
    CHECK(verdict_from("FIRST") == TrialVerdict::kFirst);
    CHECK(verdict_from("Tie") == TrialVerdict::kTie);
    CHECK_FALSE(verdict_from("winner").has_value());
    CHECK_FALSE(verdict_from("").has_value());
  }

  TEST_CASE("default template carries both slots and demands a JSON verdict") {
    const std::string_view text = default_prompt_template();
    CHECK(text.find("{{candidate_1}}") != std::string_view::npos);
    CHECK(text.find("{{candidate_2}}") != std::string_view::npos);
    CHECK(text.find("winner") != std::string_view::npos);
  }

  TEST_CASE("render_prompt substitutes candidates in presentation order") {
    const JudgeRequest request = sample_request();
    const PromptPayload payload =
        render_prompt("first: {{candidate_1}} | second: {{candidate_2}}", request);
    CHECK(payload.text == "first: ALPHA transcription | second: BETA transcription");
    CHECK(payload.image == request.image_png);

    JudgeRequest swapped = request;
    std::swap(swapped.first, swapped.second);
    const PromptPayload payload2 =
        render_prompt("first: {{candidate_1}} | second: {{candidate_2}}", swapped);
    CHECK(payload2.text == "first: BETA transcription | second: ALPHA transcription");
  }

  TEST_CASE("render_prompt replaces repeated placeholders everywhere") {
    const PromptPayload payload =
        render_prompt("{{candidate_1}} vs {{candidate_2}} ({{candidate_1}} again)",
                      sample_request());
    CHECK(payload.text ==
          "ALPHA transcription vs BETA transcription (ALPHA transcription again)");
  }

  TEST_CASE("render_prompt names the missing placeholder") {
    for (const char* broken : {"only {{candidate_1}} here", "only {{candidate_2}} here",
                               "no placeholders at all"}) {
      CHECK_THROWS_AS(render_prompt(broken, sample_request()), ConfigError);
    }
    try {
      render_prompt("only {{candidate_1}} here", sample_request());
      FAIL("expected ConfigError");
    } catch (const ConfigError& error) {
      CHECK(std::string(error.what()).find("{{candidate_2}}") != std::string::npos);
    }
  }
}

TEST_SUITE("judge.verdict") {
  TEST_CASE("bare verdict object parses") {
    const auto parsed = parse_verdict(R"({"winner":"first"})");
    REQUIRE(parsed.has_value());
    CHECK(parsed->verdict == TrialVerdict::kFirst);
    CHECK(parsed->explanation.empty());
  }

  TEST_CASE("verdict embedded in prose parses, with its reason") {
    const auto parsed = parse_verdict(
        R"(Sure! After careful review: {"winner": "second", "reason": "better tables"} hope that helps.)");
    REQUIRE(parsed.has_value());
    CHECK(parsed->verdict == TrialVerdict::kSecond);
    CHECK(parsed->explanation == "better tables");
  }

  TEST_CASE("winner matching is case-insensitive; explanation key may vary") {
    const auto upper = parse_verdict(R"({"winner":"TIE","explanation":"equal quality"})");
    REQUIRE(upper.has_value());
    CHECK(upper->verdict == TrialVerdict::kTie);
    CHECK(upper->explanation == "equal quality");
  }

  TEST_CASE("braces inside strings do not derail the scan") {
    const auto parsed =
        parse_verdict(R"({"reason": "A kept the {curly} figure } intact", "winner": "first"})");
    REQUIRE(parsed.has_value());
    CHECK(parsed->verdict == TrialVerdict::kFirst);
  }

  TEST_CASE("scan skips ill-formed or verdict-free objects") {
    const auto parsed = parse_verdict(
        R"(thinking {not json} then {"winner":"maybe"} finally {"winner":"tie"})");
    REQUIRE(parsed.has_value());
    CHECK(parsed->verdict == TrialVerdict::kTie);
  }

  TEST_CASE("free text without a verdict yields nothing") {
    CHECK_FALSE(parse_verdict("The first transcription is clearly better.").has_value());
    CHECK_FALSE(parse_verdict("").has_value());
    CHECK_FALSE(parse_verdict(R"({"winner": 1})").has_value());
    CHECK_FALSE(parse_verdict(R"({"loser":"first"})").has_value());
    CHECK_FALSE(parse_verdict("{ unterminated").has_value());
  }
}

TEST_SUITE("judge.mock") {
  TEST_CASE("fixed modes ignore content") {
    MockJudge first(MockJudge::Mode::kAlwaysFirst);
    MockJudge second(MockJudge::Mode::kAlwaysSecond);
    MockJudge tie(MockJudge::Mode::kAlwaysTie);
    const JudgeRequest request = sample_request();
    CHECK(first.judge(request).verdict == TrialVerdict::kFirst);
    CHECK(second.judge(request).verdict == TrialVerdict::kSecond);
    CHECK(tie.judge(request).verdict == TrialVerdict::kTie);
  }

  TEST_CASE("prefer-marker tracks the marked candidate across positions") {
    MockJudge judge(MockJudge::Mode::kPreferMarker, "GOLD");
    JudgeRequest request = sample_request();
    request.first = "has GOLD standard";
    CHECK(judge.judge(request).verdict == TrialVerdict::kFirst);

    std::swap(request.first, request.second);
    CHECK(judge.judge(request).verdict == TrialVerdict::kSecond);

    request.first = "GOLD";  // both marked: no signal
    CHECK(judge.judge(request).verdict == TrialVerdict::kTie);

    request.first = "plain";
    request.second = "plain too";
    CHECK(judge.judge(request).verdict == TrialVerdict::kTie);
  }

  TEST_CASE("responses carry a parseable raw verdict") {
    MockJudge judge(MockJudge::Mode::kAlwaysSecond);
    const JudgeResponse response = judge.judge(sample_request());
    const auto parsed = parse_verdict(response.raw_text);
    REQUIRE(parsed.has_value());
    CHECK(parsed->verdict == TrialVerdict::kSecond);
  }

  TEST_CASE("spec strings select modes; bad specs are rejected") {
    JudgeRequest request = sample_request();
    request.second = "the TOKEN is here";
    CHECK(MockJudge::from_spec("always-tie").judge(request).verdict == TrialVerdict::kTie);
    CHECK(MockJudge::from_spec("always-first").judge(request).verdict == TrialVerdict::kFirst);
    CHECK(MockJudge::from_spec("always-second").judge(request).verdict ==
          TrialVerdict::kSecond);
    CHECK(MockJudge::from_spec("prefer-marker:TOKEN").judge(request).verdict ==
          TrialVerdict::kSecond);

    CHECK_THROWS_AS(MockJudge::from_spec("coin-flip"), ConfigError);
    CHECK_THROWS_AS(MockJudge::from_spec("prefer-marker:"), ConfigError);
    CHECK_THROWS_AS(MockJudge::from_spec(""), ConfigError);
    CHECK_THROWS_AS(MockJudge(MockJudge::Mode::kPreferMarker, ""), ConfigError);
  }
}

TEST_SUITE("judge.http") {
  TEST_CASE("endpoint config rejects broken invariants") {
    JudgeEndpointConfig config = fast_config();
    CHECK_NOTHROW(config.validate());

    config.base_url.clear();
    CHECK_THROWS_AS(config.validate(), ConfigError);

    config = fast_config();
    config.timeout_seconds = 0.0;
    CHECK_THROWS_AS(config.validate(), ConfigError);

    config = fast_config();
    config.max_in_flight = 0;
    CHECK_THROWS_AS(config.validate(), ConfigError);
  }

  TEST_CASE("constructor rejects a template missing a placeholder") {
    Transport transport = [](const std::string&, const std::string&) { return HttpResult{}; };
    CHECK_THROWS_AS(
        HttpJudge(fast_config(), "no placeholders", transport), ConfigError);
  }

  TEST_CASE("a clean response resolves in one attempt, wire shape verified") {
    std::vector<std::string> bodies;
    std::string seen_path;
    Transport transport = [&](const std::string& path, const std::string& body) {
      seen_path = path;
      bodies.push_back(body);
      return HttpResult{200, chat_body(R"({"winner":"second","reason":"tables"})"), false, {}};
    };
    HttpJudge judge(fast_config(), std::string(default_prompt_template()), transport);
    const JudgeResponse response = judge.judge(sample_request());

    CHECK(response.verdict == TrialVerdict::kSecond);
    CHECK(response.explanation == "tables");
    CHECK(response.attempts == 1);
    REQUIRE(bodies.size() == 1);
    CHECK(seen_path == "/v1/chat/completions");

    // The request is a chat completion: model, inline image, substituted text.
    const auto sent = nlohmann::json::parse(bodies.front());
    CHECK(sent.at("model") == "judge-model");
    const auto& content = sent.at("messages").at(0).at("content");
    CHECK(content.at(0).at("type") == "image_url");
    const std::string url = content.at(0).at("image_url").at("url").get<std::string>();
    CHECK(url.rfind("data:image/png;base64,", 0) == 0);
    const std::string text = content.at(1).at("text").get<std::string>();
    CHECK(text.find("ALPHA transcription") != std::string::npos);
    CHECK(text.find("BETA transcription") != std::string::npos);
    CHECK(text.find("{{candidate_1}}") == std::string::npos);
  }

  TEST_CASE("transport failures are retried until a verdict lands") {
    std::atomic<int> calls{0};
    Transport transport = [&](const std::string&, const std::string&) {
      if (++calls <= 2) return HttpResult{0, "", true, "connection refused"};
      return HttpResult{200, chat_body(R"({"winner":"first"})"), false, {}};
    };
    HttpJudge judge(fast_config(), std::string(default_prompt_template()), transport);
    const JudgeResponse response = judge.judge(sample_request());
    CHECK(response.verdict == TrialVerdict::kFirst);
    CHECK(response.attempts == 3);
    CHECK(calls == 3);
  }

  TEST_CASE("429 is retried; exhaustion reports the transport failure") {
    std::atomic<int> calls{0};
    Transport transport = [&](const std::string&, const std::string&) {
      if (++calls == 1) return HttpResult{429, "slow down", false, {}};
      return HttpResult{200, chat_body(R"({"winner":"tie"})"), false, {}};
    };
    HttpJudge judge(fast_config(), std::string(default_prompt_template()), transport);
    CHECK(judge.judge(sample_request()).attempts == 2);

    std::atomic<int> always_busy{0};
    Transport busy = [&](const std::string&, const std::string&) {
      ++always_busy;
      return HttpResult{503, "maintenance", false, {}};
    };
    HttpJudge judge2(fast_config(), std::string(default_prompt_template()), busy);
    CHECK_THROWS_AS(judge2.judge(sample_request()), TransportError);
    CHECK(always_busy == 3);  // max_retries 2 means 3 attempts
  }

  TEST_CASE("client errors other than 429 fail immediately") {
    std::atomic<int> calls{0};
    Transport transport = [&](const std::string&, const std::string&) {
      ++calls;
      return HttpResult{401, "bad key", false, {}};
    };
    HttpJudge judge(fast_config(), std::string(default_prompt_template()), transport);
    try {
      judge.judge(sample_request());
      FAIL("expected TransportError");
    } catch (const TransportError& error) {
      CHECK(std::string(error.what()).find("401") != std::string::npos);
    }
    CHECK(calls == 1);
  }

  TEST_CASE("persistent word salad becomes a judge failure, not a transport error") {
    std::atomic<int> calls{0};
    Transport transport = [&](const std::string&, const std::string&) {
      ++calls;
      return HttpResult{200, chat_body("I liked the first one a lot, very crisp."), false, {}};
    };
    HttpJudge judge(fast_config(), std::string(default_prompt_template()), transport);
    CHECK_THROWS_AS(judge.judge(sample_request()), JudgeFailure);
    CHECK(calls == 3);
  }

  TEST_CASE("an empty document image is a programming error") {
    Transport transport = [](const std::string&, const std::string&) { return HttpResult{}; };
    HttpJudge judge(fast_config(), std::string(default_prompt_template()), transport);
    JudgeRequest request = sample_request();
    request.image_png.clear();
    CHECK_THROWS_AS(judge.judge(request), std::invalid_argument);
  }
}
