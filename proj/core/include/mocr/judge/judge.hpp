#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mocr::judge {

/// Outcome of a single judged trial.
enum class TrialVerdict { kFirst, kSecond, kTie };

std::string_view verdict_name(TrialVerdict verdict);
std::optional<TrialVerdict> verdict_from(std::string_view name);

struct JudgeEndpointConfig {
  std::string base_url;  // scheme://host[:port]
  std::string path = "/v1/chat/completions";
  std::string model;
  std::string auth_env = "MOCR_JUDGE_API_KEY";  // token read from this env var
  double timeout_seconds = 60.0;
  unsigned max_retries = 3;          // retries after the first attempt
  double backoff_base_seconds = 0.5; // attempt n sleeps base * 2^n
  unsigned max_in_flight = 4;
  double requests_per_second = 0.0;  // token bucket; 0 disables rate limiting

  /// Throws ConfigError when an invariant is broken (timeout <= 0,
  /// in-flight < 1, empty base URL).
  void validate() const;
};

/// One comparison to adjudicate. Transcriptions may be empty (a legal,
/// losing-prone candidate); the image may not.
struct JudgeRequest {
  std::vector<std::uint8_t> image_png;
  std::string first;
  std::string second;
  std::string template_id = "default";
};

struct JudgeResponse {
  std::string raw_text;  // judge output as received
  TrialVerdict verdict = TrialVerdict::kTie;
  std::string explanation;  // judge's reasoning, when it offered one
  unsigned attempts = 1;    // HTTP attempts spent on this verdict
};

/// Prompt rendered for transmission: one text part, one image part.
struct PromptPayload {
  std::string text;
  std::vector<std::uint8_t> image;
};

/// The built-in comparison prompt: asks for fidelity, structure and
/// formatting assessment and a strict JSON verdict. Replaceable by any
/// template containing {{candidate_1}} and {{candidate_2}}.
std::string_view default_prompt_template();

/// Substitutes both candidates into the template in presentation order.
/// Throws ConfigError naming the placeholder if one is missing.
PromptPayload render_prompt(std::string_view template_text, const JudgeRequest& request);

struct VerdictParse {
  TrialVerdict verdict;
  std::string explanation;
};

/// Extracts the first well-formed JSON object whose "winner" is one of
/// first/second/tie (ASCII case-insensitive). Total and deterministic;
/// nullopt when no such object exists.
std::optional<VerdictParse> parse_verdict(std::string_view raw);

/// Adjudicates battles. Implementations must be safe to share across
/// threads and must never mutate the request.
class Judge {
 public:
  virtual ~Judge() = default;
  virtual JudgeResponse judge(const JudgeRequest& request) = 0;
};

/// Deterministic stand-in for tests and offline runs.
///
/// Spec strings: "always-tie", "always-first", "always-second", or
/// "prefer-marker:TOKEN" (the candidate containing TOKEN wins; both or
/// neither is a tie). An optional delay simulates judge latency.
class MockJudge : public Judge {
 public:
  enum class Mode { kAlwaysTie, kAlwaysFirst, kAlwaysSecond, kPreferMarker };

  MockJudge(Mode mode, std::string marker = {},
            std::chrono::milliseconds delay = std::chrono::milliseconds(0));

  /// Throws ConfigError on an unknown spec string.
  static MockJudge from_spec(std::string_view spec);

  JudgeResponse judge(const JudgeRequest& request) override;

 private:
  Mode mode_;
  std::string marker_;
  std::chrono::milliseconds delay_;
};

/// Result of one HTTP exchange, as seen by the retry loop.
struct HttpResult {
  int status = 0;
  std::string body;
  bool transport_error = false;  // connect failure, timeout
  std::string error;
};

/// POSTs `body` to `path`; injectable so tests can script transports.
using Transport = std::function<HttpResult(const std::string& path, const std::string& body)>;

/// Chat-completion-style HTTP judge. Sends the document image inline
/// (base64 data URL) plus the rendered prompt text; retries timeouts, 429
/// and 5xx with exponential backoff; other 4xx are permanent. Enforces the
/// configured in-flight cap and request rate across threads.
class HttpJudge : public Judge {
 public:
  /// Default transport talks to config.base_url via HTTP. Throws
  /// ConfigError on invalid config or a template missing a placeholder.
  HttpJudge(JudgeEndpointConfig config, std::string prompt_template,
            Transport transport = {});
  ~HttpJudge() override;

  JudgeResponse judge(const JudgeRequest& request) override;

 private:
  struct Limiter;
  JudgeEndpointConfig config_;
  std::string template_;
  Transport transport_;
  std::unique_ptr<Limiter> limiter_;
};

}  // namespace mocr::judge
