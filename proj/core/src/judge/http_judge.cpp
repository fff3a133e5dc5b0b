#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdlib>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "mocr/common/error.hpp"
#include "mocr/judge/judge.hpp"

namespace mocr::judge {

namespace {

std::string base64(std::span<const std::uint8_t> data) {
  static constexpr char kAlphabet[] =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((data.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 3 <= data.size(); i += 3) {
    const std::uint32_t n = (data[i] << 16) | (data[i + 1] << 8) | data[i + 2];
    out.push_back(kAlphabet[(n >> 18) & 63]);
    out.push_back(kAlphabet[(n >> 12) & 63]);
    out.push_back(kAlphabet[(n >> 6) & 63]);
    out.push_back(kAlphabet[n & 63]);
  }
  if (i + 1 == data.size()) {
    const std::uint32_t n = data[i] << 16;
    out.push_back(kAlphabet[(n >> 18) & 63]);
    out.push_back(kAlphabet[(n >> 12) & 63]);
    out.append("==");
  } else if (i + 2 == data.size()) {
    const std::uint32_t n = (data[i] << 16) | (data[i + 1] << 8);
    out.push_back(kAlphabet[(n >> 18) & 63]);
    out.push_back(kAlphabet[(n >> 12) & 63]);
    out.push_back(kAlphabet[(n >> 6) & 63]);
    out.push_back('=');
  }
  return out;
}

bool retryable_status(int status) {
  return status == 429 || (status >= 500 && status < 600);
}

// Chat-completion response: content of the first choice's message.
std::string extract_content(const std::string& body) {
  const nlohmann::json response = nlohmann::json::parse(body, nullptr, false);
  if (response.is_discarded()) return body;  // fall back to the raw body
  const auto choices = response.find("choices");
  if (choices == response.end() || !choices->is_array() || choices->empty()) return body;
  const nlohmann::json& message = choices->front().value("message", nlohmann::json::object());
  const auto content = message.find("content");
  if (content != message.end() && content->is_string()) return content->get<std::string>();
  return body;
}

}  // namespace

// In-flight cap plus token-bucket rate limit, shared by all threads using
// one client.
struct HttpJudge::Limiter {
  explicit Limiter(const JudgeEndpointConfig& config)
      : cap(config.max_in_flight),
        rate(config.requests_per_second),
        burst(std::max(1.0, config.requests_per_second)),
        tokens(burst),
        last_refill(std::chrono::steady_clock::now()) {}

  void acquire() {
    std::unique_lock lock(mutex);
    cv.wait(lock, [&] { return in_flight < cap; });
    ++in_flight;
    if (rate <= 0.0) return;
    for (;;) {
      const auto now = std::chrono::steady_clock::now();
      tokens = std::min(burst,
                        tokens + rate * std::chrono::duration<double>(now - last_refill).count());
      last_refill = now;
      if (tokens >= 1.0) {
        tokens -= 1.0;
        return;
      }
      const double wait_seconds = (1.0 - tokens) / rate;
      lock.unlock();
      std::this_thread::sleep_for(std::chrono::duration<double>(wait_seconds));
      lock.lock();
    }
  }

  void release() {
    {
      std::lock_guard lock(mutex);
      --in_flight;
    }
    cv.notify_one();
  }

  std::mutex mutex;
  std::condition_variable cv;
  unsigned in_flight = 0;
  const unsigned cap;
  const double rate;
  const double burst;
  double tokens;
  std::chrono::steady_clock::time_point last_refill;
};

HttpJudge::HttpJudge(JudgeEndpointConfig config, std::string prompt_template,
                     Transport transport)
    : config_(std::move(config)),
      template_(std::move(prompt_template)),
      transport_(std::move(transport)),
      limiter_(std::make_unique<Limiter>(config_)) {
  config_.validate();
  // Fail on a broken template now, not mid-run.
  JudgeRequest probe;
  probe.image_png = {0};
  render_prompt(template_, probe);

  if (!transport_) {
    // Default transport: one shared httplib client; httplib serializes
    // per-connection state internally per call.
    auto client = std::make_shared<httplib::Client>(config_.base_url);
    const auto timeout = std::chrono::duration<double>(config_.timeout_seconds);
    client->set_connection_timeout(timeout);
    client->set_read_timeout(timeout);
    client->set_write_timeout(timeout);
    std::string token;
    if (const char* value = std::getenv(config_.auth_env.c_str())) token = value;
    if (!token.empty()) client->set_bearer_token_auth(token);
    transport_ = [client](const std::string& path, const std::string& body) {
      HttpResult result;
      httplib::Result response = client->Post(path, body, "application/json");
      if (!response) {
        result.transport_error = true;
        result.error = httplib::to_string(response.error());
        return result;
      }
      result.status = response->status;
      result.body = response->body;
      return result;
    };
  }
}

HttpJudge::~HttpJudge() = default;

JudgeResponse HttpJudge::judge(const JudgeRequest& request) {
  if (request.image_png.empty())
    throw std::invalid_argument("judge request: document image is required");

  const PromptPayload prompt = render_prompt(template_, request);
  const nlohmann::json body{
      {"model", config_.model},
      {"messages",
       nlohmann::json::array(
           {{{"role", "user"},
             {"content",
              nlohmann::json::array(
                  {{{"type", "image_url"},
                    {"image_url",
                     {{"url", "data:image/png;base64," + base64(prompt.image)}}}},
                   {{"type", "text"}, {"text", prompt.text}}})}}})},
  };
  const std::string payload = body.dump();

  std::string last_failure = "no attempts made";
  bool last_was_unparseable = false;
  const unsigned total_attempts = config_.max_retries + 1;
  for (unsigned attempt = 0; attempt < total_attempts; ++attempt) {
    if (attempt > 0) {
      // Exponential, hence nondecreasing, backoff.
      const double delay = config_.backoff_base_seconds * std::pow(2.0, attempt - 1);
      if (delay > 0.0) std::this_thread::sleep_for(std::chrono::duration<double>(delay));
    }

    limiter_->acquire();
    HttpResult result = transport_(config_.path, payload);
    limiter_->release();

    if (result.transport_error) {
      last_failure = "transport: " + (result.error.empty() ? "unknown error" : result.error);
      last_was_unparseable = false;
      continue;
    }
    if (result.status != 200) {
      const std::string failure = "HTTP " + std::to_string(result.status);
      if (!retryable_status(result.status)) {
        throw TransportError("judge request failed permanently (" + failure + ")");
      }
      last_failure = failure;
      last_was_unparseable = false;
      continue;
    }

    JudgeResponse response;
    response.raw_text = extract_content(result.body);
    response.attempts = attempt + 1;
    if (std::optional<VerdictParse> parsed = parse_verdict(response.raw_text)) {
      response.verdict = parsed->verdict;
      response.explanation = std::move(parsed->explanation);
      return response;
    }
    last_failure = "no well-formed verdict in response";
    last_was_unparseable = true;
  }

  const std::string summary = "judge gave no usable verdict after " +
                              std::to_string(total_attempts) + " attempts (last: " +
                              last_failure + ")";
  if (last_was_unparseable) throw JudgeFailure(summary);
  throw TransportError(summary);
}

}  // namespace mocr::judge
