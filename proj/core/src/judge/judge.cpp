#include "mocr/judge/judge.hpp"

#include <algorithm>
#include <cctype>
#include <thread>

#include <nlohmann/json.hpp>

#include "mocr/common/error.hpp"

namespace mocr::judge {

namespace {

constexpr std::string_view kDefaultTemplate =
    R"(You are comparing two transcriptions of the document shown in the image.

Assess how faithfully each transcription preserves the document's content
(fidelity), its structure (reading order, tables, lists, headings), and its
formatting. Ignore which answer is longer; reward accuracy.

Transcription A:
<<<
{{candidate_1}}
>>>

Transcription B:
<<<
{{candidate_2}}
>>>

Answer with exactly one JSON object and nothing else:
{"winner": "first" | "second" | "tie", "reason": "<one sentence>"}
where "first" means Transcription A is better, "second" means Transcription B
is better, and "tie" means they are of comparable quality.)";

std::string fold_ascii(std::string_view text) {
  std::string out(text);
  for (char& c : out)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Balanced-brace candidate starting at `open`; respects JSON string syntax.
// Returns the end index past the closing brace, or npos.
std::size_t matching_brace(std::string_view text, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = open; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      if (c == '\\')
        ++i;
      else if (c == '"')
        in_string = false;
      continue;
    }
    if (c == '"') in_string = true;
    else if (c == '{') ++depth;
    else if (c == '}' && --depth == 0) return i + 1;
  }
  return std::string_view::npos;
}

}  // namespace

std::string_view verdict_name(TrialVerdict verdict) {
  switch (verdict) {
    case TrialVerdict::kFirst: return "first";
    case TrialVerdict::kSecond: return "second";
    case TrialVerdict::kTie: return "tie";
  }
  return "tie";
}

std::optional<TrialVerdict> verdict_from(std::string_view name) {
  const std::string folded = fold_ascii(name);
  if (folded == "first") return TrialVerdict::kFirst;
  if (folded == "second") return TrialVerdict::kSecond;
  if (folded == "tie") return TrialVerdict::kTie;
  return std::nullopt;
}

void JudgeEndpointConfig::validate() const {
  if (base_url.empty()) throw ConfigError("judge endpoint: base URL is required");
  if (!(timeout_seconds > 0.0)) throw ConfigError("judge endpoint: timeout must be positive");
  if (max_in_flight < 1) throw ConfigError("judge endpoint: in-flight limit must be >= 1");
  if (backoff_base_seconds < 0.0)
    throw ConfigError("judge endpoint: backoff base must be >= 0");
  if (requests_per_second < 0.0)
    throw ConfigError("judge endpoint: request rate must be >= 0");
}

std::string_view default_prompt_template() { return kDefaultTemplate; }

PromptPayload render_prompt(std::string_view template_text, const JudgeRequest& request) {
  constexpr std::string_view kFirst = "{{candidate_1}}";
  constexpr std::string_view kSecond = "{{candidate_2}}";
  for (std::string_view placeholder : {kFirst, kSecond}) {
    if (template_text.find(placeholder) == std::string_view::npos)
      throw ConfigError("prompt template is missing placeholder " + std::string(placeholder));
  }
  std::string text(template_text);
  auto substitute = [&](std::string_view placeholder, const std::string& value) {
    std::size_t at = 0;
    while ((at = text.find(placeholder, at)) != std::string::npos) {
      text.replace(at, placeholder.size(), value);
      at += value.size();
    }
  };
  substitute(kFirst, request.first);
  substitute(kSecond, request.second);
  return PromptPayload{std::move(text), request.image_png};
}

std::optional<VerdictParse> parse_verdict(std::string_view raw) {
  for (std::size_t open = raw.find('{'); open != std::string_view::npos;
       open = raw.find('{', open + 1)) {
    const std::size_t end = matching_brace(raw, open);
    if (end == std::string_view::npos) continue;
    const nlohmann::json object =
        nlohmann::json::parse(raw.substr(open, end - open), nullptr, false);
    if (object.is_discarded() || !object.is_object()) continue;
    const auto winner = object.find("winner");
    if (winner == object.end() || !winner->is_string()) continue;
    const std::optional<TrialVerdict> verdict = verdict_from(winner->get<std::string>());
    if (!verdict) continue;
    VerdictParse parsed{*verdict, {}};
    for (const char* key : {"reason", "explanation"}) {
      const auto it = object.find(key);
      if (it != object.end() && it->is_string()) {
        parsed.explanation = it->get<std::string>();
        break;
      }
    }
    return parsed;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// MockJudge

MockJudge::MockJudge(Mode mode, std::string marker, std::chrono::milliseconds delay)
    : mode_(mode), marker_(std::move(marker)), delay_(delay) {
  if (mode_ == Mode::kPreferMarker && marker_.empty())
    throw ConfigError("mock judge: prefer-marker requires a marker token");
}

MockJudge MockJudge::from_spec(std::string_view spec) {
  if (spec == "always-tie") return MockJudge(Mode::kAlwaysTie);
  if (spec == "always-first") return MockJudge(Mode::kAlwaysFirst);
  if (spec == "always-second") return MockJudge(Mode::kAlwaysSecond);
  constexpr std::string_view kPrefix = "prefer-marker:";
  if (spec.rfind(kPrefix, 0) == 0 && spec.size() > kPrefix.size())
    return MockJudge(Mode::kPreferMarker, std::string(spec.substr(kPrefix.size())));
  throw ConfigError("unknown mock judge spec \"" + std::string(spec) + "\"");
}

JudgeResponse MockJudge::judge(const JudgeRequest& request) {
  if (delay_.count() > 0) std::this_thread::sleep_for(delay_);
  TrialVerdict verdict = TrialVerdict::kTie;
  switch (mode_) {
    case Mode::kAlwaysTie:
      break;
    case Mode::kAlwaysFirst:
      verdict = TrialVerdict::kFirst;
      break;
    case Mode::kAlwaysSecond:
      verdict = TrialVerdict::kSecond;
      break;
    case Mode::kPreferMarker: {
      const bool in_first = request.first.find(marker_) != std::string::npos;
      const bool in_second = request.second.find(marker_) != std::string::npos;
      if (in_first != in_second)
        verdict = in_first ? TrialVerdict::kFirst : TrialVerdict::kSecond;
      break;
    }
  }
  JudgeResponse response;
  response.verdict = verdict;
  response.raw_text =
      std::string(R"({"winner":")") + std::string(verdict_name(verdict)) + R"("})";
  return response;
}

}  // namespace mocr::judge
