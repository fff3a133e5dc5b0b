#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "commands.hpp"
#include "mocr/common/error.hpp"
#include "mocr/parse/model.hpp"
#include "mocr/render/bitmap.hpp"
#include "mocr/render/similarity.hpp"

namespace mocr::cli {

int run_score(const ScoreOptions& options) {
  if (options.reference_path.empty()) throw ConfigError("score: --reference is required");
  if (options.predicted_path.empty()) throw ConfigError("score: --predicted is required");

  const render::Bitmap reference = render::read_png(options.reference_path);
  const std::string predicted = read_file(options.predicted_path);
  const render::ScoreBreakdown score = render::reconstruction_score(reference, predicted);

  std::printf("pixel:      %.4f\n", score.pixel);
  std::printf("structural: %.4f\n", score.structural);
  std::printf("composite:  %.4f\n", score.composite);
  std::printf("render:     %s\n", score.failed ? "failed" : "ok");
  // A zero score is a valid measurement, not a tool failure.
  return kOk;
}

int run_parse_validate(const ParseValidateOptions& options) {
  if (options.input_path.empty()) throw ConfigError("parse validate: --input is required");

  const std::string content = read_file(options.input_path);
  std::size_t documents = 0;
  std::size_t bad = 0;
  std::size_t line_number = 0;
  std::size_t start = 0;
  while (start <= content.size()) {
    const std::size_t end = content.find('\n', start);
    const std::string_view line(content.data() + start,
                                (end == std::string::npos ? content.size() : end) - start);
    start = (end == std::string::npos) ? content.size() + 1 : end + 1;
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    parse::ParsedDocument document;
    try {
      document = parse::deserialize_document(line);
    } catch (const TextParseError& error) {
      throw TextParseError("line " + std::to_string(line_number) + ": " + error.what());
    }
    ++documents;
    const std::vector<parse::Violation> violations = parse::validate_document(document);
    if (violations.empty()) continue;
    ++bad;
    for (const parse::Violation& violation : violations) {
      if (violation.element)
        std::printf("line %zu, element %zu: %s\n", line_number, *violation.element,
                    violation.reason.c_str());
      else
        std::printf("line %zu: %s\n", line_number, violation.reason.c_str());
    }
  }

  if (documents == 0) throw TextParseError(options.input_path + ": no documents found");
  if (bad > 0) {
    std::printf("%zu of %zu documents invalid\n", bad, documents);
    return kPartial;
  }
  std::printf("OK (%zu document%s)\n", documents, documents == 1 ? "" : "s");
  return kOk;
}

}  // namespace mocr::cli
