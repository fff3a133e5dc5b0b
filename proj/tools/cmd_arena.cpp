#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "mocr/arena/arena.hpp"
#include "mocr/common/error.hpp"
#include "mocr/judge/judge.hpp"

namespace mocr::cli {

namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path);
  return buffer.str();
}

std::vector<std::uint8_t> read_binary_file(const std::string& path) {
  const std::string text = read_file(path);
  return std::vector<std::uint8_t>(text.begin(), text.end());
}

namespace {

std::vector<std::string> discover_models(const fs::path& transcriptions) {
  std::vector<std::string> models;
  for (const fs::directory_entry& entry : fs::directory_iterator(transcriptions))
    if (entry.is_directory()) models.push_back(entry.path().filename().string());
  std::sort(models.begin(), models.end());
  return models;
}

std::vector<std::string> discover_documents(const fs::path& documents) {
  std::vector<std::string> ids;
  for (const fs::directory_entry& entry : fs::directory_iterator(documents))
    if (entry.is_regular_file() && entry.path().extension() == ".png")
      ids.push_back(entry.path().stem().string());
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::unique_ptr<judge::Judge> build_judge(const ArenaRunOptions& options) {
  constexpr std::string_view kMockPrefix = "mock:";
  if (options.judge_spec.rfind(kMockPrefix, 0) == 0) {
    return std::make_unique<judge::MockJudge>(
        judge::MockJudge::from_spec(options.judge_spec.substr(kMockPrefix.size())));
  }
  if (options.judge_spec == "http") {
    judge::JudgeEndpointConfig config;
    config.base_url = options.judge_url;
    config.path = options.judge_api_path;
    config.model = options.judge_model;
    config.auth_env = options.judge_auth_env;
    config.timeout_seconds = options.judge_timeout;
    config.max_retries = options.judge_retries;
    config.backoff_base_seconds = options.judge_backoff;
    config.max_in_flight = options.judge_in_flight;
    config.requests_per_second = options.judge_rps;
    if (config.base_url.empty())
      throw ConfigError("arena run: --judge http requires --judge-url");
    std::string prompt_template(judge::default_prompt_template());
    if (!options.prompt_template_path.empty())
      prompt_template = read_file(options.prompt_template_path);
    return std::make_unique<judge::HttpJudge>(std::move(config), std::move(prompt_template));
  }
  throw ConfigError("arena run: unknown judge \"" + options.judge_spec +
                    "\" (expected \"http\" or \"mock:<spec>\")");
}

}  // namespace

int run_arena_run(const ArenaRunOptions& options) {
  if (options.transcriptions_dir.empty())
    throw ConfigError("arena run: --transcriptions is required");
  if (options.documents_dir.empty()) throw ConfigError("arena run: --documents is required");
  if (options.log_path.empty()) throw ConfigError("arena run: --log is required");
  if (options.jobs < 1) throw ConfigError("arena run: --jobs must be at least 1");

  const fs::path transcriptions(options.transcriptions_dir);
  const fs::path documents(options.documents_dir);
  if (!fs::is_directory(transcriptions))
    throw IoError("arena run: not a directory: " + options.transcriptions_dir);
  if (!fs::is_directory(documents))
    throw IoError("arena run: not a directory: " + options.documents_dir);

  std::vector<std::string> models = options.models;
  if (models.empty()) models = discover_models(transcriptions);
  if (models.size() < 2)
    throw ConfigError("arena run: need at least 2 models (found " +
                      std::to_string(models.size()) + ")");
  const std::vector<std::string> docs = discover_documents(documents);
  if (docs.empty())
    throw ConfigError("arena run: no .png documents in " + options.documents_dir);

  arena::PairingStrategy strategy;
  if (options.sample_count > 0) {
    strategy.kind = arena::PairingStrategy::Kind::kSampled;
    strategy.sample_count = options.sample_count;
    strategy.seed = options.seed;
  }
  const arena::PairingPlan plan = arena::schedule_pairs(models, docs, strategy);

  const std::unique_ptr<judge::Judge> judge_client = build_judge(options);
  arena::BattleLog log(options.log_path);

  const arena::BattleLoader loader = [&](const arena::BattleTask& task) {
    arena::BattleInputs inputs;
    inputs.document = task.document;
    inputs.a.model = task.model_a;
    inputs.b.model = task.model_b;
    inputs.a.transcription =
        read_file((transcriptions / task.model_a / (task.document + ".md")).string());
    inputs.b.transcription =
        read_file((transcriptions / task.model_b / (task.document + ".md")).string());
    inputs.image_png = read_binary_file((documents / (task.document + ".png")).string());
    return inputs;
  };

  std::printf("arena: %zu models, %zu documents, %zu battles scheduled\n", models.size(),
              docs.size(), plan.tasks.size());
  const arena::RunSummary summary =
      arena::run_arena(plan, *judge_client, log, loader, options.jobs);

  std::printf("already complete: %zu\n", summary.already_complete);
  std::printf("succeeded:        %zu\n", summary.succeeded);
  std::printf("failed:           %zu\n", summary.failed);
  std::printf("task errors:      %zu\n", summary.task_errors);
  for (const std::string& error : summary.errors) std::printf("  - %s\n", error.c_str());

  return summary.clean() ? kOk : kPartial;
}

int run_arena_report(const ArenaReportOptions& options) {
  if (options.log_path.empty()) throw ConfigError("arena report: --log is required");
  if (options.iterations == 0)
    throw ConfigError("arena report: --iterations must be at least 1");
  if (!fs::is_regular_file(options.log_path))
    throw IoError("arena report: no battle log at " + options.log_path);

  const arena::BattleLog log(options.log_path);
  const std::vector<arena::BattleRecord> records = log.load();

  elo::EloConfig config;
  config.initial_rating = options.initial_rating;
  config.k_factor = options.k_factor;
  config.scale = options.scale;
  const arena::Leaderboard board =
      arena::leaderboard(records, config, options.iterations, options.seed);

  std::printf("%4s  %-24s %8s %7s %8s %8s %8s\n", "rank", "model", "elo", "std", "2.5%",
              "97.5%", "battles");
  for (std::size_t i = 0; i < board.entries.size(); ++i) {
    const arena::LeaderboardEntry& entry = board.entries[i];
    std::printf("%4zu  %-24s %8.1f %7.1f %8.1f %8.1f %8zu\n", i + 1, entry.model.c_str(),
                entry.rating.mean, entry.rating.stddev, entry.rating.percentile_low,
                entry.rating.percentile_high, entry.battles);
  }
  std::printf("battles rated: %zu, excluded as failed: %zu\n", board.battles_used,
              board.battles_failed);

  if (!options.out_path.empty()) {
    nlohmann::json entries = nlohmann::json::array();
    for (const arena::LeaderboardEntry& entry : board.entries) {
      entries.push_back({{"model", entry.model},
                         {"mean", entry.rating.mean},
                         {"stddev", entry.rating.stddev},
                         {"percentile_low", entry.rating.percentile_low},
                         {"percentile_high", entry.rating.percentile_high},
                         {"battles", entry.battles}});
    }
    const nlohmann::json report{
        {"schema", "mocr-leaderboard/1"},
        {"iterations", options.iterations},
        {"seed", options.seed},
        {"battles_used", board.battles_used},
        {"battles_failed", board.battles_failed},
        {"entries", std::move(entries)},
    };
    std::ofstream out(options.out_path, std::ios::binary);
    if (!out) throw IoError("arena report: cannot write " + options.out_path);
    out << report.dump(2) << "\n";
    if (!out) throw IoError("arena report: failed writing " + options.out_path);
  }
  return kOk;
}

}  // namespace mocr::cli
